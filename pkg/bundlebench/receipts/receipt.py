"""
Content-addressed receipts for sealed report directories.

A receipt binds ``manifest.json``, ``provenance.json`` and ``results.json``
by hash, chains one checkpoint per check record of the report, and is
identified by ``bundle:<sha256 of its canonical body>``.  When pynacl is
installed (``pip install bundlebench[sign]``) the id is signed with an
Ed25519 key kept in ``~/.bundlebench/identity.key``.
Set BUNDLEBENCH_DISABLE_SIGN=1 to force unsigned receipts.
"""

import base64
import hashlib
import json
import os
from datetime import datetime, timezone
from pathlib import Path

try:
    import nacl.encoding
    import nacl.signing
    _HAS_NACL = True
except ModuleNotFoundError:
    _HAS_NACL = False

_IDENTITY_DIR = Path.home() / ".bundlebench"
_IDENTITY_KEY = _IDENTITY_DIR / "identity.key"

RECEIPT_VERSION = "bundlebench-receipt/1"
UNSIGNED = "unsigned:placeholder"
NO_KEY = "AA=="

ARTIFACTS = {
    "manifest": "manifest.json",
    "provenance": "provenance.json",
    "results": "results.json",
}


def canonicalize(data) -> bytes:
    """Sorted keys, compact separators, UTF-8."""
    return json.dumps(
        data, sort_keys=True, separators=(",", ":"), ensure_ascii=False
    ).encode("utf-8")


def hash_sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def hash_file(path: Path) -> str:
    return hash_sha256(Path(path).read_bytes())


def _iso_now() -> str:
    return datetime.now(timezone.utc).isoformat().replace("+00:00", "Z")


def _policy_hash() -> str:
    policy = Path(__file__).resolve().parents[2] / "POLICY.md"
    return hash_file(policy) if policy.exists() else hash_sha256(b"")


# ---------------------------------------------------------------------------
# Signing (optional)
# ---------------------------------------------------------------------------

def _signing_key():
    """Load or create the local Ed25519 key; None when signing is unavailable or disabled."""
    if os.getenv("BUNDLEBENCH_DISABLE_SIGN") == "1" or not _HAS_NACL:
        return None
    if _IDENTITY_KEY.exists():
        return nacl.signing.SigningKey(_IDENTITY_KEY.read_bytes())
    _IDENTITY_DIR.mkdir(parents=True, exist_ok=True)
    key = nacl.signing.SigningKey.generate()
    _IDENTITY_KEY.write_bytes(bytes(key))
    _IDENTITY_KEY.chmod(0o600)
    return key


def _sign(key, message: str) -> str:
    return base64.b64encode(key.sign(message.encode("utf-8")).signature).decode()


def _public_key_b64(key) -> str:
    return key.verify_key.encode(encoder=nacl.encoding.Base64Encoder).decode()


# ---------------------------------------------------------------------------
# Checkpoint chain
# ---------------------------------------------------------------------------

def chain_records(records: list[dict]) -> list[dict]:
    """One checkpoint per record: ``curr = sha256(prev + canonical(record))``."""
    out = []
    prev = ""
    for index, record in enumerate(records):
        canonical = canonicalize(record).decode("utf-8")
        curr = hash_sha256((prev + canonical).encode("utf-8"))
        out.append({
            "index": index,
            "check": record.get("name", f"check-{index}"),
            "passed": bool(record.get("passed")),
            "outputs_sha256": hash_sha256(canonical.encode("utf-8")),
            "prev_chain": prev,
            "curr_chain": curr,
        })
        prev = curr
    return out


def _body_id(body: dict) -> str:
    return f"bundle:{hash_sha256(canonicalize(body))}"


def create_receipt(out_dir: Path, manifest: dict, provenance: dict, results: dict) -> dict:
    """Build the receipt for artifacts already written to *out_dir*; write receipt.json."""
    key = _signing_key()
    records = results.get("records", [])
    checkpoints = chain_records(records)
    if key is not None:
        for ckpt in checkpoints:
            ckpt["signature"] = _sign(key, ckpt["curr_chain"])

    body = {
        "version": RECEIPT_VERSION,
        "created_at": _iso_now(),
        "command": results.get("command", ""),
        "verdict": results.get("verdict", ""),
        "claims": [
            {"claim_type": "manifest", "sha256": f"sha256:{hash_sha256(canonicalize(manifest))}"},
            {"claim_type": "provenance", "sha256": f"sha256:{hash_sha256(canonicalize(provenance))}"},
            {"claim_type": "results", "sha256": f"sha256:{hash_sha256(canonicalize(results))}"},
        ],
        "checkpoints": checkpoints,
        "policy_ref": f"sha256:{_policy_hash()}",
        "signer_public_key": _public_key_b64(key) if key is not None else NO_KEY,
    }
    receipt_id = _body_id(body)
    signatures = [f"ed25519:{_sign(key, receipt_id)}"] if key is not None else [UNSIGNED]
    receipt = {"id": receipt_id, **body, "signatures": signatures}

    (Path(out_dir) / "receipt.json").write_text(
        json.dumps(receipt, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    return receipt


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

def _load(path: Path):
    return json.loads(path.read_text(encoding="utf-8"))


def verify_receipt(receipt_dir: Path) -> list[str]:
    """Re-derive claims, chain, id and signature; return the problems found (empty = intact)."""
    receipt_dir = Path(receipt_dir)
    receipt = _load(receipt_dir / "receipt.json")
    problems = []

    for claim in receipt.get("claims", []):
        name = ARTIFACTS.get(claim["claim_type"])
        path = receipt_dir / name if name else None
        if path is None or not path.exists():
            problems.append(f"missing artifact for claim '{claim['claim_type']}'")
            continue
        actual = f"sha256:{hash_sha256(canonicalize(_load(path)))}"
        if actual != claim["sha256"]:
            problems.append(
                f"hash mismatch for '{claim['claim_type']}': expected {claim['sha256']}, got {actual}"
            )

    results_path = receipt_dir / "results.json"
    records = _load(results_path).get("records", []) if results_path.exists() else []
    stored = receipt.get("checkpoints", [])
    derived = chain_records(records)
    if len(stored) != len(derived):
        problems.append(f"checkpoint count {len(stored)} does not match {len(derived)} records")
    for ours, theirs in zip(derived, stored):
        for key in ("outputs_sha256", "prev_chain", "curr_chain"):
            if ours[key] != theirs.get(key):
                problems.append(f"checkpoint {ours['index']} ({ours['check']}): {key} mismatch")
                break

    body = {k: v for k, v in receipt.items() if k not in ("id", "signatures")}
    expected_id = _body_id(body)
    if receipt.get("id") != expected_id:
        problems.append(f"receipt id mismatch: expected {expected_id}, got {receipt.get('id')}")

    signatures = receipt.get("signatures", [])
    pub = receipt.get("signer_public_key", NO_KEY)
    if any(s.startswith("ed25519:") for s in signatures) and _HAS_NACL and pub != NO_KEY:
        try:
            verify_key = nacl.signing.VerifyKey(base64.b64decode(pub))
            for entry in signatures:
                if entry.startswith("ed25519:"):
                    sig = base64.b64decode(entry[len("ed25519:"):])
                    verify_key.verify(receipt["id"].encode("utf-8"), sig)
        except Exception as exc:
            problems.append(f"signature verification failed: {exc}")

    return problems


def receipt_summary(receipt_dir: Path) -> dict:
    """Fields shown by ``bundlebench inspect``."""
    receipt = _load(Path(receipt_dir) / "receipt.json")
    checkpoints = receipt.get("checkpoints", [])
    signed = any(s.startswith("ed25519:") for s in receipt.get("signatures", []))
    return {
        "id": receipt.get("id", "?"),
        "command": receipt.get("command", "?"),
        "verdict": receipt.get("verdict", "?"),
        "created": receipt.get("created_at", "?"),
        "checks": f"{sum(c.get('passed', False) for c in checkpoints)}/{len(checkpoints)} passed",
        "signing": "ed25519" if signed else "unsigned",
    }
