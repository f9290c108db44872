"""Check records, the report document, and sealing a report directory."""

import json
import platform
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Optional

import numpy as np

from .. import __version__
from ..config import RunConfig
from ..git_utils import source_revision
from ..receipts.receipt import create_receipt


def jsonable(value: Any) -> Any:
    """Plain JSON data: Fraction -> "p/q", complex -> [re, im], numpy -> Python."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, Path):
        return str(value)
    if hasattr(value, "to_dict"):
        return jsonable(value.to_dict())
    if hasattr(value, "as_dict"):
        return jsonable(value.as_dict())
    return value


@dataclass
class CheckRecord:
    name: str
    passed: bool
    residual: Optional[float] = None
    tolerance: Optional[float] = None
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return jsonable({
            "name": self.name,
            "passed": self.passed,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "detail": self.detail,
        })


def check(name: str, residual: float, tolerance: float, **detail) -> CheckRecord:
    """Residual-against-tolerance record; NaN never passes."""
    residual = float(residual)
    return CheckRecord(name, bool(residual <= tolerance), residual, tolerance, detail)


def exact(name: str, ok: bool, **detail) -> CheckRecord:
    """Record for an exact (pass/fail) comparison."""
    return CheckRecord(name, bool(ok), None, None, detail)


def exceeds(name: str, value: float, floor: float, **detail) -> CheckRecord:
    """Negative control: passes when *value* rises above *floor*."""
    value = float(value)
    return CheckRecord(name, bool(value > floor), value, floor, {"direction": "above", **detail})


class ReportDocument:
    """Ordered check records plus free-form data for one command."""

    def __init__(self, command: str, config: RunConfig):
        self.command = command
        self.config = config
        self.records: list[CheckRecord] = []
        self.data: dict = {}
        self.notes: list[str] = []
        self.seconds: dict[str, float] = {}
        self.generated_at = datetime.now(timezone.utc).isoformat().replace("+00:00", "Z")

    def add(self, record: CheckRecord) -> CheckRecord:
        self.records.append(record)
        return record

    def timed(self, label: str, fn: Callable, *args, **kwargs):
        """Call *fn* and keep its wall time under *label* in the timing field."""
        start = time.perf_counter()
        try:
            return fn(*args, **kwargs)
        finally:
            self.seconds[label] = round(time.perf_counter() - start, 6)

    def note(self, message: str) -> None:
        if message not in self.notes:
            self.notes.append(message)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if not r.passed]

    def to_dict(self) -> dict:
        return jsonable({
            "command": self.command,
            "config": self.config.to_dict(),
            "verdict": self.verdict,
            "records": [r.to_dict() for r in self.records],
            "data": self.data,
            "notes": self.notes,
            "timing": {"generated_at": self.generated_at, "seconds": self.seconds},
        })


def _write_json(path: Path, data: dict) -> None:
    path.write_text(json.dumps(data, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def provenance() -> dict:
    return {
        "bundlebench": __version__,
        "source_revision": source_revision(),
        "python": platform.python_version(),
        "numpy": np.__version__,
        "sympy": _sympy_version(),
    }


def _sympy_version() -> str:
    import sympy

    return sympy.__version__


def seal(report: ReportDocument, out_dir: Path) -> dict:
    """Write manifest, provenance, results and receipt into *out_dir*; return the receipt."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = {"command": report.command, "config": jsonable(report.config.to_dict())}
    prov = provenance()
    results = report.to_dict()
    _write_json(out_dir / "manifest.json", manifest)
    _write_json(out_dir / "provenance.json", prov)
    _write_json(out_dir / "results.json", results)
    return create_receipt(out_dir, manifest, prov, results)
