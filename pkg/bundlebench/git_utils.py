"""Source revision lookup for report provenance."""

import subprocess
from pathlib import Path
from typing import Optional


def source_revision(start: Optional[Path] = None) -> str:
    """HEAD commit of the checkout containing *start*, or ``"unknown"``.

    Walks up from *start* (default: this package) to the first directory with
    a ``.git`` entry; installed wheels have none and report ``"unknown"``.
    """
    here = Path(start or Path(__file__).resolve().parent)
    root = next((p for p in (here, *here.parents) if (p / ".git").exists()), None)
    if root is None:
        return "unknown"
    try:
        proc = subprocess.run(
            ["git", "-C", str(root), "rev-parse", "HEAD"],
            capture_output=True,
            text=True,
            timeout=5,
        )
    except (subprocess.TimeoutExpired, FileNotFoundError):
        return "unknown"
    return proc.stdout.strip() if proc.returncode == 0 else "unknown"
