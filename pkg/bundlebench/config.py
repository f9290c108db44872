"""Run configuration: defaults, ``key = value`` config files and CLI overrides.

Precedence is CLI flags > config file > defaults.  Unknown keys in a config
file are rejected, and every resolved configuration is validated.
"""

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from .elliptic import MIN_IMAG_TAU
from .errors import ConfigError

DEFAULT_TAU = complex(0.3, 1.5)

DEFAULT_TOLERANCES = {
    "gram": 1e-12,
    "eigen": 1e-12,
    "grading": 1e-12,
    "canonical": 1e-10,
    "fay": 1e-10,
    "quasi": 1e-10,
    "difference": 1e-6,
    "lax_quasi": 1e-9,
    "residue": 1e-6,
    "orthogonality": 1e-9,
    "scan": 1e-8,
    "hamiltonian": 1e-8,
    "standard": 1e-8,
    "rll": 1e-8,
    "cybe": 1e-8,
    "ablation": 1e-4,
    "sensitivity": 1e-6,
}

_SCALAR_KEYS = ("algebra", "class", "tau", "seed", "samples", "fay_samples", "scan_samples", "out")


def parse_tau(text: str) -> complex:
    """``"re,im"`` -> complex."""
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) != 2:
        raise ConfigError(f"tau must be given as re,im; got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise ConfigError(f"tau must be given as re,im; got {text!r}") from None


@dataclass
class RunConfig:
    algebra: str = "A1"
    j: Optional[int] = None
    tau: complex = DEFAULT_TAU
    seed: int = 7
    samples: int = 20
    fay_samples: int = 1000
    scan_samples: int = 32
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    out: Optional[Path] = None

    def tol(self, name: str) -> float:
        return self.tolerances[name]

    def validate(self) -> "RunConfig":
        if complex(self.tau).imag < MIN_IMAG_TAU:
            raise ConfigError(f"Im tau must be >= {MIN_IMAG_TAU}, got {complex(self.tau).imag}")
        for name in ("samples", "fay_samples", "scan_samples"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1, got {getattr(self, name)}")
        for name, value in self.tolerances.items():
            if not value > 0:
                raise ConfigError(f"tolerance {name} must be positive, got {value}")
        if self.j is not None and self.j < 0:
            raise ConfigError(f"class index must be >= 0, got {self.j}")
        return self

    def to_dict(self) -> dict:
        return {
            "algebra": self.algebra,
            "class": self.j,
            "tau": [self.tau.real, self.tau.imag],
            "seed": self.seed,
            "samples": self.samples,
            "fay_samples": self.fay_samples,
            "scan_samples": self.scan_samples,
            "tolerances": dict(sorted(self.tolerances.items())),
        }


def _coerce(key: str, value: str):
    try:
        if key == "tau":
            return parse_tau(value)
        if key in ("seed", "samples", "fay_samples", "scan_samples"):
            return int(value)
        if key == "class":
            return None if value.lower() in ("", "none", "default") else int(value)
        if key.startswith("tol_"):
            return float(value)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {value!r}") from None
    if key == "out":
        return Path(value)
    return value


def load_config_file(path: Path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file {path} not found")
    out = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key.startswith("tol_"):
            if key[4:] not in DEFAULT_TOLERANCES:
                raise ConfigError(f"{path}:{lineno}: unknown tolerance {key}")
        elif key not in _SCALAR_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key}")
        out[key] = _coerce(key, value)
    return out


def _apply(cfg: RunConfig, values: dict) -> RunConfig:
    tolerances = dict(cfg.tolerances)
    fields = {}
    for key, value in values.items():
        if value is None:
            continue
        if key.startswith("tol_"):
            tolerances[key[4:]] = value
        elif key == "class":
            fields["j"] = value
        else:
            fields[key] = value
    return replace(cfg, tolerances=tolerances, **fields)


def build_config(flags: dict, config_path: Optional[Path] = None) -> RunConfig:
    """Defaults, then the config file, then every flag that was given."""
    cfg = RunConfig()
    if config_path is not None:
        cfg = _apply(cfg, load_config_file(config_path))
    return _apply(cfg, flags).validate()
