import numpy as np
import pytest

from bundlebench.config import RunConfig
from bundlebench.elliptic import EllipticContext
from bundlebench.pipeline import resolved_basis, root_system, transition

TAU = complex(0.3, 1.5)


@pytest.fixture(autouse=True)
def _unsigned(monkeypatch):
    """Never touch ~/.bundlebench during tests."""
    monkeypatch.setenv("BUNDLEBENCH_DISABLE_SIGN", "1")


@pytest.fixture
def ctx():
    return EllipticContext(TAU)


@pytest.fixture
def rng():
    return np.random.default_rng(7)


@pytest.fixture
def rs():
    """Root system by id, cached across the session by the pipeline."""
    return root_system


@pytest.fixture
def td():
    return transition


@pytest.fixture
def resolved():
    return resolved_basis


@pytest.fixture
def cfg():
    def make(**kw):
        return RunConfig(**kw).validate()
    return make
