import pytest

from bundlebench.config import DEFAULT_TOLERANCES
from bundlebench.errors import SingularPhaseError
from bundlebench.lax import build_lax, moment_reduce, random_spin
from bundlebench.rmatrix import (
    cybe_point,
    cybe_residual,
    cybe_sweep,
    poisson_table,
    rll_point,
    rll_residual,
    rll_sweep,
)

RLL = DEFAULT_TOLERANCES["rll"]
CYBE = DEFAULT_TOLERANCES["cybe"]
ABLATION = DEFAULT_TOLERANCES["ablation"]

Z1, Z2, Z3 = 0.21 + 0.37j, -0.13 + 0.58j, 0.34 - 0.22j


def reduced_lax(resolved, ctx, algebra, j, seed=7):
    basis = resolved(algebra, j).basis
    for s in range(seed, seed + 20):
        try:
            return build_lax(basis, moment_reduce(random_spin(basis, s), basis), ctx)
        except SingularPhaseError:
            continue
    pytest.fail(f"no regular draw for {algebra} j={j}")


@pytest.mark.parametrize("algebra, j", [("A1", 1), ("A1", 0), ("A2", 2)])
def test_rll_reduced(resolved, ctx, algebra, j):
    summary = rll_sweep(resolved(algebra, j).basis, ctx, 7, 3)
    assert summary.skipped < summary.draws
    m = summary.maxima
    assert m["residual"] < RLL
    assert m["anomaly"] < RLL
    assert m["representation"] < RLL
    assert m["table_antisymmetry"] < RLL
    assert m["min_sensitivity"] > DEFAULT_TOLERANCES["sensitivity"]
    assert m["min_ablation"] > ABLATION


def test_rll_anomaly_without_moment_constraint(resolved, ctx):
    # H~_0 is one-dimensional for A3 with the class of w2
    summary = rll_sweep(resolved("A3", 2).basis, ctx, 7, 2, reduced=False)
    assert summary.maxima["residual"] < RLL
    assert summary.maxima["anomaly"] > RLL
    assert summary.maxima["without_anomaly"] > RLL


@pytest.mark.parametrize("algebra, j", [("A1", 1), ("A3", 2)])
def test_rll_control_breaks_relation(resolved, ctx, algebra, j):
    lax = reduced_lax(resolved, ctx, algebra, j)
    point = rll_point(lax, poisson_table(lax.basis), Z1, Z2)
    assert point.residual < RLL
    assert point.ablation > ABLATION


@pytest.mark.slow
@pytest.mark.parametrize("algebra, j", [("A3", 2), ("B3", 1), ("C3", 3)])
def test_rll_rank_three(algebra, j):
    assert rll_residual(algebra, j, 7, 2) < RLL


@pytest.mark.parametrize("algebra, j", [("A1", 1), ("A2", 2)])
def test_cybe(resolved, ctx, algebra, j):
    summary = cybe_sweep(resolved(algebra, j).basis, ctx, 7, 2)
    assert summary.maxima["residual"] < CYBE
    assert summary.maxima["min_ablation"] > ABLATION
    assert summary.notes and summary.notes[0].startswith("negative control")


@pytest.mark.parametrize("algebra, j, control", [
    ("A1", 1, "Cartan part of r dropped"),
    ("A2", 2, "Cartan part of r dropped"),
    ("A3", 2, "dynamical terms dropped"),
])
def test_cybe_control_breaks_equation(resolved, ctx, algebra, j, control):
    point = cybe_point(reduced_lax(resolved, ctx, algebra, j), Z1, Z2, Z3)
    assert point.control == control
    assert point.residual < CYBE
    assert point.ablation > ABLATION


@pytest.mark.slow
@pytest.mark.parametrize("algebra, j", [("A3", 2), ("B2", 1)])
def test_cybe_dynamical(algebra, j):
    assert cybe_residual(algebra, j, 7, 2, tau=0.1 + 1.2j) < CYBE


def test_poisson_table_antisymmetric(resolved):
    assert poisson_table(resolved("A2", 2).basis).antisymmetry_defect() < 1e-12
