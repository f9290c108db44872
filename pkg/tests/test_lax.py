import numpy as np
import pytest

from bundlebench.config import DEFAULT_TOLERANCES
from bundlebench.errors import DegenerateSampleError, SingularPhaseError
from bundlebench.lax import (
    build_lax,
    hamiltonians,
    invariant_scan,
    moment_reduce,
    orthogonality_residual,
    phase_space_dimensions,
    quasiperiodicity_residual,
    random_spin,
    residue_residual,
    sample_points,
    standard_comparison,
    zero_cartan_indices,
)

CASES = [("A1", 1), ("A2", 2), ("A3", 2), ("B2", 1), ("C3", 3)]


def reduced_lax(resolved, ctx, algebra, j, seed=7):
    """First moment-reduced Lax operator whose phases stay off the lattice."""
    basis = resolved(algebra, j).basis
    for s in range(seed, seed + 20):
        try:
            return build_lax(basis, moment_reduce(random_spin(basis, s), basis), ctx)
        except SingularPhaseError:
            continue
    pytest.fail(f"no regular draw for {algebra} j={j}")


@pytest.mark.parametrize("algebra, j", CASES)
def test_quasiperiodicity(resolved, ctx, algebra, j):
    lax = reduced_lax(resolved, ctx, algebra, j)
    r1, rt = quasiperiodicity_residual(lax, sample_points(ctx, 6, 11))
    assert r1 < DEFAULT_TOLERANCES["lax_quasi"]
    assert rt < DEFAULT_TOLERANCES["lax_quasi"]


@pytest.mark.parametrize("algebra, j", CASES)
def test_residue_is_the_spin(resolved, ctx, algebra, j):
    lax = reduced_lax(resolved, ctx, algebra, j)
    assert residue_residual(lax) < DEFAULT_TOLERANCES["residue"]


@pytest.mark.parametrize("algebra, j", CASES)
def test_grade_components_are_orthogonal(resolved, ctx, algebra, j):
    lax = reduced_lax(resolved, ctx, algebra, j)
    assert orthogonality_residual(lax, sample_points(ctx, 4, 5)) < DEFAULT_TOLERANCES["orthogonality"]


def test_unreduced_tau_shift_fails(resolved, ctx):
    basis = resolved("A3", 2).basis
    assert zero_cartan_indices(basis)
    raw = build_lax(basis, random_spin(basis, 7), ctx)
    _, rt = quasiperiodicity_residual(raw, sample_points(ctx, 4, 7))
    assert rt > 1e-6


@pytest.mark.parametrize("algebra, j", [("A1", 1), ("A3", 2), ("B3", 1)])
def test_scan_matches_closed_form(resolved, ctx, algebra, j):
    res = resolved(algebra, j)
    lax = reduced_lax(resolved, ctx, algebra, j)
    scan = invariant_scan(lax, sample_points(ctx, 24, 3))
    split = hamiltonians(lax, res.invariant.tilde_indices)
    assert scan.defect < DEFAULT_TOLERANCES["scan"]
    tol = DEFAULT_TOLERANCES["hamiltonian"]
    assert abs(scan.hamiltonian - split.total) / max(1.0, abs(split.total)) < tol
    assert abs(scan.casimir - split.casimir) / max(1.0, abs(split.casimir)) < tol
    assert len(split.graded) == res.basis.l // 2


def test_scan_needs_two_samples(resolved, ctx):
    lax = reduced_lax(resolved, ctx, "A1", 1)
    with pytest.raises(DegenerateSampleError):
        invariant_scan(lax, sample_points(ctx, 1, 3))


@pytest.mark.parametrize("algebra", ["A1", "A2", "B2"])
def test_untwisted_lax_is_standard_spin_model(resolved, ctx, algebra):
    lax = reduced_lax(resolved, ctx, algebra, 0)
    assert lax.basis.l == 1
    cmp = standard_comparison(lax, sample_points(ctx, 4, 9))
    assert cmp["lax"] < DEFAULT_TOLERANCES["standard"]
    assert cmp["hamiltonian"] < DEFAULT_TOLERANCES["standard"]


def test_phase_space_dimensions(resolved):
    dims = phase_space_dimensions(resolved("A3", 2).basis)
    assert dims["dim_g"] == 15
    assert dims["dim_H0"] == 1
    assert dims["phase_space"] == dims["generic_orbit"] + 2
    assert dims["reduced"] == 12


def test_moment_reduction_clears_invariant_atoms(resolved):
    basis = resolved("A3", 2).basis
    spin = moment_reduce(random_spin(basis, 3), basis)
    assert spin.reduced
    assert np.all(spin.s[zero_cartan_indices(basis)] == 0)
