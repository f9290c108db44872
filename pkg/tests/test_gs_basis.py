import numpy as np
import pytest

from bundlebench.config import DEFAULT_TOLERANCES
from bundlebench.errors import UnsupportedAlgebraError
from bundlebench.gs.basis import (
    dual_closed_form_residual,
    eigen_residual,
    fixed_dimension,
    grade_dimensions,
    round_trip_residual,
)
from bundlebench.gs.canonical import (
    build_canonical_basis,
    canonical_cartan_residual,
    canonical_gram_residual,
    dual_residual,
)
from bundlebench.gs.gauge import sign_gauge_fix
from bundlebench.gs.invariant import classify_cartan, expected_invariant_row, so_label
from bundlebench.gs.relations import (
    adjoint_eigen_check,
    cartan_relation_residual,
    closed_form_structure_constants,
    grading_defect,
    gs_gram,
    gs_structure_constants,
    orbit_sum_residual,
    sum_rule_residual,
    transfer_residual,
)
from bundlebench.lax import random_spin
from bundlebench.lie.chevalley import jacobi_defect
from bundlebench.pipeline import structure_constants

GRAM = DEFAULT_TOLERANCES["gram"]
EIGEN = DEFAULT_TOLERANCES["eigen"]

FAST_CASES = [("A1", 1), ("A2", 2), ("A3", 2), ("A3", 1), ("B2", 1), ("B3", 1), ("C3", 3), ("D4", 4)]


@pytest.mark.parametrize("family, n, j, row", [
    ("A", 3, 2, ("A1", 7)),
    ("A", 5, 3, ("A2", 17)),
    ("A", 5, 2, ("A1", 11)),
    ("A", 4, 1, ("0", 4)),
    ("B", 3, 1, ("B2", 15)),
    ("C", 3, 3, ("A1", 9)),
    ("C", 2, 2, ("T1", 4)),
    ("D", 5, 1, ("B3", 29)),
    ("D", 4, 4, ("A1+A1", 12)),
    ("D", 5, 5, ("A1", 13)),
    ("E", 6, 6, ("G2", 30)),
    ("E", 7, 7, ("F4", 79)),
    ("C", 2, None, ("B2", 10)),
    ("A", 3, None, ("A3", 15)),
])
def test_expected_invariant_rows(family, n, j, row):
    assert expected_invariant_row(family, n, j) == row


@pytest.mark.parametrize("k, label", [(1, "0"), (3, "A1"), (4, "A1+A1"), (5, "B2"), (6, "A3"), (7, "B3"), (8, "D4")])
def test_so_labels(k, label):
    assert so_label(k) == label


def test_classifier():
    assert classify_cartan([[2, -1], [-1, 2]], [2, 2]) == "A2"
    assert classify_cartan([[2, 0], [0, 2]], [2, 2]) == "A1+A1"
    assert classify_cartan([[2, -1], [-3, 2]], [2, 6]) == "G2"
    assert classify_cartan([], [], torus=1) == "T1"
    assert classify_cartan([], []) == "0"


def test_sign_gauge_trivial_class(td):
    gauged, lift = sign_gauge_fix(td("A3", 0), structure_constants("A3"))
    assert set(lift.signs) == {1}
    assert gauged.table == structure_constants("A3").table


def test_sign_gauge_a2_rotation(td):
    sc = structure_constants("A2")
    data = td("A2", 2)
    gauged, lift = sign_gauge_fix(data, sc)
    perm = lift.perm
    for (i, j), v in gauged.table.items():
        assert gauged.n(perm[i], perm[j]) == v
    assert lift.automorphism_defect(sc) == 0
    assert jacobi_defect(gauged) == 0


@pytest.mark.parametrize("algebra, j", FAST_CASES)
def test_resolved_row_matches_expected(resolved, algebra, j):
    res = resolved(algebra, j)
    assert (res.invariant.label, res.invariant.dim_g0) == res.expected
    assert fixed_dimension(res.lift) == res.invariant.dim_g0
    assert res.invariant.orthogonality < DEFAULT_TOLERANCES["orthogonality"]


@pytest.mark.parametrize("algebra, j", [("A3", 2), ("B3", 1), ("C3", 3)])
def test_sign_gauge_realizes_row(resolved, algebra, j):
    res = resolved(algebra, j)
    assert res.gauge == "sign"
    assert res.sign_row == res.expected
    assert not any(n.startswith("gauge candidate") for n in res.invariant.notes)


@pytest.mark.parametrize("algebra, j, sign_row", [
    ("C2", 2, ("A1", 6)),
    ("C4", 4, ("B2", 20)),
    ("D4", 3, ("B2", 16)),
])
def test_torus_fallback_is_reported(resolved, algebra, j, sign_row):
    res = resolved(algebra, j)
    assert res.sign_row == sign_row
    assert res.gauge.startswith("torus")
    assert (res.invariant.label, res.invariant.dim_g0) == res.expected
    rejected = [n for n in res.invariant.notes if n.startswith("gauge candidate sign rejected")]
    assert rejected and f"{sign_row[0]} with dim g_0 = {sign_row[1]}" in rejected[0]
    assert f"gauge {res.gauge} used" in " ".join(res.invariant.notes)
    assert res.tried[0]["lift"] == "sign"


@pytest.mark.slow
@pytest.mark.parametrize("algebra, j", [("A5", 3), ("A5", 2), ("D5", 1), ("D5", 5), ("E6", 6)])
def test_resolved_row_larger_algebras(resolved, algebra, j):
    res = resolved(algebra, j)
    assert (res.invariant.label, res.invariant.dim_g0) == res.expected


@pytest.mark.parametrize("algebra, j", FAST_CASES)
def test_gram_blocks(resolved, algebra, j):
    basis = resolved(algebra, j).basis
    gram = gs_gram(basis)
    for key in ("closed_form_residual", "cross_residual", "dual_h_residual", "dual_inverse_residual"):
        assert gram[key] < GRAM, key
    assert dual_closed_form_residual(basis) < GRAM


@pytest.mark.parametrize("algebra, j", FAST_CASES)
def test_grades_cover_the_algebra(resolved, algebra, j):
    basis = resolved(algebra, j).basis
    dims = grade_dimensions(basis)
    assert sum(dims) == basis.rs.dim
    assert len(dims) == basis.l
    # conjugate grades have equal dimension
    assert all(dims[a] == dims[-a % basis.l] for a in range(basis.l))


@pytest.mark.parametrize("algebra, j", FAST_CASES)
def test_eigen_relations(resolved, algebra, j):
    basis = resolved(algebra, j).basis
    assert round_trip_residual(basis) < EIGEN
    assert eigen_residual(basis) < EIGEN
    u = random_spin(basis, 7).cartan_point(basis)
    for name, value in adjoint_eigen_check(basis, u).items():
        assert value < EIGEN, name


@pytest.mark.parametrize("algebra, j", FAST_CASES)
def test_orbit_and_cartan_relations(resolved, algebra, j):
    basis = resolved(algebra, j).basis
    assert orbit_sum_residual(basis) < EIGEN
    assert cartan_relation_residual(basis) < EIGEN
    assert transfer_residual(basis) < EIGEN
    assert sum_rule_residual(basis) < EIGEN


@pytest.mark.parametrize("algebra, j", [("A2", 2), ("A3", 2), ("B3", 1), ("C3", 3)])
def test_brackets_respect_grading(resolved, algebra, j):
    basis = resolved(algebra, j).basis
    table = gs_structure_constants(basis)
    tol = DEFAULT_TOLERANCES["grading"]
    assert grading_defect(table, basis, tol) == 0
    assert np.max(np.abs(table - closed_form_structure_constants(basis))) < tol


@pytest.mark.parametrize("algebra, j", [("A3", 2), ("B3", 1), ("C3", 3), ("D4", 4)])
def test_canonical_basis(resolved, algebra, j):
    basis = resolved(algebra, j).basis
    cb = build_canonical_basis(basis)
    tol = DEFAULT_TOLERANCES["canonical"]
    assert canonical_gram_residual(cb) < tol
    assert dual_residual(cb) < tol
    assert canonical_cartan_residual(basis, cb) < tol


@pytest.mark.slow
def test_canonical_basis_needs_classical_type(resolved):
    with pytest.raises(UnsupportedAlgebraError):
        build_canonical_basis(resolved("E6", 6).basis)
