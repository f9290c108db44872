from dataclasses import replace
from fractions import Fraction

import pytest

from bundlebench.errors import BundleBenchError, NotInvariantError, NotMinusculeError
from bundlebench.lie import rational as Q
from bundlebench.transition import (
    alcove_reduce,
    brute_force_lambda,
    bs_reduce,
    compute_kappa,
    find_lambda,
    in_alcove,
    is_invariant,
    kappa_shift,
    orbit_average,
    orbit_basis,
    spinor_pair,
)


def test_kappa_a1(rs):
    assert compute_kappa(rs("A1")) == (Fraction(1, 4),)


@pytest.mark.parametrize("algebra", ["A1", "A3", "B3", "C4", "D5", "E6"])
def test_kappa_inside_alcove(rs, algebra):
    assert in_alcove(rs(algebra), compute_kappa(rs(algebra)), strict=True)


@pytest.mark.parametrize("algebra, j, order, dim_h0", [
    ("A1", 1, 2, 0),
    ("A2", 2, 3, 0),
    ("A3", 2, 2, 1),
    ("A3", 3, 4, 0),
    ("A5", 3, 2, 2),
    ("B3", 1, 2, 2),
    ("C3", 3, 2, 1),
    ("D4", 4, 2, 2),
    ("E6", 6, 3, 2),
])
def test_transition_order_and_invariant_cartan(td, algebra, j, order, dim_h0):
    data = td(algebra, j)
    assert data.order == order
    assert len(data.invariant_basis) == dim_h0
    # lambda^*(alpha_j) is the affine node
    assert data.node_permutation[j] == 0
    assert data.lam.apply(data.kappa) == Q.sub(data.kappa, data.coweight)


@pytest.mark.parametrize("algebra, j", [("A3", 2), ("C3", 3), ("D4", 4), ("A3", 0)])
def test_kappa_shift_matches_coweight(td, algebra, j):
    shift, want = kappa_shift(td(algebra, j))
    assert shift == want


def test_kappa_shift_detects_wrong_lambda(td):
    data = td("A3", 2)
    broken = replace(data, lam=td("A3", 0).lam)
    shift, want = kappa_shift(broken)
    assert shift != want
    assert shift == (Fraction(0),) * 3


def test_trivial_class_is_identity(td):
    data = td("A3", 0)
    assert data.lam.is_identity()
    assert data.order == 1
    assert len(data.invariant_basis) == 3


@pytest.mark.parametrize("algebra", ["A1", "A2", "A3", "B2", "B3", "C2", "C3"])
def test_alcove_search_matches_weyl_scan(rs, algebra):
    r = rs(algebra)
    for j in [k + 1 for k in r.minuscule]:
        assert find_lambda(r, j).coroot_matrix == brute_force_lambda(r, j).coroot_matrix


def test_weyl_scan_limited_to_small_rank(rs):
    with pytest.raises(BundleBenchError):
        brute_force_lambda(rs("A4"), 1)


def test_non_minuscule_coweight_rejected(rs):
    with pytest.raises(NotMinusculeError):
        find_lambda(rs("B3"), 2)


def test_find_lambda_without_class_is_identity(rs):
    assert find_lambda(rs("D5"), None).is_identity()


@pytest.mark.parametrize("lattice, generator", [("Q", None), ("P", None), ("P_l", 2)])
def test_alcove_reduce_lands_in_alcove(rs, lattice, generator):
    r = rs("A3")
    x = (Fraction(7, 3), Fraction(-5, 2), Fraction(11, 7))
    rep, g = alcove_reduce(r, x, lattice=lattice, generator=generator)
    assert g.apply(x) == rep
    assert in_alcove(r, rep)
    assert g.lattice == lattice


def test_alcove_reduce_p_quotient_is_smallest(rs):
    r = rs("A2")
    x = (Fraction(1, 5), Fraction(1, 2))
    rep_q, _ = alcove_reduce(r, x, "Q")
    rep_p, _ = alcove_reduce(r, x, "P")
    assert rep_p <= rep_q


def test_alcove_reduce_rejects_unknown_lattice(rs):
    with pytest.raises(BundleBenchError):
        alcove_reduce(rs("A2"), (0, 0), lattice="R")


def test_p_l_needs_generator(rs):
    with pytest.raises(BundleBenchError):
        alcove_reduce(rs("A3"), (0, 0, 0), lattice="P_l")


def test_spinor_pair_shares_q(rs):
    pair = spinor_pair(rs("D4"))
    assert pair["shared_q"]
    assert pair["distinct_lambda"]


def test_spinor_pair_needs_even_d(rs):
    with pytest.raises(BundleBenchError):
        spinor_pair(rs("D5"))


def test_orbit_average_is_invariant(td):
    data = td("A5", 2)
    x = (Fraction(1), Fraction(-2, 3), Fraction(5), Fraction(0), Fraction(1, 7))
    assert is_invariant(data, orbit_average(data, x))


def test_orbit_basis_a3(td):
    data = td("A3", 2)
    (orb, b), = orbit_basis(data).items()
    assert orb == (1, 3)
    assert is_invariant(data, b)
    r = data.rs
    assert [r.pair(f, b) for f in r.simple_roots] == [1, -1, 1]


def test_bs_reduce_a3(td, resolved):
    data = td("A3", 2)
    sub = resolved("A3", 2).invariant.root_data
    (_, b), = orbit_basis(data).items()
    x = Q.scale(Fraction(-7, 3), b)
    y = Q.scale(Fraction(5, 2), b)
    x_red, y_red = bs_reduce(data, sub, x, y)
    assert is_invariant(data, x_red) and is_invariant(data, y_red)
    r = data.rs
    assert all(r.pair(s, x_red) >= 0 for s in sub.simple)
    assert all(r.pair(p, x_red) <= 1 for p in sub.positive)


def test_bs_reduce_requires_invariant_input(td, resolved):
    data = td("A3", 2)
    sub = resolved("A3", 2).invariant.root_data
    with pytest.raises(NotInvariantError):
        bs_reduce(data, sub, (1, 0, 0), (0, 0, 0))
    with pytest.raises(BundleBenchError):
        bs_reduce(data, sub, (0, 0, 0), (0, 0, 0), flavor="xx")
