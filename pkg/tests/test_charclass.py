from fractions import Fraction

import numpy as np
import pytest

from bundlebench.charclass import (
    characteristic_class,
    class_order,
    conformal_degree,
    degree_table,
    degree_table_layout,
    hecke_lax_scaling,
    hecke_weight_exponents,
    least_residue,
    parse_coweight,
    tabulated_representation,
    weight_diagram,
)
from bundlebench.errors import (
    ConfigError,
    LatticeMembershipError,
    NonDominantError,
    NotMinusculeError,
    UnsupportedRepresentationError,
    WeightExpansionError,
)


def test_parse_coweight_forms(rs):
    a3 = rs("A3")
    assert parse_coweight(a3, "w3+w3") == (Fraction(1, 2), Fraction(1), Fraction(3, 2))
    assert parse_coweight(a3, "1/2,1,3/2") == parse_coweight(a3, "w3+w3")
    assert parse_coweight(a3, "2w1-a2") == (Fraction(3, 2), Fraction(0), Fraction(1, 2))


@pytest.mark.parametrize("text", ["w9", "w1w2", "1/2,0", "x", "w1+"])
def test_parse_coweight_errors(rs, text):
    with pytest.raises(ConfigError):
        parse_coweight(rs("A3"), text)


def test_class_of_doubled_generator(rs):
    a3 = rs("A3")
    cls = characteristic_class(a3, parse_coweight(a3, "w3+w3"))
    assert cls.generators == (3,)
    assert cls.exponents == (2,)
    assert cls.order == 2
    assert cls.phases == (Fraction(1, 2),)
    assert not cls.trivial


def test_coroots_have_trivial_class(rs):
    a3 = rs("A3")
    assert characteristic_class(a3, (1, 0, 0)).trivial
    assert class_order(a3, (1, -1, 2)) == 1


def test_class_arithmetic(rs):
    a5 = rs("A5")
    c = characteristic_class(a5, a5.fundamental_coweight(1))
    assert c.order == 3
    assert (c + c.inverse()).trivial
    assert (c + c + c).trivial


def test_d4_class_pairs(rs):
    d4 = rs("D4")
    cls = characteristic_class(d4, parse_coweight(d4, "w1"))
    assert cls.generators == (3, 4)
    assert cls.exponents == (1, 1)
    assert cls.to_dict()["group"] == "mu2xmu2"


def test_non_coweight_rejected(rs):
    with pytest.raises(LatticeMembershipError):
        characteristic_class(rs("A3"), (Fraction(1, 3), 0, 0))


def test_classes_of_different_algebras_do_not_add(rs):
    a = characteristic_class(rs("A1"), (Fraction(1, 2),))
    b = characteristic_class(rs("C2"), (Fraction(1, 2), Fraction(1)))
    with pytest.raises(LatticeMembershipError):
        a + b


@pytest.mark.parametrize("x, m, want", [
    (Fraction(5), 4, Fraction(1)),
    (Fraction(-1), 3, Fraction(-1)),
    (Fraction(2), 4, Fraction(2)),
    (Fraction(7), 4, Fraction(-1)),
    (Fraction(27, 2), 4, Fraction(3, 2)),
])
def test_least_residue(x, m, want):
    assert least_residue(x, m) == want


def test_degree_rows_all_match():
    rows = degree_table()
    assert len(rows) == 14
    for rec in rows:
        assert rec.matches, rec.algebra
        assert rec.degree % 1 == 0


@pytest.mark.parametrize("algebra, residue", [("A1", -1), ("E6", 9), ("E7", 28), ("C3", 3)])
def test_degree_residues(algebra, residue):
    rec, = degree_table([algebra])
    assert rec.matches
    assert (rec.residue - residue) % rec.dim == 0


def test_layout_has_seven_groups():
    assert len(degree_table_layout()) == 7


def test_conformal_degree_checks_inputs(rs):
    a3 = rs("A3")
    with pytest.raises(UnsupportedRepresentationError):
        conformal_degree(a3, 1, 0)
    b3 = rs("B3")
    with pytest.raises(NotMinusculeError):
        conformal_degree(b3, 2, 1)


@pytest.mark.parametrize("algebra", ["A3", "B3", "C3", "D4", "D5"])
def test_weight_diagram_size(rs, algebra):
    r = rs(algebra)
    node, dim = tabulated_representation(r)
    _, expansions = weight_diagram(r, node)
    assert len(expansions) == dim


@pytest.mark.slow
def test_weight_diagram_e6(rs):
    _, expansions = weight_diagram(rs("E6"), 0)
    assert len(expansions) == 27


def test_hecke_weight_exponents_a1(rs):
    a1 = rs("A1")
    top, expansions = weight_diagram(a1, 0)
    assert hecke_weight_exponents(a1, (Fraction(1, 2),), top, expansions) == [Fraction(1, 2), Fraction(-1, 2)]


def test_hecke_weight_expansion_checked(rs):
    a1 = rs("A1")
    with pytest.raises(WeightExpansionError):
        hecke_weight_exponents(a1, (Fraction(1, 2),), (Fraction(1, 2),), [(-1,)])


def test_hecke_scaling_admissible(rs):
    a1 = rs("A1")
    # Chevalley order (H, E_alpha, E_-alpha); E_-alpha is regular at 0
    scaling = hecke_lax_scaling(a1, lambda z: np.array([0, 1 / z, 1 + z]), (Fraction(1, 2),),
                                old_coweight=(Fraction(0),))
    assert scaling.exponents == {0: 1, 1: -1}
    assert scaling.admissible
    assert scaling.new_class.exponents == (1,)
    z = 0.1 + 0.2j
    assert abs(scaling.scaled(z)[1] - 1) < 1e-12


def test_hecke_scaling_detects_double_pole(rs):
    scaling = hecke_lax_scaling(rs("A1"), lambda z: np.array([0, 1 / z, 1 / z]), (Fraction(1, 2),))
    assert not scaling.admissible
    assert scaling.violations[0]["order"] == -1


def test_hecke_needs_dominant_coweight(rs):
    with pytest.raises(NonDominantError):
        hecke_lax_scaling(rs("A1"), lambda z: np.zeros(3), (Fraction(-1, 2),))
