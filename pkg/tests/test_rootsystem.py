from fractions import Fraction

import pytest

from bundlebench.errors import NotARootError, TrivialCenterError, UnsupportedAlgebraError
from bundlebench.lie import rational as Q
from bundlebench.lie.chevalley import chevalley_constants, jacobi_defect, killing_pair
from bundlebench.lie.rootsystem import (
    all_supported_ids,
    center_data,
    metric_dual_basis,
    root_system_from_id,
)
from bundlebench.lie.weyl import weyl_group_elements, weyl_group_order, weyl_reflect


@pytest.mark.parametrize("algebra", all_supported_ids())
def test_root_count_matches_degrees(algebra):
    rs = root_system_from_id(algebra)
    assert len(rs.roots) == 2 * sum(d - 1 for d in rs.degrees)


@pytest.mark.parametrize("algebra", all_supported_ids())
def test_cartan_determinant_is_center_order(algebra):
    rs = root_system_from_id(algebra)
    assert rs.cartan_determinant() == rs.center_order


def test_a2_basics():
    rs = root_system_from_id("A2")
    assert len(rs.roots) == 6
    assert rs.coxeter == 3
    assert rs.cartan_determinant() == 3
    assert rs.highest_root == (1, 1)


def test_exceptional_root_counts():
    assert len(root_system_from_id("E6").roots) == 72
    assert len(root_system_from_id("E7").roots) == 126
    assert root_system_from_id("E7").coxeter == 18


def test_e6_uses_bourbaki_labels():
    rs = root_system_from_id("E6")
    # alpha_2 hangs off alpha_4
    assert rs.cartan[1][3] == -1
    assert rs.highest_root == (1, 2, 2, 3, 2, 1)
    assert rs.minuscule == (0, 5)


@pytest.mark.parametrize("text, exc", [
    ("G2", TrivialCenterError),
    ("E8", TrivialCenterError),
    ("D2", UnsupportedAlgebraError),
    ("Z3", UnsupportedAlgebraError),
    ("A", UnsupportedAlgebraError),
])
def test_rejected_ids(text, exc):
    with pytest.raises(exc):
        root_system_from_id(text)


@pytest.mark.parametrize("algebra", ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D4"])
def test_jacobi_identity_exact(algebra):
    assert jacobi_defect(chevalley_constants(root_system_from_id(algebra))) == 0


@pytest.mark.slow
def test_jacobi_identity_e6():
    assert jacobi_defect(chevalley_constants(root_system_from_id("E6"))) == 0


def test_structure_constants_antisymmetric():
    rs = root_system_from_id("B3")
    sc = chevalley_constants(rs)
    for (i, j), value in sc.table.items():
        assert sc.n(j, i) == -value


def test_chevalley_constants_are_p_plus_one_in_magnitude():
    rs = root_system_from_id("C2")
    sc = chevalley_constants(rs)
    # short + short = long in C2: N = +-2
    short = [i for i, f in enumerate(rs.positive_roots) if rs.norm2(f) == 1]
    values = {abs(sc.n(short[0], short[1])), abs(sc.n(short[1], short[0]))}
    assert values <= {0, 2}


@pytest.mark.parametrize("algebra", ["A1", "A2", "A3", "B2", "B3", "C3"])
def test_weyl_closure_matches_degree_product(algebra):
    rs = root_system_from_id(algebra)
    assert len(weyl_group_elements(rs)) == weyl_group_order(rs)


def test_weyl_reflection_negates_the_coroot():
    rs = root_system_from_id("B2")
    f = rs.simple_roots[1]
    x = rs.coroot(f)
    assert weyl_reflect(rs, f, x) == Q.scale(-1, x)


def test_weyl_reflection_rejects_non_roots():
    rs = root_system_from_id("A2")
    with pytest.raises(NotARootError):
        weyl_reflect(rs, (2, 0), (Fraction(0), Fraction(0)))


def test_metric_dual_basis():
    rs = root_system_from_id("C3")
    duals = metric_dual_basis(rs)
    for i, d in enumerate(duals):
        for j, f in enumerate(rs.simple_roots):
            assert rs.inner(d, f) == (1 if i == j else 0)


def test_killing_pair_on_root_vectors():
    rs = root_system_from_id("A2")
    x = [0] * rs.dim
    y = [0] * rs.dim
    x[rs.rank + 0] = 1
    y[rs.rank + rs.negative_index(0)] = 1
    assert killing_pair(rs, x, y) == Fraction(2) / rs.norm2(rs.roots[0])


def test_fundamental_coweights_pair_to_identity():
    rs = root_system_from_id("D5")
    for j in range(rs.rank):
        w = rs.fundamental_coweight(j)
        for k, f in enumerate(rs.simple_roots):
            assert rs.pair(f, w) == (1 if j == k else 0)


def test_center_generators():
    assert center_data(root_system_from_id("A3"))["generators"][0] == 3
    assert center_data(root_system_from_id("D5"))["generators"][0] == 5
    d4 = center_data(root_system_from_id("D4"))
    assert d4["invariant_factors"] == [2, 2]
    assert set(d4["mu2_subgroups"]) == {"left", "right", "diagonal"}


def test_center_sublattices_a5():
    data = center_data(root_system_from_id("A5"))
    assert sorted(data["sublattices"]) == [1, 2, 3, 6]


def test_center_generator_orders_a5():
    data = center_data(root_system_from_id("A5"))
    assert data["generator_orders"] == {5: 6, 1: 6, 2: 3, 3: 2, 4: 3}
    assert "character_orders" not in data


def test_trivial_center_rejected():
    with pytest.raises(TrivialCenterError):
        center_data(root_system_from_id("G2"))
