"""Invariant subalgebra g~_0 inside the grade-zero part g_0 = g~_0 + V.

g~_0 is spanned by H~_0 and the grade-zero generators on orbits of R_1, the
roots supported on Pi_1 = Pi^ext minus the orbit of alpha_0.  Its roots are
the lambda-averages of those orbits; the resulting Cartan matrix is
classified and compared with the expected row for (family, rank, j).
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from ..errors import InvariantRowError
from ..lie import rational as Q
from ..lie.chevalley import StructureConstants
from ..transition import ReducedRootData, TransitionData, averaged_coroots, orbit_basis
from .basis import GSBasis, build_gs_basis, fixed_dimension
from .gauge import Lift, gauge_candidates


# ---------------------------------------------------------------------------
# Expected rows
# ---------------------------------------------------------------------------

def so_label(k: int) -> str:
    """Type label of so(k) for small k."""
    table = {1: "0", 2: "T1", 3: "A1", 4: "A1+A1", 5: "B2", 6: "A3"}
    if k in table:
        return table[k]
    if k % 2:
        return f"B{(k - 1) // 2}"
    return f"D{k // 2}"


def expected_invariant_row(family: str, n: int, j: Optional[int]) -> tuple[str, int]:
    """(type of g~_0, dim g_0) for the class generated by varpi^vee_j."""
    family = family.upper()
    if j is None:
        rank_dim = {
            "A": n * (n + 2),
            "B": n * (2 * n + 1),
            "C": n * (2 * n + 1),
            "D": n * (2 * n - 1),
            "E": {6: 78, 7: 133}.get(n, 0),
        }[family]
        label = {("C", 2): "B2", ("D", 3): "A3"}.get((family, n), f"{family}{n}")
        return label, rank_dim
    if family == "A":
        big_n = n + 1
        p = math.gcd(big_n, j)
        return ("0" if p == 1 else f"A{p - 1}"), big_n * p - 1
    if family == "B":
        return so_label(2 * n - 1), n * (2 * n - 1)
    if family == "C":
        return so_label(n), n * n
    if family == "D":
        if j == 1:
            return so_label(2 * n - 3), (n - 1) * (2 * n - 3) + 1
        if n % 2 == 0:
            return so_label(n), n * (n - 1)
        m = (n - 1) // 2
        return so_label(n - 2), 2 * m * (2 * m - 1) + 1
    if n == 6:
        return "G2", 30
    return "F4", 79


# ---------------------------------------------------------------------------
# Cartan-matrix classifier
# ---------------------------------------------------------------------------

def _components(cartan: list[list[int]]) -> list[list[int]]:
    size = len(cartan)
    seen = set()
    comps = []
    for start in range(size):
        if start in seen:
            continue
        stack, comp = [start], []
        seen.add(start)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(size):
                if j != i and cartan[i][j] and j not in seen:
                    seen.add(j)
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def _classify_component(cartan, lengths, nodes) -> str:
    size = len(nodes)
    if size == 1:
        return "A1"
    adj = {i: [j for j in nodes if j != i and cartan[i][j]] for i in nodes}
    bonds = {(i, j): cartan[i][j] * cartan[j][i] for i in nodes for j in adj[i]}
    if 3 in bonds.values():
        return "G2"
    doubles = [pair for pair, b in bonds.items() if b == 2]
    if doubles:
        if size == 2:
            return "B2"
        i, j = doubles[0]
        ends = [k for k in (i, j) if len(adj[k]) == 1]
        if not ends:
            return "F4"
        end = ends[0]
        other = j if end == i else i
        return f"B{size}" if lengths[end] < lengths[other] else f"C{size}"
    branch = [i for i in nodes if len(adj[i]) == 3]
    if not branch:
        return f"A{size}"
    b = branch[0]
    arms = []
    for start in adj[b]:
        prev, cur, count = b, start, 1
        while True:
            nxt = [k for k in adj[cur] if k != prev]
            if not nxt:
                break
            prev, cur, count = cur, nxt[0], count + 1
        arms.append(count)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return f"D{arms[2] + 3}"
    return {(1, 2, 2): "E6", (1, 2, 3): "E7", (1, 2, 4): "E8"}.get(tuple(arms), "?")


def classify_cartan(cartan: list[list[int]], lengths: list, torus: int = 0) -> str:
    """Normalized type label such as ``A1+A1``, ``B2``, ``G2+T1`` or ``0``."""
    labels = [_classify_component(cartan, lengths, comp) for comp in _components(cartan)]
    labels.sort(key=lambda s: (s[0], int(s[1:]) if s[1:].isdigit() else 0))
    if torus:
        labels.append(f"T{torus}")
    return "+".join(labels) if labels else "0"


# ---------------------------------------------------------------------------
# Identification
# ---------------------------------------------------------------------------

@dataclass
class InvariantSubalgebra:
    label: str
    valid: bool
    rank: int
    torus: int
    dim_h0: int
    dim_g0: int
    dim_tilde: int
    fixed_dim: int
    cartan: list
    simple_roots: list
    coroots: list
    root_data: Optional[ReducedRootData]
    tilde_indices: list
    v_indices: list
    orthogonality: float
    coroot_scales: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "valid": self.valid,
            "rank": self.rank,
            "torus": self.torus,
            "dim_h0": self.dim_h0,
            "dim_g0": self.dim_g0,
            "dim_tilde_g0": self.dim_tilde,
            "dim_V": len(self.v_indices),
            "dim_ker_P_minus_1": self.fixed_dim,
            "cartan": self.cartan,
            "simple_roots": [Q.vec_str(r) for r in self.simple_roots],
            "coroot_scales": {k: Q.frac_str(v) for k, v in self.coroot_scales.items()},
            "orthogonality": self.orthogonality,
            "notes": self.notes,
        }


def _average(basis: GSBasis, base: int) -> Q.Vector:
    rs = basis.rs
    total = Q.zero_vector(rs.rank)
    for m in range(basis.l):
        total = Q.add(total, rs.roots[basis.lift.image(base, m)])
    return Q.scale(Fraction(1, basis.l), total)


def identify_invariant_subalgebra(basis: GSBasis) -> InvariantSubalgebra:
    td = basis.td
    rs = td.rs
    notes: list[str] = []
    pi1 = {k for orb in td.pi1_orbits for k in orb}
    r1 = set(basis.orbits.r1_orbits(pi1))

    restricted: list[Q.Vector] = []
    valid = True
    tilde_t, v_t = [], []
    for o in range(len(basis.orbits.root_orbits)):
        i = basis.find("t", o, 0)
        if i is None:
            continue
        if o not in r1:
            v_t.append(i)
            continue
        tilde_t.append(i)
        r = _average(basis, basis.orbits.root_orbits[o].base)
        if r in restricted:
            valid = False
            notes.append(f"two grade-zero orbits restrict to {Q.vec_str(r)}")
        else:
            restricted.append(r)
    rset = set(restricted)
    reduced = [r for r in restricted if Q.scale(Fraction(1, 2), r) not in rset]

    p = Q.zero_vector(rs.rank)
    for b in orbit_basis(td).values():
        p = Q.add(p, b)
    positive = [r for r in reduced if rs.pair(r, p) > 0]
    pos_set = set(positive)
    simple = [r for r in positive
              if not any(Q.sub(r, s) in pos_set for s in positive if s != r)]
    simple.sort(key=lambda r: tuple(-v for v in r))

    def coroot(r):
        return Q.scale(Fraction(2) / rs.norm2(r), rs.sharp(r))

    coroots = [coroot(r) for r in simple]
    cartan = [[int(rs.pair(a, c)) for c in coroots] for a in simple]
    lengths = [rs.norm2(r) for r in simple]

    scales = {}
    for orb, s_o in averaged_coroots(td).items():
        r = _average_nodes(rs, orb)
        if r in simple:
            c = Fraction(2) / rs.pair(r, s_o)
            key = ",".join(str(k) for k in orb)
            scales[key] = c
            if coroot(r) != Q.scale(c, s_o):
                valid = False
                notes.append(f"coroot of orbit {key} is not proportional to its averaged coroot")
            elif c != 1:
                notes.append(f"averaged coroot of orbit {key} rescaled by {Q.frac_str(c)}")

    dim_h0 = len(td.invariant_basis)
    rank = len(simple)
    torus = dim_h0 - rank
    h0 = [i for i in basis.h_indices() if basis.generators[i].grade == 0]
    tilde = h0 + tilde_t
    dim_g0 = len(tilde) + len(v_t)
    fixed = fixed_dimension(basis.lift)
    if fixed != dim_g0:
        valid = False
        notes.append(f"grade-zero count {dim_g0} differs from dim ker(P - 1) = {fixed}")
    ortho = float(np.max(np.abs(basis.gram[np.ix_(tilde, v_t)]))) if tilde and v_t else 0.0

    label = classify_cartan(cartan, lengths, torus) if valid else "invalid"
    positive_coroots = [coroot(r) for r in positive]
    return InvariantSubalgebra(
        label=label,
        valid=valid,
        rank=rank,
        torus=torus,
        dim_h0=dim_h0,
        dim_g0=dim_g0,
        dim_tilde=len(tilde),
        fixed_dim=fixed,
        cartan=cartan,
        simple_roots=simple,
        coroots=coroots,
        root_data=ReducedRootData(tuple(simple), tuple(coroots), tuple(positive),
                                  tuple(positive_coroots)),
        tilde_indices=tilde,
        v_indices=v_t,
        orthogonality=ortho,
        coroot_scales=scales,
        notes=notes,
    )


def _average_nodes(rs, orb) -> Q.Vector:
    total = Q.zero_vector(rs.rank)
    for k in orb:
        total = Q.add(total, rs.ext_root(k))
    return Q.scale(Fraction(1, len(orb)), total)


def module_defect(basis: GSBasis, table: np.ndarray, inv: InvariantSubalgebra,
                  tol: float = 1e-10) -> float:
    """Largest component of [g~_0, V] outside V."""
    if not inv.tilde_indices or not inv.v_indices:
        return 0.0
    outside = [k for k in range(basis.size) if k not in set(inv.v_indices)]
    block = table[np.ix_(inv.tilde_indices, inv.v_indices, outside)]
    return float(np.max(np.abs(block)))


@dataclass
class ResolvedBasis:
    """The lift realizing the expected row, its basis and invariant subalgebra.

    ``sign_row`` is the row the sign-gauge lift realizes (None when no sign
    gauge exists); ``tried`` lists every candidate evaluated, in order.
    """

    lift: Lift
    basis: GSBasis
    invariant: InvariantSubalgebra
    expected: tuple[str, int]
    tried: list
    sign_row: Optional[tuple[str, int]] = None

    @property
    def gauge(self) -> str:
        return self.lift.label


def _row_text(label: str, dim_g0: int) -> str:
    return f"{label} with dim g_0 = {dim_g0}"


def resolve_gs_basis(td: TransitionData, sc: StructureConstants) -> ResolvedBasis:
    """Try the gauge candidates in order and keep the first matching the expected row.

    Every candidate rejected on the way is named, with the row it realizes,
    in the notes of the returned invariant subalgebra.
    """
    rs = td.rs
    expected = expected_invariant_row(rs.family, rs.rank, td.j)
    candidates = gauge_candidates(td, sc)
    notes = list(candidates[0].notes) if candidates else []
    tried = []
    sign_row = None
    for lift in candidates:
        basis = build_gs_basis(td, lift, sc)
        inv = identify_invariant_subalgebra(basis)
        row = (inv.label, inv.dim_g0)
        tried.append({"lift": lift.label, "label": inv.label, "dim_g0": inv.dim_g0})
        if lift.label == "sign":
            sign_row = row
        if inv.valid and row == expected:
            if len(tried) > 1:
                notes.append(f"gauge {lift.label} used for {rs.name} j={td.j}")
            inv.notes[:0] = notes
            return ResolvedBasis(lift, basis, inv, expected, tried, sign_row)
        notes.append(
            f"gauge candidate {lift.label} rejected: realizes {_row_text(*row)}, "
            f"expected {_row_text(*expected)}"
        )
    raise InvariantRowError(
        f"{rs.name} j={td.j}: no gauge realizes {_row_text(*expected)}; tried {tried}"
    )
