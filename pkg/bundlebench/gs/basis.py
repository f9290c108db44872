"""Generalized-sin basis: Fourier transforms along lambda-orbits.

    t^a_b = l^{-1/2} sum_m omega^{ma} P^m E_b          (root orbits)
    h^c_O = l^{-1/2} sum_m omega^{mc} lambda^m H_{k_O}  (orbits of Pi^ext)

with omega = e(1/l) and P the chosen lift, so that P t^a = omega^{-a} t^a.
The h^0 of the orbit through alpha_0 is dropped: sum_O N^vee_O h^0_O = 0.
Generators are stored as complex coefficient columns over the Chevalley
basis (H_1..H_n, E_gamma...).
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from ..lie.chevalley import StructureConstants, killing_array, structure_tensor
from ..lie.rootsystem import RootSystem
from ..transition import TransitionData
from .gauge import Lift
from .orbits import OrbitDecomposition, decompose_orbits


@dataclass(frozen=True)
class Generator:
    kind: str
    grade: int
    orbit: int

    def label(self, rs: RootSystem, orbits: OrbitDecomposition) -> str:
        if self.kind == "h":
            nodes = ",".join(str(k) for k in orbits.node_orbits[self.orbit])
            return f"h^{self.grade}[{nodes}]"
        base = rs.roots[orbits.root_orbits[self.orbit].base]
        return f"t^{self.grade}[{','.join(str(v) for v in base)}]"


@dataclass
class GSBasis:
    td: TransitionData
    lift: Lift
    sc: StructureConstants
    orbits: OrbitDecomposition
    generators: list[Generator]
    vectors: np.ndarray
    gram: np.ndarray
    gram_inv: np.ndarray
    duals: np.ndarray
    killing: np.ndarray
    _lookup: dict = field(default_factory=dict, repr=False)

    @property
    def rs(self) -> RootSystem:
        return self.td.rs

    @property
    def l(self) -> int:
        return self.td.order

    @property
    def omega(self) -> complex:
        return complex(np.exp(2j * np.pi / self.l))

    @property
    def size(self) -> int:
        return len(self.generators)

    @property
    def grades(self) -> np.ndarray:
        return np.array([g.grade for g in self.generators])

    def find(self, kind: str, orbit: int, grade: int) -> Optional[int]:
        return self._lookup.get((kind, orbit, grade % self.l))

    def h_indices(self) -> list[int]:
        return [i for i, g in enumerate(self.generators) if g.kind == "h"]

    def t_indices(self) -> list[int]:
        return [i for i, g in enumerate(self.generators) if g.kind == "t"]

    def partner(self, i: int) -> Optional[int]:
        """Index of t^{-a} on the orbit of -base, the only generator pairing with t^a."""
        g = self.generators[i]
        if g.kind != "t":
            return None
        return self.find("t", self.orbits.negative_orbit(g.orbit), -g.grade)

    def to_chevalley(self, coeffs: np.ndarray) -> np.ndarray:
        return self.vectors @ coeffs

    def from_chevalley(self, v: np.ndarray) -> np.ndarray:
        """Coordinates (D_i, v) of v in this basis."""
        return self.duals.T @ self.killing @ v

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """[x, y] of two Chevalley coefficient columns."""
        return np.einsum("i,j,ijk->k", x, y, _tensor(self.sc))

    def labels(self) -> list[str]:
        return [g.label(self.rs, self.orbits) for g in self.generators]


_TENSORS: dict = {}


def _tensor(sc: StructureConstants) -> np.ndarray:
    key = sc.rs.name, id(sc)
    if key not in _TENSORS:
        _TENSORS[key] = structure_tensor(sc).astype(float)
    return _TENSORS[key]


def orbit_sum(lift: Lift, i: int, k: int) -> np.ndarray:
    """t^k[E_i] = l^{-1/2} sum_m omega^{mk} P^m E_i for any root index i."""
    rs = lift.rs
    l = lift.order
    omega = np.exp(2j * np.pi / l)
    v = np.zeros(rs.dim, dtype=complex)
    phase = Fraction(0)
    for m in range(l):
        v[rs.rank + i] += omega ** (m * k) * np.exp(2j * np.pi * float(phase)) / math.sqrt(l)
        phase += lift.phases[i]
        i = lift.perm[i]
    return v


def root_grade_allowed(lift: Lift, orbit_base: int, length: int, a: int) -> bool:
    """t^a survives iff a l_beta / l + eta_beta is an integer."""
    eta = lift.cumulative(orbit_base, length)
    return (Fraction(a * length, lift.order) + eta).denominator == 1


def build_gs_basis(td: TransitionData, lift: Lift, sc: StructureConstants) -> GSBasis:
    rs = td.rs
    l = td.order
    n, dim = rs.rank, rs.dim
    omega = np.exp(2j * np.pi / l)
    norm = 1 / math.sqrt(l)
    orbits = decompose_orbits(rs, td.lam, l, td.orbits)
    lam = np.array(td.lam.coroot_matrix, dtype=float)

    gens: list[Generator] = []
    cols: list[np.ndarray] = []
    for o, orb in enumerate(td.orbits):
        p = l // len(orb)
        x = np.array(rs.ext_coroot(orb[0]), dtype=float)
        for c in range(0, l, p):
            if o == 0 and c == 0:
                continue
            v = np.zeros(dim, dtype=complex)
            cur = x.copy()
            for m in range(l):
                v[:n] += norm * omega ** (m * c) * cur
                cur = lam @ cur
            gens.append(Generator("h", c, o))
            cols.append(v)
    for o, orb in enumerate(orbits.root_orbits):
        for a in range(l):
            if not root_grade_allowed(lift, orb.base, orb.length, a):
                continue
            v = orbit_sum(lift, orb.base, a)
            gens.append(Generator("t", a, o))
            cols.append(v)

    vectors = np.column_stack(cols)
    killing = killing_array(rs)
    gram = vectors.T @ killing @ vectors
    gram_inv = np.linalg.inv(gram)
    duals = vectors @ gram_inv
    basis = GSBasis(
        td=td,
        lift=lift,
        sc=sc,
        orbits=orbits,
        generators=gens,
        vectors=vectors,
        gram=gram,
        gram_inv=gram_inv,
        duals=duals,
        killing=killing,
    )
    basis._lookup.update({(g.kind, g.orbit, g.grade): i for i, g in enumerate(gens)})
    return basis


def grade_dimensions(basis: GSBasis) -> list[int]:
    """dim g_a for a = 0..l-1."""
    counts = [0] * basis.l
    for g in basis.generators:
        counts[g.grade] += 1
    return counts


def fixed_dimension(lift: Lift, tol: float = 1e-9) -> int:
    """dim ker(P - 1), computed from the lift matrix alone."""
    m = lift.matrix() - np.eye(lift.rs.dim)
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s < tol))


def round_trip_residual(basis: GSBasis) -> float:
    """|| from_chevalley o to_chevalley - 1 || over the generators."""
    ident = basis.from_chevalley(basis.vectors)
    return float(np.max(np.abs(ident - np.eye(basis.size))))


def eigen_residual(basis: GSBasis) -> float:
    """Max |P X - omega^{-grade} X| over all generators."""
    p = basis.lift.matrix()
    worst = 0.0
    for i, g in enumerate(basis.generators):
        v = basis.vectors[:, i]
        worst = max(worst, float(np.max(np.abs(p @ v - basis.omega ** (-g.grade) * v))))
    return worst


def dual_closed_form_residual(basis: GSBasis) -> float:
    """Dual of t^b_a equals t^{-b}_{-a} (alpha, alpha) / (2 p_alpha)."""
    rs = basis.rs
    worst = 0.0
    for i in basis.t_indices():
        g = basis.generators[i]
        orb = basis.orbits.root_orbits[g.orbit]
        scale = float(rs.norm2(rs.roots[orb.base])) / (2 * orb.p)
        want = scale * orbit_sum(basis.lift, rs.negative_index(orb.base), -g.grade)
        worst = max(worst, float(np.max(np.abs(basis.duals[:, i] - want))))
    return worst
