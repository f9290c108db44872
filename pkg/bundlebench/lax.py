"""Elliptic Lax operator on the GS basis, its checks and quadratic Hamiltonians.

With spin atoms S_i = (S, X_i) on the GS generators X_i and D_i the dual
basis, the Lax operator is

    L(z) = sum_{i not in H~_0} S_i F_i(z) D_i + sum_{p in H~_0} (v_p + E1(z) S_p) D_p.

F_i is the twisted phi carrying the inverse Ad_Q / Ad_Lambda multipliers of
X_i, so that L(z + 1) = Ad_Q L(z) and, once the H~_0 atoms are reduced away,
L(z + tau) = Ad_Lambda L(z) with Ad_Lambda = P o Ad_{e(u~)}:

    t^a on the orbit of beta:  F = e(-z f/h) phi(<beta, u~> - tau f/h - a/l, z)
    h^c, c != 0:              F = phi(-c/l, z)

The coordinates u_p of u~ live on the h^0 generators and the momenta v_p on
their duals, {u_p, v_q} = delta_pq.
"""

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .elliptic import (
    EllipticContext,
    TwistParams,
    contour_residue,
    e,
    e1,
    e2,
    phi,
    phi_twisted,
    phi_twisted_du,
    random_points,
    twisted_argument,
)
from .errors import DegenerateSampleError, SingularPhaseError
from .gs.basis import GSBasis, orbit_sum
from .gs.relations import ad_lambda_matrix, ad_q_matrix, normalized_cartan
from .lie.rootsystem import RootSystem, killing_matrix

SINGULAR_EPS = 1e-4


def zero_cartan_indices(basis: GSBasis) -> list[int]:
    """Indices of the h^0 generators, a basis of H~_0."""
    return [i for i in basis.h_indices() if basis.generators[i].grade == 0]


# ---------------------------------------------------------------------------
# Phase point
# ---------------------------------------------------------------------------

@dataclass
class SpinConfiguration:
    """Spin atoms on the GS generators together with (u~, v) on H~_0."""

    s: np.ndarray
    u: np.ndarray
    v: np.ndarray
    reduced: bool = False

    def element(self, basis: GSBasis) -> np.ndarray:
        """S = sum_i S_i D_i as a Chevalley column."""
        return basis.duals @ self.s

    def cartan_point(self, basis: GSBasis) -> np.ndarray:
        """u~ in simple-coroot coordinates."""
        zero = zero_cartan_indices(basis)
        if not zero:
            return np.zeros(basis.rs.rank, dtype=complex)
        return basis.vectors[: basis.rs.rank, zero] @ self.u

    def momentum(self, basis: GSBasis) -> np.ndarray:
        zero = zero_cartan_indices(basis)
        if not zero:
            return np.zeros(basis.rs.dim, dtype=complex)
        return basis.duals[:, zero] @ self.v

    def root_atom(self, basis: GSBasis, root: int, grade: int) -> complex:
        """(S, t^k[E_gamma]) for an arbitrary root gamma."""
        return complex(self.element(basis) @ basis.killing @ orbit_sum(basis.lift, root, grade))

    def cartan_atom(self, basis: GSBasis, root: int, grade: int) -> complex:
        """(S, h-bar^k_alpha)."""
        return complex(self.element(basis) @ basis.killing @ normalized_cartan(basis, root, grade))

    def to_dict(self) -> dict:
        return {
            "s": [[float(x.real), float(x.imag)] for x in self.s],
            "u": [[float(x.real), float(x.imag)] for x in np.asarray(self.u, dtype=complex)],
            "v": [[float(x.real), float(x.imag)] for x in np.asarray(self.v, dtype=complex)],
            "reduced": self.reduced,
        }


def random_spin(basis: GSBasis, seed: int, spread: float = 0.5) -> SpinConfiguration:
    """Complex-Gaussian atoms, u~ uniform in [-spread, spread), Gaussian v."""
    rng = np.random.default_rng(seed)
    size = basis.size
    s = (rng.normal(size=size) + 1j * rng.normal(size=size)) / math.sqrt(2)
    n0 = len(zero_cartan_indices(basis))
    u = rng.uniform(-spread, spread, size=n0).astype(complex)
    v = rng.normal(size=n0).astype(complex)
    return SpinConfiguration(s=s, u=u, v=v)


def moment_reduce(spin: SpinConfiguration, basis: GSBasis) -> SpinConfiguration:
    """Impose the moment constraint: the H~_0 atoms vanish."""
    s = spin.s.copy()
    s[zero_cartan_indices(basis)] = 0
    return replace(spin, s=s, reduced=True)


def phase_space_dimensions(basis: GSBasis) -> dict[str, int]:
    """Dimensions of a generic orbit O, of P = O x T*H~_0 and of the reduced space."""
    n0 = len(zero_cartan_indices(basis))
    orbit = basis.size - basis.rs.rank
    return {
        "dim_g": basis.size,
        "dim_H0": n0,
        "generic_orbit": orbit,
        "phase_space": orbit + 2 * n0,
        "reduced": orbit,
    }


# ---------------------------------------------------------------------------
# Lax operator
# ---------------------------------------------------------------------------

@dataclass
class LaxOperator:
    basis: GSBasis
    spin: SpinConfiguration
    ctx: EllipticContext
    heights: np.ndarray
    shifts: np.ndarray
    pairings: np.ndarray
    weights: np.ndarray
    zero: list[int] = field(default_factory=list)

    @property
    def params(self) -> TwistParams:
        return TwistParams(self.basis.rs.coxeter, self.basis.l)

    @property
    def size(self) -> int:
        return self.basis.size

    def argument(self, i: int) -> complex:
        """First argument of phi in F_i."""
        return twisted_argument(self.pairings[i], int(self.heights[i]), int(self.shifts[i]),
                                self.params, self.ctx)

    def function(self, i: int, z: complex) -> complex:
        if i in self.zero:
            return e1(z, self.ctx)
        return phi_twisted(int(self.heights[i]), int(self.shifts[i]), self.pairings[i], z,
                           self.params, self.ctx)

    def function_du(self, i: int, z: complex) -> complex:
        """dF_i / d<beta, u~>; zero on the Cartan generators."""
        if self.basis.generators[i].kind == "h":
            return 0j
        return phi_twisted_du(int(self.heights[i]), int(self.shifts[i]), self.pairings[i], z,
                              self.params, self.ctx)

    def functions(self, z: complex) -> np.ndarray:
        return np.array([self.function(i, z) for i in range(self.size)])

    def coefficients(self, z: complex) -> np.ndarray:
        """Coefficients of L(z) on the dual basis D_i."""
        coef = self.functions(z) * self.spin.s
        coef[self.zero] += self.spin.v
        return coef

    def __call__(self, z: complex) -> np.ndarray:
        return self.basis.duals @ self.coefficients(z)

    def grade_component(self, z: complex, a: int) -> np.ndarray:
        """L_a(z): the part of L along D_i of grade a (X_i of grade -a)."""
        coef = self.coefficients(z)
        mask = np.array([(-g.grade) % self.basis.l == a % self.basis.l
                         for g in self.basis.generators])
        return self.basis.duals[:, mask] @ coef[mask]

    def standard(self, z: complex) -> np.ndarray:
        """Ad_{e(-kappa z)} L(z), the gauge without the e(-z f/h) factors."""
        rs = self.basis.rs
        kappa = [float(v) for v in self.basis.td.kappa]
        diag = np.concatenate([np.ones(rs.rank, dtype=complex),
                               [e(-z * rs.pair_numeric(f, kappa)) for f in rs.roots]])
        return diag * self(z)


def build_lax(basis: GSBasis, spin: SpinConfiguration, ctx: EllipticContext) -> LaxOperator:
    """Lax operator of a phase point; rejects u~ near a singular hyperplane."""
    rs = basis.rs
    l = basis.l
    zero = zero_cartan_indices(basis)
    u = spin.cartan_point(basis)
    size = basis.size
    heights = np.zeros(size, dtype=int)
    shifts = np.zeros(size, dtype=int)
    pairings = np.zeros(size, dtype=complex)
    weights = np.zeros((size, len(zero)))
    for i, g in enumerate(basis.generators):
        shifts[i] = (-g.grade) % l
        if g.kind == "h":
            continue
        f = rs.roots[basis.orbits.root_orbits[g.orbit].base]
        heights[i] = -rs.height(f)
        pairings[i] = rs.pair_numeric(f, u)
        for k, p in enumerate(zero):
            weights[i, k] = float(np.real(rs.pair_numeric(f, basis.vectors[: rs.rank, p])))
    lax = LaxOperator(basis, spin, ctx, heights, shifts, pairings, weights, zero)
    for i, g in enumerate(basis.generators):
        if i in zero:
            continue
        d = ctx.lattice_distance(lax.argument(i))
        if d < SINGULAR_EPS:
            raise SingularPhaseError(
                f"generator {g.label(rs, basis.orbits)}: phi argument within {d:.2e} of the lattice"
            )
    return lax


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------

def sample_points(ctx: EllipticContext, n: int, seed: int, margin: float = 0.05) -> list[complex]:
    """n spectral parameters in the fundamental domain, off the lattice."""
    rng = np.random.default_rng(seed)
    out: list[complex] = []
    while len(out) < n:
        for z in random_points(rng, n, ctx, width=1)[:, 0]:
            if ctx.lattice_distance(z) > margin and len(out) < n:
                out.append(complex(z))
    return out


def quasiperiodicity_residual(lax: LaxOperator, zs: Sequence[complex]) -> tuple[float, float]:
    """Max relative ||L(z+1) - Ad_Q L(z)|| and ||L(z+tau) - Ad_Lambda L(z)||."""
    basis = lax.basis
    aq = ad_q_matrix(basis)
    al = ad_lambda_matrix(basis, lax.spin.cartan_point(basis))
    tau = lax.ctx.tau
    r1 = rt = 0.0
    for z in zs:
        lz = lax(z)
        scale = max(1.0, float(np.max(np.abs(lz))))
        r1 = max(r1, float(np.max(np.abs(lax(z + 1) - aq @ lz))) / scale)
        rt = max(rt, float(np.max(np.abs(lax(z + tau) - al @ lz))) / scale)
    return r1, rt


def residue(lax: LaxOperator, radius: float = 1e-2, nodes: int = 64) -> np.ndarray:
    """(1/2 pi i) contour integral of L around z = 0, componentwise."""
    coef = np.array([
        contour_residue(lambda z, i=i: lax.function(i, z), lax.ctx, radius, nodes)
        for i in range(lax.size)
    ])
    return lax.basis.duals @ (coef * lax.spin.s)


def residue_residual(lax: LaxOperator, radius: float = 1e-2, nodes: int = 64) -> float:
    """Relative distance between the contour residue and S."""
    want = lax.spin.element(lax.basis)
    got = residue(lax, radius, nodes)
    return float(np.max(np.abs(got - want)) / max(1.0, float(np.max(np.abs(want)))))


def orthogonality_residual(lax: LaxOperator, zs: Sequence[complex]) -> float:
    """Max |(L_a(z), L_b(z))| over a + b != 0 mod l."""
    l = lax.basis.l
    k = lax.basis.killing
    worst = 0.0
    for z in zs:
        parts = [lax.grade_component(z, a) for a in range(l)]
        for a in range(l):
            for b in range(l):
                if (a + b) % l:
                    worst = max(worst, float(abs(parts[a] @ k @ parts[b])))
    return worst


# ---------------------------------------------------------------------------
# Hamiltonians
# ---------------------------------------------------------------------------

@dataclass
class HamiltonianSplit:
    """Closed-form quadratic Hamiltonian split by sector, plus the E2 coefficient."""

    tilde: complex
    prime: complex
    graded: list
    total: complex
    casimir: complex

    def to_dict(self) -> dict:
        def c(x):
            return [float(np.real(x)), float(np.imag(x))]
        return {
            "H_tilde0": c(self.tilde),
            "H_prime": c(self.prime),
            "H_a": [c(x) for x in self.graded],
            "H": c(self.total),
            "I22": c(self.casimir),
        }


def hamiltonians(lax: LaxOperator, tilde: Optional[Sequence[int]] = None) -> HamiltonianSplit:
    """1/2 (L, L) = H + I E2(z) on reduced data, H assembled pairwise.

    Each pair of generators with nonzero inverse Gram contributes
    -1/2 G^{ij} S_i S_j E2(U_i), U_i the phi argument of F_i; the h^0 block
    contributes the kinetic term 1/2 G^{pq} v_p v_q.  ``tilde`` lists the
    grade-zero generators of g~_0; the remaining grade-zero t's form H'.
    """
    basis = lax.basis
    l = basis.l
    ginv = basis.gram_inv
    s = lax.spin.s
    zero = set(lax.zero)
    tilde_set = set(tilde) if tilde is not None else set(
        i for i in basis.t_indices() if basis.generators[i].grade == 0)
    m = l // 2
    graded = [0j] * m
    h_tilde = h_prime = casimir = 0j
    if lax.zero:
        v = lax.spin.v
        block = ginv[np.ix_(lax.zero, lax.zero)]
        h_tilde += 0.5 * v @ block @ v
    e2_cache: dict[int, complex] = {}
    for i in range(basis.size):
        if i in zero:
            continue
        for j in np.nonzero(np.abs(ginv[i]) > 1e-12)[0]:
            if j in zero:
                continue
            w = ginv[i, j] * s[i] * s[j]
            casimir += 0.5 * w
            if i not in e2_cache:
                e2_cache[i] = e2(lax.argument(i), lax.ctx)
            term = -0.5 * w * e2_cache[i]
            a = basis.generators[i].grade % l
            a = min(a, l - a)
            if a == 0:
                if i in tilde_set:
                    h_tilde += term
                else:
                    h_prime += term
            else:
                graded[a - 1] += term
    total = h_tilde + h_prime + sum(graded)
    return HamiltonianSplit(h_tilde, h_prime, graded, total, casimir)


@dataclass
class ScanResult:
    hamiltonian: complex
    casimir: complex
    defect: float
    samples: int

    def to_dict(self) -> dict:
        return {
            "c0": [float(self.hamiltonian.real), float(self.hamiltonian.imag)],
            "c1": [float(self.casimir.real), float(self.casimir.imag)],
            "defect": self.defect,
            "samples": self.samples,
        }


def invariant_scan(lax: LaxOperator, zs: Sequence[complex]) -> ScanResult:
    """Least-squares fit of 1/2 (L(z), L(z)) to c0 + c1 E2(z)."""
    k = lax.basis.killing
    rows, vals = [], []
    for z in zs:
        lz = lax(z)
        rows.append([1.0, e2(z, lax.ctx)])
        vals.append(0.5 * lz @ k @ lz)
    a = np.array(rows, dtype=complex)
    b = np.array(vals, dtype=complex)
    if len(zs) < 2 or np.linalg.matrix_rank(a) < 2:
        raise DegenerateSampleError(f"need two independent samples, got {len(zs)}")
    coef, *_ = np.linalg.lstsq(a, b, rcond=None)
    fit = a @ coef
    defect = float(np.max(np.abs(fit - b)) / max(1.0, float(np.max(np.abs(b)))))
    return ScanResult(complex(coef[0]), complex(coef[1]), defect, len(zs))


# ---------------------------------------------------------------------------
# Untwisted spin Calogero-Moser, coded directly from the root data
# ---------------------------------------------------------------------------

def _cartan_gram(rs: RootSystem) -> np.ndarray:
    k = killing_matrix(rs)
    n = rs.rank
    return np.array([[float(k[a][b]) for b in range(n)] for a in range(n)])


def spin_cm_hamiltonian(rs: RootSystem, u: np.ndarray, v: np.ndarray, atoms: np.ndarray,
                        ctx: EllipticContext) -> complex:
    """1/2 (v, v) - 1/2 sum_gamma ((gamma,gamma)/2) S_gamma S_-gamma E2(<gamma, u - kappa tau>).

    ``u`` is in coroot coordinates, ``v`` holds (V, H_j) and ``atoms`` the
    Chevalley atoms ((S, H_j), (S, E_gamma)).
    """
    n = rs.rank
    kh_inv = np.linalg.inv(_cartan_gram(rs))
    h = 0.5 * v @ kh_inv @ v
    kappa = [float(x) / rs.coxeter for x in rs.rho_vee]
    shifted = np.asarray(u, dtype=complex) - ctx.tau * np.array(kappa)
    for i, f in enumerate(rs.roots):
        j = rs.negative_index(i)
        h -= 0.5 * float(rs.norm2(f)) / 2 * atoms[n + i] * atoms[n + j] * e2(
            rs.pair_numeric(f, shifted), ctx)
    return complex(h)


def spin_cm_lax(rs: RootSystem, u: np.ndarray, v: np.ndarray, atoms: np.ndarray, z: complex,
                ctx: EllipticContext) -> np.ndarray:
    """Standard elliptic spin-CM Lax matrix in Chevalley coordinates."""
    n = rs.rank
    kh_inv = np.linalg.inv(_cartan_gram(rs))
    out = np.zeros(rs.dim, dtype=complex)
    out[:n] = kh_inv @ (v + e1(z, ctx) * atoms[:n])
    kappa = [float(x) / rs.coxeter for x in rs.rho_vee]
    shifted = np.asarray(u, dtype=complex) - ctx.tau * np.array(kappa)
    for i, f in enumerate(rs.roots):
        j = rs.negative_index(i)
        out[n + j] += atoms[n + i] * float(rs.norm2(f)) / 2 * phi(rs.pair_numeric(f, shifted), z, ctx)
    return out


def chevalley_phase_point(lax: LaxOperator) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(u in coroot coordinates, (V, H_j), Chevalley atoms) of a Lax phase point."""
    basis = lax.basis
    k = basis.killing
    n = basis.rs.rank
    u = lax.spin.cartan_point(basis)
    v = (k @ lax.spin.momentum(basis))[:n]
    atoms = k @ lax.spin.element(basis)
    return u, v, atoms


def standard_comparison(lax: LaxOperator, zs: Sequence[complex]) -> dict[str, float]:
    """Untwisted case: pipeline against the directly coded spin-CM model."""
    rs = lax.basis.rs
    u, v, atoms = chevalley_phase_point(lax)
    worst = 0.0
    for z in zs:
        want = spin_cm_lax(rs, u, v, atoms, z, lax.ctx)
        got = lax.standard(z)
        worst = max(worst, float(np.max(np.abs(got - want)) / max(1.0, float(np.max(np.abs(want))))))
    h_direct = spin_cm_hamiltonian(rs, u, v, atoms, lax.ctx)
    h_pipe = hamiltonians(lax).total
    return {
        "lax": worst,
        "hamiltonian": float(abs(h_pipe - h_direct) / max(1.0, abs(h_direct))),
    }
