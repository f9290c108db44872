"""Dynamical r-matrix, Poisson brackets of the Lax operator, RLL and CYBE checks.

    r(x) = sum_m rho_m(x) D_m (x) X_m,   rho_m = F_m (E1 on H~_0),

so the root part pairs t^a with its dual and the Cartan part reads
phi(-c/l, x) on h^c and E1(x) on H~_0.  On a phase point

    {L(z) (x) 1, 1 (x) L(w)} = [L(z) (x) 1 + 1 (x) L(w), r(z - w)] + A(z, w),

where A = sum (S, pr_{H~_0}[X_a, X_b]) dF_a(z - w) D_a (x) D_b vanishes on
moment-reduced data.  r satisfies

    [r12, r13] + [r12, r23] + [r13, r23]
        = sum_p (D_p^(1) d_p r23 - D_p^(2) d_p r13 + D_p^(3) d_p r12).

The Poisson side is assembled from the closed-form bracket table; the
commutator side from the Chevalley structure tensor.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .elliptic import EllipticContext, e1, phi, phi_twisted, random_points
from .errors import SingularPhaseError
from .gs.basis import GSBasis, _tensor
from .gs.relations import closed_form_structure_constants, gs_structure_constants
from .lax import LaxOperator, build_lax, moment_reduce, random_spin, zero_cartan_indices
from .pipeline import resolved_basis


# ---------------------------------------------------------------------------
# r-matrix
# ---------------------------------------------------------------------------

@dataclass
class RMatrix:
    """r(x) split into its root and Cartan parts, Chevalley coordinates in both slots."""

    root: np.ndarray
    cartan: np.ndarray

    @property
    def full(self) -> np.ndarray:
        return self.root + self.cartan


def build_r(lax: LaxOperator, z: complex, w: complex) -> RMatrix:
    """Orbit-sum form sum_m rho_m(z - w) D_m (x) X_m."""
    basis = lax.basis
    rho = lax.functions(z - w)
    is_h = np.array([g.kind == "h" for g in basis.generators])
    d, x = basis.duals, basis.vectors
    root = (d[:, ~is_h] * rho[~is_h]) @ x[:, ~is_h].T
    cartan = (d[:, is_h] * rho[is_h]) @ x[:, is_h].T
    return RMatrix(root, cartan)


def r_derivatives(lax: LaxOperator, x: complex) -> list[np.ndarray]:
    """d r / d u_p for every H~_0 coordinate."""
    basis = lax.basis
    du = np.array([lax.function_du(m, x) for m in range(lax.size)])
    out = []
    for k in range(len(lax.zero)):
        coef = du * lax.weights[:, k]
        out.append((basis.duals * coef) @ basis.vectors.T)
    return out


def _projectors(basis: GSBasis) -> list[np.ndarray]:
    """Pi_a = (1/l) sum_m omega^{ma} P^m onto the grade-a eigenspace."""
    l = basis.l
    p = basis.lift.matrix()
    powers = [np.eye(basis.rs.dim, dtype=complex)]
    for _ in range(1, l):
        powers.append(p @ powers[-1])
    return [sum(basis.omega ** (m * a) * powers[m] for m in range(l)) / l for a in range(l)]


def r_root_sum(lax: LaxOperator, z: complex, w: complex) -> RMatrix:
    """Same r built root by root from grade projectors of the Chevalley Casimir.

    root part:   sum_gamma ((gamma,gamma)/2) sum_a phi^a_gamma(x) Pi_{-a} E_-gamma (x) Pi_a E_gamma
    Cartan part: sum_c rho_c(x) (Pi_{-c} (x) Pi_c) C_H
    """
    basis = lax.basis
    rs = basis.rs
    l = basis.l
    n, dim = rs.rank, rs.dim
    ctx = lax.ctx
    x = z - w
    proj = _projectors(basis)
    u = lax.spin.cartan_point(basis)
    root = np.zeros((dim, dim), dtype=complex)
    for i, f in enumerate(rs.roots):
        ei = np.zeros(dim)
        ei[n + i] = 1
        en = np.zeros(dim)
        en[n + rs.negative_index(i)] = 1
        scale = float(rs.norm2(f)) / 2
        pairing = rs.pair_numeric(f, u)
        for a in range(l):
            right = proj[a] @ ei
            if not np.any(np.abs(right) > 1e-14):
                continue
            left = proj[(-a) % l] @ en
            coef = phi_twisted(-rs.height(f), (-a) % l, pairing, x, lax.params, ctx)
            root += scale * coef * np.outer(left, right)
    kh = basis.killing[:n, :n]
    casimir = np.zeros((dim, dim))
    casimir[:n, :n] = np.linalg.inv(kh)
    cartan = np.zeros((dim, dim), dtype=complex)
    for c in range(l):
        rho = e1(x, ctx) if c == 0 else phi(-c / l, x, ctx)
        cartan += rho * proj[(-c) % l] @ casimir @ proj[c].T
    return RMatrix(root, cartan)


def representation_residual(lax: LaxOperator, z: complex, w: complex) -> float:
    a = build_r(lax, z, w).full
    b = r_root_sum(lax, z, w).full
    return float(np.max(np.abs(a - b)) / max(1.0, float(np.max(np.abs(a)))))


# ---------------------------------------------------------------------------
# Poisson bracket table
# ---------------------------------------------------------------------------

@dataclass
class PoissonTable:
    """Brackets of the phase-space atoms.

    {S_i, S_j} = sum_k C[i, j, k] S_k (closed-form GS constants),
    {u_p, v_q} = delta_pq, everything else zero.
    """

    structure: np.ndarray
    zero: list[int] = field(default_factory=list)

    def spin_bracket(self, i: int, j: int) -> np.ndarray:
        return self.structure[i, j]

    def canonical(self, p: int, q: int) -> int:
        return 1 if p == q else 0

    def antisymmetry_defect(self) -> float:
        c = self.structure
        return float(np.max(np.abs(c + np.transpose(c, (1, 0, 2)))))


def poisson_table(basis: GSBasis) -> PoissonTable:
    return PoissonTable(closed_form_structure_constants(basis), zero_cartan_indices(basis))


def poisson_bracket_LL(lax: LaxOperator, table: PoissonTable, z: complex, w: complex,
                       perturb: float = 0.0, dynamical: bool = True) -> np.ndarray:
    """{L(z) (x) 1, 1 (x) L(w)} in Chevalley coordinates from the bracket table.

    ``perturb`` rescales the non-Cartan coefficient functions by (1 + perturb);
    ``dynamical=False`` drops the {u, v} contributions.
    """
    basis = lax.basis
    s = lax.spin.s
    zero = table.zero
    fz = lax.functions(z)
    fw = lax.functions(w)
    if perturb:
        mask = np.ones(lax.size, dtype=bool)
        mask[zero] = False
        fz[mask] *= 1 + perturb
        fw[mask] *= 1 + perturb
    m = np.outer(fz, fw) * np.einsum("abk,k->ab", table.structure, s)
    if dynamical and zero:
        dz = np.array([lax.function_du(a, z) for a in range(lax.size)]) * (1 + perturb)
        dw = np.array([lax.function_du(b, w) for b in range(lax.size)]) * (1 + perturb)
        for k, p in enumerate(zero):
            m[:, p] += s * dz * lax.weights[:, k]
            m[p, :] -= s * dw * lax.weights[:, k]
    return basis.duals @ m @ basis.duals.T


def commutator_side(lax: LaxOperator, z: complex, w: complex,
                    r: Optional[np.ndarray] = None) -> np.ndarray:
    """[L(z) (x) 1 + 1 (x) L(w), r(z - w)] through the Chevalley structure tensor."""
    f = _tensor(lax.basis.sc)
    if r is None:
        r = build_r(lax, z, w).full
    ad_z = np.einsum("m,mik->ki", lax(z), f)
    ad_w = np.einsum("m,mik->ki", lax(w), f)
    return ad_z @ r + r @ ad_w.T


def anomaly(lax: LaxOperator, z: complex, w: complex,
            structure: Optional[np.ndarray] = None) -> np.ndarray:
    """A(z, w): the dF term carried by the H~_0 projection of the spin."""
    basis = lax.basis
    if not lax.zero:
        return np.zeros((basis.rs.dim, basis.rs.dim), dtype=complex)
    c = gs_structure_constants(basis) if structure is None else structure
    s = lax.spin.s
    proj = np.einsum("abp,p->ab", c[:, :, lax.zero], s[lax.zero])
    proj[lax.zero, :] = 0
    proj[:, lax.zero] = 0
    du = np.array([lax.function_du(a, z - w) for a in range(lax.size)])
    m = proj * du[:, None]
    return basis.duals @ m @ basis.duals.T


def _scaled(diff: np.ndarray, *terms: np.ndarray) -> float:
    scale = max(float(np.max(np.abs(t))) for t in terms)
    return float(np.max(np.abs(diff))) / max(scale, 1e-300)


@dataclass
class RLLPoint:
    residual: float
    anomaly: float
    without_anomaly: float
    sensitivity: float
    ablation: float
    representation: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def rll_point(lax: LaxOperator, table: PoissonTable, z: complex, w: complex,
              structure: Optional[np.ndarray] = None) -> RLLPoint:
    """All RLL residuals at one (z, w), normalized by the largest term."""
    lhs = poisson_bracket_LL(lax, table, z, w)
    rhs = commutator_side(lax, z, w)
    anom = anomaly(lax, z, w, structure)
    residual = _scaled(lhs - rhs - anom, lhs, rhs, anom)
    without = _scaled(lhs - rhs, lhs, rhs)
    pert = poisson_bracket_LL(lax, table, z, w, perturb=1e-4)
    sensitivity = _scaled(pert - rhs - anom, pert, rhs, anom)
    if lax.zero:
        abl = poisson_bracket_LL(lax, table, z, w, dynamical=False)
        ablation = _scaled(abl - rhs - anom, abl, rhs, anom)
    else:
        r = build_r(lax, z, w)
        rhs_abl = commutator_side(lax, z, w, r=r.root)
        ablation = _scaled(lhs - rhs_abl - anom, lhs, rhs_abl, anom)
    return RLLPoint(
        residual=residual,
        anomaly=float(np.max(np.abs(anom))),
        without_anomaly=without,
        sensitivity=sensitivity,
        ablation=ablation,
        representation=representation_residual(lax, z, w),
    )


# ---------------------------------------------------------------------------
# Classical dynamical Yang-Baxter equation
# ---------------------------------------------------------------------------

def _cybe_terms(f: np.ndarray, r12: np.ndarray, r13: np.ndarray,
                r23: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """[r12, r13], [r12, r23], [r13, r23] as separate arrays."""
    a = np.einsum("ij,km,ikn->njm", r12, r13, f, optimize=True)
    b = np.einsum("ij,km,jkn->inm", r12, r23, f, optimize=True)
    c = np.einsum("ij,km,jmn->ikn", r13, r23, f, optimize=True)
    return a, b, c


def _dynamical_terms(lax: LaxOperator, x12: complex, x13: complex, x23: complex) -> np.ndarray:
    dim = lax.basis.rs.dim
    out = np.zeros((dim, dim, dim), dtype=complex)
    if not lax.zero:
        return out
    d12 = r_derivatives(lax, x12)
    d13 = r_derivatives(lax, x13)
    d23 = r_derivatives(lax, x23)
    for k, p in enumerate(lax.zero):
        dp = lax.basis.duals[:, p]
        out += np.einsum("i,jk->ijk", dp, d23[k])
        out -= np.einsum("ik,j->ijk", d13[k], dp)
        out += np.einsum("ij,k->ijk", d12[k], dp)
    return out


@dataclass
class CYBEPoint:
    residual: float
    ablation: float
    control: str

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def cybe_point(lax: LaxOperator, z1: complex, z2: complex, z3: complex) -> CYBEPoint:
    f = _tensor(lax.basis.sc)
    x12, x13, x23 = z1 - z2, z1 - z3, z2 - z3
    r12, r13, r23 = (build_r(lax, a, b) for a, b in ((z1, z2), (z1, z3), (z2, z3)))
    terms = _cybe_terms(f, r12.full, r13.full, r23.full)
    comm = sum(terms)
    dyn = _dynamical_terms(lax, x12, x13, x23)
    # scale by the individual brackets; their sum is what vanishes
    scale = max(max(float(np.max(np.abs(t))) for t in terms), float(np.max(np.abs(dyn))))
    scale = max(scale, 1e-300)
    residual = float(np.max(np.abs(comm - dyn))) / scale
    if lax.zero:
        ablation = float(np.max(np.abs(comm))) / scale
        control = "dynamical terms dropped"
    else:
        comm_abl = sum(_cybe_terms(f, r12.root, r13.root, r23.root))
        ablation = float(np.max(np.abs(comm_abl - dyn))) / scale
        control = "Cartan part of r dropped"
    return CYBEPoint(residual, ablation, control)


# ---------------------------------------------------------------------------
# Sample sweeps
# ---------------------------------------------------------------------------

def _spectral_points(rng: np.random.Generator, ctx: EllipticContext, count: int,
                     margin: float = 0.05) -> list[complex]:
    """``count`` points whose pairwise differences also stay off the lattice."""
    while True:
        pts = [complex(p) for p in random_points(rng, 1, ctx, width=count)[0]]
        diffs = [a - b for i, a in enumerate(pts) for b in pts[i + 1:]]
        if min(ctx.lattice_distance(p) for p in pts + diffs) > margin:
            return pts


@dataclass
class SweepSummary:
    draws: int
    skipped: int
    maxima: dict
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"draws": self.draws, "skipped": self.skipped, "max": self.maxima,
                "notes": self.notes}


def rll_sweep(basis: GSBasis, ctx: EllipticContext, seed: int, samples: int,
              reduced: bool = True) -> SweepSummary:
    """Max RLL residuals over random phase points and spectral pairs."""
    rng = np.random.default_rng(seed)
    table = poisson_table(basis)
    structure = gs_structure_constants(basis)
    maxima: dict[str, float] = {}
    minima: dict[str, float] = {}
    skipped = 0
    for d in range(samples):
        spin = random_spin(basis, seed + d)
        if reduced:
            spin = moment_reduce(spin, basis)
        try:
            lax = build_lax(basis, spin, ctx)
        except SingularPhaseError:
            skipped += 1
            continue
        z, w = _spectral_points(rng, ctx, 2)
        point = rll_point(lax, table, z, w, structure).as_dict()
        for key, val in point.items():
            maxima[key] = max(maxima.get(key, 0.0), val)
            minima[key] = min(minima.get(key, np.inf), val)
    maxima["min_sensitivity"] = minima.get("sensitivity", 0.0)
    maxima["min_ablation"] = minima.get("ablation", 0.0)
    maxima["table_antisymmetry"] = table.antisymmetry_defect()
    return SweepSummary(samples, skipped, maxima)


def cybe_sweep(basis: GSBasis, ctx: EllipticContext, seed: int, samples: int) -> SweepSummary:
    rng = np.random.default_rng(seed)
    worst, weakest = 0.0, np.inf
    control = ""
    skipped = 0
    for d in range(samples):
        spin = moment_reduce(random_spin(basis, seed + d), basis)
        try:
            lax = build_lax(basis, spin, ctx)
        except SingularPhaseError:
            skipped += 1
            continue
        z1, z2, z3 = _spectral_points(rng, ctx, 3)
        point = cybe_point(lax, z1, z2, z3)
        worst = max(worst, point.residual)
        weakest = min(weakest, point.ablation)
        control = point.control
    return SweepSummary(samples, skipped, {"residual": worst, "min_ablation": float(weakest)},
                        [f"negative control: {control}"] if control else [])


def rll_residual(algebra: str, j: Optional[int], seed: int, samples: int,
                 tau: complex = 0.3 + 1.5j) -> float:
    """Max RLL residual for an algebra id and class index, on reduced draws."""
    basis = resolved_basis(algebra, j).basis
    return rll_sweep(basis, EllipticContext(tau), seed, samples).maxima.get("residual", 0.0)


def cybe_residual(algebra: str, j: Optional[int], seed: int, samples: int,
                  tau: complex = 0.3 + 1.5j) -> float:
    basis = resolved_basis(algebra, j).basis
    return cybe_sweep(basis, EllipticContext(tau), seed, samples).maxima["residual"]
