"""GS Cartan generators built from an orthonormal basis of H (classical types).

The Cartan subalgebra is written in epsilon-coordinates, where lambda acts
by a signed permutation (a plain permutation for A_n, which uses the gl_N
extension H + C).  Fourier transforms along the orbits of e_s give

    h^c_s = l^{-1/2} sum_m omega^{mc} lambda^m e_s,

with Gram (h^c_s, h^{c'}_{s'}) = p_s delta_{ss'} delta^{c+c'} and duals
H^c_s = h^{-c}_s / p_s.
"""

import math
from dataclasses import dataclass

import numpy as np

from ..errors import UnsupportedAlgebraError
from ..lie.rootsystem import RootSystem
from .basis import GSBasis


def epsilon_data(rs: RootSystem) -> tuple[np.ndarray, float]:
    """Simple roots in epsilon-coordinates (rows) and the squared length g of epsilon_i."""
    n = rs.rank
    fam = rs.family
    if fam == "A":
        s = np.zeros((n, n + 1))
        for k in range(n):
            s[k, k], s[k, k + 1] = 1, -1
        return s, 1.0
    if fam not in ("B", "C", "D"):
        raise UnsupportedAlgebraError(f"no epsilon basis for {rs.name}")
    s = np.zeros((n, n))
    for k in range(n - 1):
        s[k, k], s[k, k + 1] = 1, -1
    if fam == "B":
        s[n - 1, n - 1] = 1
        return s, 1.0
    if fam == "C":
        s[n - 1, n - 1] = 2
        return s, 0.5
    s[n - 1, n - 2], s[n - 1, n - 1] = 1, 1
    return s, 1.0


@dataclass
class CanonicalBasis:
    rs: RootSystem
    l: int
    g: float
    simple_eps: np.ndarray
    coroot_rows: np.ndarray
    action: np.ndarray
    labels: list
    vectors: np.ndarray
    p: list

    @property
    def size(self) -> int:
        return len(self.labels)

    def gram(self) -> np.ndarray:
        return self.vectors.T @ self.vectors / self.g

    def duals(self) -> np.ndarray:
        """H^c_s = h^{-c}_s / p_s, as columns."""
        out = np.zeros_like(self.vectors)
        index = {lab: i for i, lab in enumerate(self.labels)}
        for i, (s, c) in enumerate(self.labels):
            j = index[(s, (-c) % self.l)]
            out[:, i] = self.vectors[:, j] / self.p[i]
        return out

    def to_coroot(self, y: np.ndarray) -> np.ndarray:
        """epsilon-coordinates -> simple-coroot coordinates (trace dropped for A)."""
        if self.rs.family == "A":
            y = y - np.mean(y)
        sol, *_ = np.linalg.lstsq(self.coroot_rows.T.astype(complex), y, rcond=None)
        return sol

    def root_eps(self, i: int) -> np.ndarray:
        return np.array(self.rs.roots[i], dtype=float) @ self.simple_eps


def _signed_permutation(rs: RootSystem, perm, simple_eps: np.ndarray) -> np.ndarray:
    f = np.array(rs.roots, dtype=float)
    src = f @ simple_eps
    dst = f[list(perm)] @ simple_eps
    if rs.family == "A":
        ones = np.ones((1, simple_eps.shape[1]))
        src, dst = np.vstack([src, ones]), np.vstack([dst, ones])
    sol, *_ = np.linalg.lstsq(src, dst, rcond=None)
    action = np.rint(sol.T)
    if not (np.all(np.sum(np.abs(action), axis=0) == 1) and np.allclose(src @ action.T, dst)):
        raise UnsupportedAlgebraError(f"lambda is not a signed permutation on epsilon for {rs.name}")
    return action


def build_canonical_basis(basis: GSBasis) -> CanonicalBasis:
    rs = basis.rs
    l = basis.l
    s_eps, g = epsilon_data(rs)
    coroot_rows = np.array([2 * row / (row @ row) for row in s_eps])
    action = _signed_permutation(rs, basis.orbits.root_perm, s_eps)
    size = s_eps.shape[1]
    omega = np.exp(2j * np.pi / l)

    labels, cols, ps = [], [], []
    seen = set()
    for s in range(size):
        if s in seen:
            continue
        e = np.zeros(size)
        e[s] = math.sqrt(g)
        cur = e.copy()
        members = []
        for _ in range(l):
            k = int(np.argmax(np.abs(cur)))
            if k not in members:
                members.append(k)
            cur = action @ cur
        seen.update(members)
        p_s = l // len(members)
        for c in range(l):
            v = np.zeros(size, dtype=complex)
            cur = e.astype(complex)
            for m in range(l):
                v += omega ** (m * c) * cur
                cur = action @ cur
            v /= math.sqrt(l)
            if np.max(np.abs(v)) < 1e-9:
                continue
            labels.append((s, c))
            cols.append(v)
            ps.append(p_s)
    return CanonicalBasis(rs, l, g, s_eps, coroot_rows, action, labels,
                          np.column_stack(cols), ps)


def canonical_gram_residual(cb: CanonicalBasis) -> float:
    """Gram against p_s delta_{ss'} delta^{c+c'}."""
    want = np.zeros((cb.size, cb.size))
    for i, (s, c) in enumerate(cb.labels):
        for j, (s2, c2) in enumerate(cb.labels):
            if s == s2 and (c + c2) % cb.l == 0:
                want[i, j] = cb.p[i]
    return float(np.max(np.abs(cb.gram() - want)))


def dual_residual(cb: CanonicalBasis) -> float:
    pairing = cb.duals().T @ cb.vectors / cb.g
    return float(np.max(np.abs(pairing - np.eye(cb.size))))


def canonical_cartan_residual(basis: GSBasis, cb: CanonicalBasis) -> float:
    """[h^k_s, t^m_B] = l^{-1/2} sum_r omega^{-rk} <lambda^r B, e_s> t^{k+m}_B."""
    rs = basis.rs
    l = basis.l
    worst = 0.0
    for i, (s, k) in enumerate(cb.labels):
        h = np.zeros(rs.dim, dtype=complex)
        h[: rs.rank] = cb.to_coroot(cb.vectors[:, i])
        for j in basis.t_indices():
            g = basis.generators[j]
            base = basis.orbits.root_orbits[g.orbit].base
            coef = 0j
            for r in range(l):
                img = basis.lift.image(base, r)
                coef += basis.omega ** (-r * k) * cb.root_eps(img)[s] * math.sqrt(cb.g)
            coef /= math.sqrt(l)
            lhs = basis.bracket(h, basis.vectors[:, j])
            target = basis.find("t", g.orbit, k + g.grade)
            rhs = coef * basis.vectors[:, target] if target is not None else 0 * lhs
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst
