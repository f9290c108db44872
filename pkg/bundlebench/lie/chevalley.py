"""Chevalley basis structure constants via extraspecial pairs.

Basis order is H_1..H_n (simple coroots) followed by E_gamma for the roots
in ``rs.roots`` order.  Constants N_{a,b} are integers with |N_{a,b}| = p+1,
where p is the largest integer with b - p a a root; signs are fixed by
taking N = +(p+1) on every extraspecial pair.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from ..errors import BundleBenchError
from . import rational as Q
from .rootsystem import RootSystem, killing_matrix


@dataclass(frozen=True)
class StructureConstants:
    """Sparse table N[(i, j)] = N_{gamma_i, gamma_j} for gamma_i + gamma_j in R."""

    rs: RootSystem
    table: dict = field(repr=False)

    def n(self, i: int, j: int) -> int:
        """N_{gamma_i, gamma_j} (0 when gamma_i + gamma_j is not a root)."""
        return self.table.get((i, j), 0)

    def of_roots(self, a: Sequence[int], b: Sequence[int]) -> int:
        return self.n(self.rs.index(a), self.rs.index(b))

    def gauged(self, signs: Sequence[int]) -> "StructureConstants":
        """Constants after E_gamma -> signs[gamma] E_gamma."""
        rs = self.rs
        out = {}
        for (i, j), v in self.table.items():
            k = rs.index(tuple(a + b for a, b in zip(rs.roots[i], rs.roots[j])))
            out[(i, j)] = v * signs[i] * signs[j] * signs[k]
        return StructureConstants(rs, out)


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _neg(a):
    return tuple(-x for x in a)


def _p_value(rs: RootSystem, r, s) -> int:
    """Largest p with s - p r a root."""
    p = 0
    cur = s
    while True:
        cur = tuple(x - y for x, y in zip(cur, r))
        if rs.is_root(cur):
            p += 1
        else:
            return p


@lru_cache(maxsize=None)
def chevalley_constants(rs: RootSystem) -> StructureConstants:
    """Structure constants of the Chevalley basis of ``rs``."""
    pos = list(rs.positive_roots)
    order = {f: i for i, f in enumerate(pos)}
    npos: dict[tuple, int] = {}

    def n(a, b) -> Fraction:
        """N_{a,b} for arbitrary roots with a + b a root, from lower heights."""
        a_pos, b_pos = a in order, b in order
        if a_pos and b_pos:
            if (a, b) in npos:
                return Fraction(npos[(a, b)])
            return Fraction(-npos[(b, a)])
        if not a_pos and not b_pos:
            return -n(_neg(a), _neg(b))
        if not a_pos:
            return -n(b, a)
        g = _add(a, b)
        if g in order:
            return -Fraction(rs.norm2(g)) / rs.norm2(a) * n(_neg(b), g)
        eta = _neg(g)
        return Fraction(rs.norm2(eta)) / rs.norm2(b) * n(eta, a)

    by_height = sorted(pos, key=lambda f: (sum(f), order[f]))
    for xi in by_height:
        if sum(xi) == 1:
            continue
        special = []
        for r in pos:
            s = tuple(x - y for x, y in zip(xi, r))
            if s in order and order[r] < order[s]:
                special.append((r, s))
        special.sort(key=lambda rs_: order[rs_[0]])
        r0, s0 = special[0]
        n0 = _p_value(rs, r0, s0) + 1
        npos[(r0, s0)] = n0
        xi2 = rs.norm2(xi)
        for r, s in special[1:]:
            total = Fraction(0)
            d1 = tuple(x - y for x, y in zip(s, r0))
            if rs.is_root(d1):
                total += n(s, _neg(r0)) * n(r, _neg(s0)) / rs.norm2(d1)
            d2 = tuple(x - y for x, y in zip(r, r0))
            if rs.is_root(d2):
                total += n(_neg(r0), r) * n(s, _neg(s0)) / rs.norm2(d2)
            val = xi2 / n0 * total
            if val.denominator != 1:
                raise ArithmeticError(f"non-integral structure constant {val} at {r},{s}")
            npos[(r, s)] = int(val)

    table = {}
    for i, a in enumerate(rs.roots):
        for j, b in enumerate(rs.roots):
            g = _add(a, b)
            if rs.is_root(g):
                v = n(a, b)
                table[(i, j)] = int(v)
    return StructureConstants(rs, table)


# ---------------------------------------------------------------------------
# Dense tensors
# ---------------------------------------------------------------------------

def structure_tensor(sc: StructureConstants) -> np.ndarray:
    """Integer tensor f[i, j, k] with [X_i, X_j] = sum_k f[i, j, k] X_k."""
    rs = sc.rs
    n, dim = rs.rank, rs.dim
    f = np.zeros((dim, dim, dim), dtype=np.int64)
    ha = np.array(rs.cartan, dtype=np.int64)
    for i, a in enumerate(rs.roots):
        # [H_k, E_a] = <a, alpha_k^vee> E_a
        weights = np.array(a, dtype=np.int64) @ ha
        for k in range(n):
            f[k, n + i, n + i] = weights[k]
            f[n + i, k, n + i] = -weights[k]
        # [E_a, E_-a] = H_a
        j = rs.negative_index(i)
        for k, c in enumerate(rs.coroot(a)):
            f[n + i, n + j, k] = c
    for (i, j), v in sc.table.items():
        k = rs.index(_add(rs.roots[i], rs.roots[j]))
        f[n + i, n + j, n + k] = v
    return f


def adjoint_matrices(f: np.ndarray) -> np.ndarray:
    """ad(X_i) as matrices acting on coefficient columns: ad[i] = f[i].T."""
    return np.transpose(f, (0, 2, 1)).copy()


def jacobi_defect(sc: StructureConstants) -> int:
    """Number of (i, j) pairs with ad([X_i, X_j]) != [ad X_i, ad X_j].

    Integer-valued matrices are multiplied in float64, which is exact at these
    magnitudes; the comparison is done on integers.
    """
    f = structure_tensor(sc)
    ad = adjoint_matrices(f).astype(np.float64)
    dim = f.shape[0]
    bad = 0
    for i in range(dim):
        left = ad[i] @ ad - ad @ ad[i]
        right = np.tensordot(f[i].astype(np.float64), ad, axes=([1], [0]))
        diff = np.rint(left).astype(np.int64) - np.rint(right).astype(np.int64)
        bad += int(np.count_nonzero(np.any(diff != 0, axis=(1, 2))))
    return bad


def killing_pair(rs: RootSystem, x: Sequence, y: Sequence):
    """(x, y) for elements given by Chevalley-basis coefficient vectors."""
    if len(x) != rs.dim or len(y) != rs.dim:
        raise BundleBenchError(f"elements must have {rs.dim} Chevalley coefficients for {rs.name}")
    k = killing_matrix(rs)
    if all(isinstance(v, (int, Fraction)) for v in list(x) + list(y)):
        return Q.dot(Q.vec_mat(x, k), y)
    km = np.array([[float(v) for v in row] for row in k])
    return np.asarray(x) @ km @ np.asarray(y)


def killing_array(rs: RootSystem) -> np.ndarray:
    """Float copy of the exact Chevalley Gram matrix."""
    return np.array([[float(v) for v in row] for row in killing_matrix(rs)])
