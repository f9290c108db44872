"""Weyl group elements acting on coroot coordinates and on roots.

A Weyl element is stored twice: as the integer matrix M acting on Cartan
vectors in simple-coroot coordinates, and as the integer matrix N acting on
root coordinates.  The two are tied by ``N^T A M = A`` (the pairing is
invariant).
"""

from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import NotARootError
from . import rational as Q
from .rootsystem import RootSystem

IntMatrix = tuple[tuple[int, ...], ...]


def _to_tuple(m: np.ndarray) -> IntMatrix:
    return tuple(tuple(int(v) for v in row) for row in m)


@dataclass(frozen=True)
class WeylElement:
    coroot_matrix: IntMatrix
    root_matrix: IntMatrix

    @property
    def rank(self) -> int:
        return len(self.coroot_matrix)

    # --- actions --------------------------------------------------------------

    def apply(self, x: Sequence) -> Q.Vector:
        """Action on an exact Cartan vector (coroot coordinates)."""
        return Q.mat_vec(self.coroot_matrix, x)

    def apply_numeric(self, x: Sequence) -> np.ndarray:
        return np.array(self.coroot_matrix, dtype=float) @ np.asarray(x)

    def apply_root(self, f: Sequence[int]) -> tuple[int, ...]:
        """Action on a root-coordinate vector."""
        return tuple(int(sum(r[k] * f[k] for k in range(len(f)))) for r in self.root_matrix)

    def apply_weight(self, f: Sequence) -> Q.Vector:
        return Q.mat_vec(self.root_matrix, f)

    def root_permutation(self, rs: RootSystem) -> tuple[int, ...]:
        """perm[i] = index of w(gamma_i)."""
        return tuple(rs.index(self.apply_root(f)) for f in rs.roots)

    # --- group structure ------------------------------------------------------

    def compose(self, other: "WeylElement") -> "WeylElement":
        """self o other."""
        m = np.array(self.coroot_matrix) @ np.array(other.coroot_matrix)
        n = np.array(self.root_matrix) @ np.array(other.root_matrix)
        return WeylElement(_to_tuple(m), _to_tuple(n))

    def inverse(self) -> "WeylElement":
        m = np.rint(np.linalg.inv(np.array(self.coroot_matrix, dtype=float)))
        n = np.rint(np.linalg.inv(np.array(self.root_matrix, dtype=float)))
        out = WeylElement(_to_tuple(m), _to_tuple(n))
        if not self.compose(out).is_identity():
            raise ArithmeticError("Weyl matrix inversion lost exactness")
        return out

    def power(self, k: int) -> "WeylElement":
        base = self if k >= 0 else self.inverse()
        out = identity_element(self.rank)
        for _ in range(abs(k)):
            out = out.compose(base)
        return out

    def is_identity(self) -> bool:
        n = self.rank
        eye = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        return self.coroot_matrix == eye and self.root_matrix == eye

    def order(self, bound: int = 1000) -> int:
        cur = self
        for k in range(1, bound + 1):
            if cur.is_identity():
                return k
            cur = cur.compose(self)
        raise ArithmeticError("Weyl element order exceeds bound")


def identity_element(n: int) -> WeylElement:
    eye = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    return WeylElement(eye, eye)


def simple_reflection(rs: RootSystem, k: int) -> WeylElement:
    """s_k for the 0-based simple root k."""
    n = rs.rank
    a = np.array(rs.cartan, dtype=np.int64)
    m = np.eye(n, dtype=np.int64)
    m[k, :] -= a[k, :]
    nm = np.eye(n, dtype=np.int64)
    nm[k, :] -= a[:, k]
    return WeylElement(_to_tuple(m), _to_tuple(nm))


def reflection(rs: RootSystem, f: Sequence[int]) -> WeylElement:
    """s_alpha for an arbitrary root alpha (root coordinates)."""
    if not rs.is_root(f):
        raise NotARootError(f"{list(f)} is not a root of {rs.name}")
    a = np.array(rs.cartan, dtype=np.int64)
    fv = np.array(f, dtype=np.int64)
    c = np.array(rs.coroot(f), dtype=np.int64)
    n = rs.rank
    # x -> x - <alpha, x> alpha^vee ;  g -> g - <g, alpha^vee> alpha
    m = np.eye(n, dtype=np.int64) - np.outer(c, fv @ a)
    nm = np.eye(n, dtype=np.int64) - np.outer(fv, a @ c)
    return WeylElement(_to_tuple(m), _to_tuple(nm))


def weyl_reflect(rs: RootSystem, f: Sequence[int], x: Sequence) -> Q.Vector:
    """s_alpha(x) = x - <alpha, x> alpha^vee on an exact Cartan vector."""
    if not rs.is_root(f):
        raise NotARootError(f"{list(f)} is not a root of {rs.name}")
    return Q.sub(x, Q.scale(rs.pair(f, x), rs.coroot(f)))


def weyl_reflect_root(rs: RootSystem, f: Sequence[int], g: Sequence) -> Q.Vector:
    """Dual action on V*: s_alpha(g) = g - <g, alpha^vee> alpha."""
    if not rs.is_root(f):
        raise NotARootError(f"{list(f)} is not a root of {rs.name}")
    return Q.sub(g, Q.scale(rs.pair(g, rs.coroot(f)), f))


def from_coroot_matrix(rs: RootSystem, m: Sequence[Sequence]) -> WeylElement:
    """Rebuild the root action N = A^{-T} M^{-T} A^T from the coroot matrix."""
    a = rs.cartan
    minv = Q.inverse(m)
    n = Q.mat_mul(Q.mat_mul(Q.transpose(rs.cartan_inv), Q.transpose(minv)), Q.transpose(a))
    return WeylElement(
        tuple(Q.as_ints(r) for r in m),
        tuple(Q.as_ints(r) for r in n),
    )


def preserves_form(rs: RootSystem, w: WeylElement) -> bool:
    """(w f, w g) = (f, g) on simple roots, exactly."""
    simple = rs.simple_roots
    for f in simple:
        for g in simple:
            if rs.inner(w.apply_root(f), w.apply_root(g)) != rs.inner(f, g):
                return False
    return True


def weyl_group_elements(rs: RootSystem, limit: int = 5000) -> list[WeylElement]:
    """Breadth-first closure of the simple reflections (small ranks only)."""
    gens = [simple_reflection(rs, k) for k in range(rs.rank)]
    start = identity_element(rs.rank)
    seen = {start.coroot_matrix: start}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for s in gens:
            v = s.compose(w)
            if v.coroot_matrix not in seen:
                seen[v.coroot_matrix] = v
                if len(seen) > limit:
                    raise ValueError(f"Weyl group of {rs.name} exceeds enumeration limit {limit}")
                queue.append(v)
    return list(seen.values())


def weyl_group_order(rs: RootSystem) -> int:
    """|W| = product of the degrees."""
    out = 1
    for d in rs.degrees:
        out *= d
    return out

