"""Root systems of the simple Lie algebras with non-trivial center.

Conventions (fixed everywhere in the package):

* roots are integer vectors in the simple-root basis;
* Cartan-space vectors are exact rationals in the simple-coroot basis, so
  the pairing is ``<f, x> = f^T A x`` with ``A[j][k] = <alpha_j, alpha_k^vee>``;
* long roots have squared length 2;
* Bourbaki labelling of the Dynkin diagrams (B_n: alpha_n short,
  C_n: alpha_n long, D_n: fork at n-2, E: 1-3-4-5-6(-7) with 2-4).
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from ..errors import NotARootError, TrivialCenterError, UnsupportedAlgebraError
from . import rational as Q

FAMILIES = ("A", "B", "C", "D", "E")

SUPPORTED_IDS = (
    "A1", "A2", "A3", "A4", "A5",
    "B2", "B3", "B4",
    "C2", "C3", "C4",
    "D4", "D5",
    "E6", "E7",
)

_ID_RE = re.compile(r"^\s*([A-Ga-g])\s*(\d+)\s*$")


# ---------------------------------------------------------------------------
# Static data
# ---------------------------------------------------------------------------

def _check_rank(family: str, rank: int) -> None:
    if family in ("G", "F") or (family == "E" and rank == 8):
        raise TrivialCenterError(
            f"{family}{rank} has trivial center; no non-trivial characteristic classes"
        )
    ok = {
        "A": rank >= 1,
        "B": rank >= 2,
        "C": rank >= 2,
        "D": rank >= 3,
        "E": rank in (6, 7),
    }.get(family, False)
    if not ok:
        raise UnsupportedAlgebraError(f"unsupported family/rank pair {family}{rank}")


def _edges(family: str, n: int) -> list[tuple[int, int]]:
    """Dynkin edges (0-based) of the simply-laced skeleton."""
    if family in ("A", "B", "C"):
        return [(k, k + 1) for k in range(n - 1)]
    if family == "D":
        chain = [(k, k + 1) for k in range(n - 2)]
        return chain + [(n - 3, n - 1)]
    # E6/E7: 1-3, 3-4, 4-5, 5-6, (6-7), 2-4 in Bourbaki labels
    edges = [(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)]
    if n == 7:
        edges.append((5, 6))
    return edges


def _root_lengths(family: str, n: int) -> tuple[int, ...]:
    if family == "B":
        return (2,) * (n - 1) + (1,)
    if family == "C":
        return (1,) * (n - 1) + (2,)
    return (2,) * n


def _cartan(family: str, n: int) -> tuple[tuple[int, ...], ...]:
    d = _root_lengths(family, n)
    a = [[2 if j == k else 0 for k in range(n)] for j in range(n)]
    for j, k in _edges(family, n):
        # (alpha_j, alpha_k) = -max(d_j, d_k)/2 for adjacent nodes
        ip = Fraction(-max(d[j], d[k]), 2)
        a[j][k] = int(2 * ip / d[k])
        a[k][j] = int(2 * ip / d[j])
    return tuple(tuple(r) for r in a)


def _degrees(family: str, n: int) -> tuple[int, ...]:
    if family == "A":
        return tuple(range(2, n + 2))
    if family in ("B", "C"):
        return tuple(range(2, 2 * n + 1, 2))
    if family == "D":
        return tuple(sorted(list(range(2, 2 * n - 1, 2)) + [n]))
    if n == 6:
        return (2, 5, 6, 8, 9, 12)
    return (2, 6, 8, 10, 12, 14, 18)


def _center(family: str, n: int) -> tuple[int, ...]:
    """Invariant factors of P^vee/Q^vee."""
    if family == "A":
        return (n + 1,)
    if family == "D":
        return (2, 2) if n % 2 == 0 else (4,)
    if family == "E":
        return (3,) if n == 6 else (2,)
    return (2,)


# ---------------------------------------------------------------------------
# RootSystem
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootSystem:
    """Exact root data of one simple algebra.

    ``roots`` lists the positive roots ordered by (height, lexicographic),
    followed by their negatives in the same order.
    """

    family: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    cartan_inv: Q.Matrix
    simple_lengths: tuple[int, ...]
    form: Q.Matrix
    roots: tuple[tuple[int, ...], ...]
    highest_root: tuple[int, ...]
    degrees: tuple[int, ...]
    center: tuple[int, ...]
    _index: dict = field(default_factory=dict, compare=False, repr=False)

    # --- identity -----------------------------------------------------------

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def dim(self) -> int:
        """Dimension of the algebra."""
        return self.rank + len(self.roots)

    @property
    def n_positive(self) -> int:
        return len(self.roots) // 2

    @property
    def positive_roots(self) -> tuple[tuple[int, ...], ...]:
        return self.roots[: self.n_positive]

    @property
    def simple_roots(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(1 if i == k else 0 for i in range(self.rank))
                     for k in range(self.rank))

    # --- lookup -------------------------------------------------------------

    def is_root(self, f: Sequence[int]) -> bool:
        return tuple(int(v) for v in f) in self._index

    def index(self, f: Sequence[int]) -> int:
        key = tuple(int(v) for v in f)
        try:
            return self._index[key]
        except KeyError:
            raise NotARootError(f"{list(key)} is not a root of {self.name}") from None

    def negative_index(self, i: int) -> int:
        p = self.n_positive
        return i + p if i < p else i - p

    # --- bilinear data ------------------------------------------------------

    def pair(self, f: Sequence, x: Sequence) -> Fraction:
        """<f, x> for f in root coordinates and x in coroot coordinates."""
        return Q.dot(Q.vec_mat(f, self.cartan), x)

    def pair_numeric(self, f: Sequence, x: Sequence):
        """Same pairing for complex/float Cartan vectors."""
        n = self.rank
        return sum(f[j] * self.cartan[j][k] * x[k] for j in range(n) for k in range(n)
                   if f[j] and self.cartan[j][k])

    def inner(self, f: Sequence, g: Sequence) -> Fraction:
        """(f, g) for f, g in root coordinates."""
        return Q.dot(Q.vec_mat(f, self.form), g)

    def norm2(self, f: Sequence) -> Fraction:
        return self.inner(f, f)

    def height(self, f: Sequence[int]) -> int:
        return int(sum(f))

    def coroot(self, f: Sequence[int]) -> tuple[int, ...]:
        """alpha^vee in simple-coroot coordinates (integral)."""
        n2 = self.norm2(f)
        return Q.as_ints(Fraction(f[j] * self.simple_lengths[j]) / n2 for j in range(self.rank))

    def cartan_inner(self, x: Sequence, y: Sequence) -> Fraction:
        """Invariant form on Cartan vectors: (alpha_j^vee, alpha_k^vee) = 2 A[j][k]/d_j."""
        return Q.dot(Q.vec_mat(x, self.cartan_form), y)

    @property
    def cartan_form(self) -> Q.Matrix:
        d = self.simple_lengths
        return tuple(tuple(Fraction(2 * self.cartan[j][k], d[j]) for k in range(self.rank))
                     for j in range(self.rank))

    def sharp(self, f: Sequence) -> Q.Vector:
        """Metric dual of a root-coordinate functional, in coroot coordinates."""
        return tuple(Fraction(f[j]) * self.simple_lengths[j] / 2 for j in range(self.rank))

    def flat(self, x: Sequence) -> Q.Vector:
        """Inverse of :meth:`sharp`: coroot coordinates to root coordinates."""
        return tuple(Q.frac(x[j]) * 2 / self.simple_lengths[j] for j in range(self.rank))

    # --- lattices and special vectors ---------------------------------------

    def fundamental_coweight(self, j: int) -> Q.Vector:
        """varpi^vee_j (0-based j), column j of A^{-1}."""
        return tuple(self.cartan_inv[i][j] for i in range(self.rank))

    def fundamental_weight(self, j: int) -> Q.Vector:
        """varpi_j in root coordinates, row j of A^{-1}."""
        return self.cartan_inv[j]

    @property
    def rho_vee(self) -> Q.Vector:
        return tuple(sum(row, Fraction(0)) for row in self.cartan_inv)

    @property
    def marks(self) -> tuple[int, ...]:
        """n_j: coefficients of the highest root theta = -alpha_0."""
        return self.highest_root

    @property
    def comarks(self) -> tuple[Fraction, ...]:
        """n^vee_j with theta^vee = sum n^vee_j alpha_j^vee."""
        return tuple(Fraction(v) for v in self.coroot(self.highest_root))

    @property
    def coxeter(self) -> int:
        return 1 + sum(self.highest_root)

    @property
    def minuscule(self) -> tuple[int, ...]:
        """0-based indices j with n_j = 1."""
        return tuple(j for j, m in enumerate(self.highest_root) if m == 1)

    @property
    def center_order(self) -> int:
        out = 1
        for c in self.center:
            out *= c
        return out

    def in_coroot_lattice(self, x: Sequence) -> bool:
        return Q.is_integral(x)

    def in_coweight_lattice(self, x: Sequence) -> bool:
        return Q.is_integral(Q.mat_vec(self.cartan, x))

    # --- extended diagram ---------------------------------------------------

    def ext_root(self, k: int) -> tuple[int, ...]:
        """Node k of Pi^ext: k = 0 is alpha_0 = -theta, k >= 1 is alpha_k."""
        if k == 0:
            return tuple(-v for v in self.highest_root)
        return tuple(1 if i == k - 1 else 0 for i in range(self.rank))

    def ext_coroot(self, k: int) -> tuple[int, ...]:
        return self.coroot(self.ext_root(k))

    @property
    def ext_cartan(self) -> tuple[tuple[int, ...], ...]:
        """Extended Cartan matrix <alpha_a, alpha_b^vee>, nodes 0..n."""
        nodes = range(self.rank + 1)
        return tuple(
            tuple(int(self.pair(self.ext_root(a), self.ext_coroot(b))) for b in nodes)
            for a in nodes
        )

    def cartan_determinant(self) -> int:
        return int(Q.determinant(self.cartan))


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def _enumerate_roots(cartan: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Positive roots by the root-string algorithm, ordered by height then lex."""
    n = len(cartan)
    simple = [tuple(1 if i == k else 0 for i in range(n)) for k in range(n)]
    found = set(simple)
    level = list(simple)
    positive = list(simple)
    while level:
        nxt = set()
        for beta in level:
            for i in range(n):
                # p: how far beta - k alpha_i stays a root
                p = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) in found:
                        p += 1
                    else:
                        break
                q = p - sum(beta[j] * cartan[j][i] for j in range(n))
                if q > 0:
                    up = list(beta)
                    up[i] += 1
                    nxt.add(tuple(up))
        level = sorted(nxt)
        found.update(level)
        positive.extend(level)
    positive.sort(key=lambda f: (sum(f), f))
    return positive


def build_root_system(family: str, rank: int) -> RootSystem:
    """Construct the root system of type (family, rank)."""
    family = family.upper()
    _check_rank(family, rank)
    return _build(family, rank)


@lru_cache(maxsize=None)
def _build(family: str, n: int) -> RootSystem:
    cartan = _cartan(family, n)
    d = _root_lengths(family, n)
    form = tuple(tuple(Fraction(cartan[j][k] * d[k], 2) for k in range(n)) for j in range(n))
    positive = _enumerate_roots(cartan)
    roots = tuple(positive) + tuple(tuple(-v for v in f) for f in positive)
    rs = RootSystem(
        family=family,
        rank=n,
        cartan=cartan,
        cartan_inv=Q.inverse(cartan),
        simple_lengths=d,
        form=form,
        roots=roots,
        highest_root=positive[-1],
        degrees=_degrees(family, n),
        center=_center(family, n),
    )
    rs._index.update({f: i for i, f in enumerate(roots)})
    return rs


def parse_algebra_id(text: str) -> tuple[str, int]:
    m = _ID_RE.match(text)
    if not m:
        raise UnsupportedAlgebraError(f"cannot parse algebra id {text!r} (expected e.g. 'A3', 'E6')")
    return m.group(1).upper(), int(m.group(2))


def root_system_from_id(text: str) -> RootSystem:
    """``"D5"`` -> RootSystem(D, 5)."""
    family, rank = parse_algebra_id(text)
    return build_root_system(family, rank)


def all_supported_ids() -> tuple[str, ...]:
    return SUPPORTED_IDS


# ---------------------------------------------------------------------------
# Killing form and metric duals
# ---------------------------------------------------------------------------

def killing_matrix(rs: RootSystem) -> Q.Matrix:
    """Exact Gram matrix of the Chevalley basis (H_1..H_n, E_root...)."""
    n, dim = rs.rank, rs.dim
    rows = [[Fraction(0)] * dim for _ in range(dim)]
    cf = rs.cartan_form
    for j in range(n):
        for k in range(n):
            rows[j][k] = cf[j][k]
    for i, f in enumerate(rs.roots):
        rows[n + i][n + rs.negative_index(i)] = Fraction(2) / rs.norm2(f)
    return tuple(tuple(r) for r in rows)


def metric_dual_basis(rs: RootSystem) -> list[Q.Vector]:
    """alpha-hat_i with (alpha-hat_i, alpha_j) = delta_ij, in root coordinates."""
    return list(Q.inverse(rs.form))


def center_data(rs: RootSystem) -> dict:
    """P^vee/Q^vee, its generator coweights and intermediate lattices.

    For cyclic centers the generator is the minuscule coweight listed first in
    ``generators`` and ``sublattices`` maps each divisor l of the order to the
    coweight l' * varpi^vee generating P^vee_l = Z l'varpi^vee + Q^vee.
    ``generator_orders`` maps each minuscule j to the order of varpi^vee_j in
    P^vee/Q^vee.
    For D_{2m} the three mu_2 subgroups are listed.
    """
    order = rs.center_order
    if order == 1:
        raise TrivialCenterError(f"{rs.name} has trivial center")
    gens = list(rs.minuscule)
    if rs.family == "A":
        gens = [rs.rank - 1] + [j for j in gens if j != rs.rank - 1]
    elif rs.family == "D":
        gens = [rs.rank - 1] + [j for j in gens if j != rs.rank - 1]
    data = {
        "algebra": rs.name,
        "order": order,
        "invariant_factors": list(rs.center),
        "generators": [j + 1 for j in gens],
        "generator_coweights": {j + 1: rs.fundamental_coweight(j) for j in gens},
    }
    if len(rs.center) == 1:
        g = gens[0]
        w = rs.fundamental_coweight(g)
        subs = {}
        for l in range(1, order + 1):
            if order % l == 0:
                # subgroup of order l is generated by (order/l) * varpi^vee
                subs[l] = Q.scale(order // l, w)
        data["sublattices"] = subs
        data["generator_orders"] = {j + 1: _coweight_order(rs, rs.fundamental_coweight(j))
                                     for j in gens}
    else:
        a, b = rs.rank - 2, rs.rank - 1
        wa, wb = rs.fundamental_coweight(a), rs.fundamental_coweight(b)
        data["mu2_subgroups"] = {
            "left": Q.vec_str(wa),
            "right": Q.vec_str(wb),
            "diagonal": Q.vec_str(Q.add(wa, wb)),
        }
    return data


def _coweight_order(rs: RootSystem, x: Sequence) -> int:
    k = 1
    while not rs.in_coroot_lattice(Q.scale(k, x)):
        k += 1
    return k
