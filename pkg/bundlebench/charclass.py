"""Characteristic classes, conformal-group degrees and Hecke modifications.

A coweight gamma in P^vee defines the class of gamma mod Q^vee.  For the
cyclic centers the class is stored as the exponent m of
gamma = m varpi^vee_g (mod Q^vee), varpi^vee_g the generator listed by
:func:`center_data`; for D_{2k} it is the pair of exponents along the two
spinor coweights.  The conformal-group degree of a vector bundle E(V) is

    deg E(V) = dim V (<varpi^vee, nu> + k),   k in Z,

and a Hecke modification by a dominant gamma scales the root coefficients
of L(z) by z^{<gamma, alpha>} while leaving the Cartan part alone.
"""

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (
    ConfigError,
    LatticeMembershipError,
    NonDominantError,
    NotMinusculeError,
    UnsupportedRepresentationError,
    WeightExpansionError,
)
from .lie import rational as Q
from .lie.rootsystem import RootSystem, center_data, root_system_from_id


# ---------------------------------------------------------------------------
# Classes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CharClass:
    """Class of a coweight in P^vee / Q^vee.

    ``exponents[i]`` is taken modulo ``orders[i]``; the represented root of
    unity along generator i is e(exponents[i] / orders[i]).
    """

    algebra: str
    coweight: Q.Vector
    generators: tuple[int, ...]
    exponents: tuple[int, ...]
    orders: tuple[int, ...]

    @property
    def phases(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(m, o) for m, o in zip(self.exponents, self.orders))

    @property
    def trivial(self) -> bool:
        return not any(self.exponents)

    @property
    def order(self) -> int:
        out = 1
        for m, o in zip(self.exponents, self.orders):
            out = math.lcm(out, o // math.gcd(m, o))
        return out

    def _check(self, other: "CharClass") -> None:
        if other.algebra != self.algebra:
            raise LatticeMembershipError(f"cannot combine classes of {self.algebra} and {other.algebra}")

    def __add__(self, other: "CharClass") -> "CharClass":
        self._check(other)
        return CharClass(
            self.algebra,
            Q.add(self.coweight, other.coweight),
            self.generators,
            tuple((a + b) % o for a, b, o in zip(self.exponents, other.exponents, self.orders)),
            self.orders,
        )

    def inverse(self) -> "CharClass":
        return CharClass(
            self.algebra,
            Q.scale(-1, self.coweight),
            self.generators,
            tuple((-m) % o for m, o in zip(self.exponents, self.orders)),
            self.orders,
        )

    def to_dict(self) -> dict:
        return {
            "algebra": self.algebra,
            "coweight": Q.vec_str(self.coweight),
            "generators": [f"w{g}" for g in self.generators],
            "exponents": list(self.exponents),
            "group": "x".join(f"mu{o}" for o in self.orders),
            "phases": [Q.frac_str(p) for p in self.phases],
            "order": self.order,
            "trivial": self.trivial,
        }


def class_generators(rs: RootSystem) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(1-based generator coweights, their orders) spanning P^vee / Q^vee."""
    if len(rs.center) == 1:
        return (center_data(rs)["generators"][0],), (rs.center[0],)
    return (rs.rank - 1, rs.rank), (2, 2)


def _require_coweight(rs: RootSystem, gamma: Sequence) -> Q.Vector:
    gamma = Q.vec(gamma)
    if len(gamma) != rs.rank:
        raise LatticeMembershipError(f"coweight {Q.vec_str(gamma)} has the wrong length for {rs.name}")
    if not rs.in_coweight_lattice(gamma):
        raise LatticeMembershipError(f"{Q.vec_str(gamma)} is not in the coweight lattice of {rs.name}")
    return gamma


def characteristic_class(rs: RootSystem, gamma: Sequence) -> CharClass:
    """Class of gamma in P^vee / Q^vee; raises LatticeMembershipError off P^vee."""
    gamma = _require_coweight(rs, gamma)
    gens, orders = class_generators(rs)
    coweights = [rs.fundamental_coweight(g - 1) for g in gens]
    ranges = [range(o) for o in orders]
    for exps in _product(ranges):
        rest = gamma
        for m, w in zip(exps, coweights):
            rest = Q.sub(rest, Q.scale(m, w))
        if rs.in_coroot_lattice(rest):
            return CharClass(rs.name, gamma, gens, tuple(exps), orders)
    raise LatticeMembershipError(f"{Q.vec_str(gamma)} is not reached by the center generators")


def _product(ranges):
    if not ranges:
        yield ()
        return
    for head in ranges[0]:
        for tail in _product(ranges[1:]):
            yield (head,) + tail


def class_order(rs: RootSystem, gamma: Sequence) -> int:
    return characteristic_class(rs, gamma).order


_TERM = re.compile(r"\s*([+-]?)\s*(\d+(?:/\d+)?)?\s*\*?\s*([wa])(\d+)\s*")


def parse_coweight(rs: RootSystem, text: str) -> Q.Vector:
    """Coweight from ``w3+w3``, ``2w1-a2`` (w = fundamental coweight, a = simple coroot)
    or an explicit coordinate list ``1/2,0,1/2``."""
    text = text.strip()
    if "," in text or re.fullmatch(r"[-+]?\d+(/\d+)?", text):
        try:
            vec = Q.vec(Q.parse_frac(t) for t in text.split(","))
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"malformed coweight {text!r}") from None
        if len(vec) != rs.rank:
            raise ConfigError(f"coweight {text!r} needs {rs.rank} coordinates for {rs.name}")
        return vec
    pos = 0
    total = Q.zero_vector(rs.rank)
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or (pos and not m.group(1)):
            raise ConfigError(f"malformed coweight expression {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        k = int(m.group(4))
        if not 1 <= k <= rs.rank:
            raise ConfigError(f"index {k} out of range for {rs.name}")
        if m.group(3) == "w":
            vec = rs.fundamental_coweight(k - 1)
        else:
            vec = Q.unit_vector(rs.rank, k - 1)
        total = Q.add(total, Q.scale(sign * coef, vec))
        pos = m.end()
    return total


# ---------------------------------------------------------------------------
# Conformal-group degrees
# ---------------------------------------------------------------------------

# group, weight label, dim V, printed degree
_DEGREE_TABLE = (
    ("SL", "SL(n)", "varpi_1", "n", "-1+kn", ("A2", "A3", "A4", "A5")),
    ("B", "Spin(2n+1)", "varpi_n", "2^n", "2^(n-1)(1+2k)", ("B2", "B3", "B4")),
    ("C", "Sp(n)", "varpi_1", "2n", "n(1+2k)", ("C2", "C3", "C4")),
    ("D_even", "Spin(4n)", "varpi_2n", "2^(2n-1)", "2^(2n-2)(1+2k)", ("D4",)),
    ("D_odd", "Spin(4n+2)", "varpi_(2n+1)", "2^(2n)", "2^(2n-2)(1+4k)", ("D5",)),
    ("E6", "E6", "varpi_1", "27", "9(1+3k)", ("E6",)),
    ("E7", "E7", "varpi_7", "56", "28(1+2k)", ("E7",)),
)


def _row_key(rs: RootSystem) -> str:
    if rs.family == "A":
        return "SL"
    if rs.family == "D":
        return "D_even" if rs.rank % 2 == 0 else "D_odd"
    if rs.family == "E":
        return rs.name
    return rs.family


def _row_geometry(rs: RootSystem) -> tuple[int, int, Fraction, list[int]]:
    """(0-based node of nu, dim V, printed k = 0 degree, generator candidates)."""
    n = rs.rank
    key = _row_key(rs)
    if key == "SL":
        cands = [j for j in range(n) if math.gcd(j + 1, n + 1) == 1]
        return 0, n + 1, Fraction(-1), cands
    if key == "B":
        return n - 1, 2 ** n, Fraction(2 ** (n - 1)), [0]
    if key == "C":
        return 0, 2 * n, Fraction(n), [n - 1]
    if key == "D_even":
        return n - 1, 2 ** (n - 1), Fraction(2 ** (n - 2)), [n - 1, n - 2]
    if key == "D_odd":
        return n - 1, 2 ** (n - 1), Fraction(2 ** (n - 3)), [n - 1, n - 2]
    if key == "E6":
        return 0, 27, Fraction(9), [0, 5]
    return 6, 56, Fraction(28), [6]


def tabulated_representation(rs: RootSystem) -> tuple[int, int]:
    """(0-based node nu, dim V) of the representation tabulated for rs."""
    node, dim, _, _ = _row_geometry(rs)
    return node, dim


def least_residue(x: Fraction, m: int) -> Fraction:
    """Representative of x mod m of least absolute value (ties go positive)."""
    r = x - m * math.floor(x / m)
    return r - m if r > Fraction(m, 2) else r


@dataclass
class DegreeRecord:
    group: str
    algebra: str
    nu: str
    dim: int
    generator: int
    pairing: Fraction
    k: int
    degree: Fraction
    residue: Fraction
    printed: str = ""
    printed_residue: Optional[Fraction] = None
    notes: list = field(default_factory=list)

    @property
    def matches(self) -> Optional[bool]:
        if self.printed_residue is None:
            return None
        return (self.degree - self.printed_residue) % self.dim == 0

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "algebra": self.algebra,
            "nu": self.nu,
            "dim_V": self.dim,
            "generator": f"w{self.generator + 1}",
            "pairing": Q.frac_str(self.pairing),
            "k": self.k,
            "degree": Q.frac_str(self.degree),
            "residue": Q.frac_str(self.residue),
            "printed": self.printed,
            "printed_residue": None if self.printed_residue is None else Q.frac_str(self.printed_residue),
            "matches": self.matches,
            "notes": self.notes,
        }


def conformal_degree(rs: RootSystem, nu: int, generator: int, k: int = 0) -> DegreeRecord:
    """Degree dim V (<varpi^vee_generator, varpi_nu> + k); both indices 0-based."""
    node, dim, printed, _ = _row_geometry(rs)
    if nu != node:
        raise UnsupportedRepresentationError(
            f"{rs.name}: only the fundamental representation varpi_{node + 1} is tabulated"
        )
    if generator not in rs.minuscule:
        raise NotMinusculeError(f"varpi^vee_{generator + 1} of {rs.name} is not minuscule")
    key = _row_key(rs)
    row = next(r for r in _DEGREE_TABLE if r[0] == key)
    pairing = rs.pair(rs.fundamental_weight(nu), rs.fundamental_coweight(generator))
    degree = dim * (pairing + k)
    return DegreeRecord(
        group=row[1],
        algebra=rs.name,
        nu=f"varpi_{nu + 1}",
        dim=dim,
        generator=generator,
        pairing=pairing,
        k=k,
        degree=degree,
        residue=least_residue(degree, dim),
        printed=row[4],
        printed_residue=printed,
    )


def degree_row(rs: RootSystem) -> DegreeRecord:
    """Degree row of rs with the first generator reproducing the printed residue.

    Generators of a cyclic center are determined up to inversion, so the
    candidates are tried in order and the choice is recorded.
    """
    node, _, _, cands = _row_geometry(rs)
    first = None
    for g in cands:
        rec = conformal_degree(rs, node, g)
        if first is None:
            first = rec
        if rec.matches:
            if g != cands[0]:
                rec.notes.append(f"generator w{g + 1} used; w{cands[0] + 1} misses the printed residue")
            return rec
    first.notes.append("no generator reproduces the printed residue")
    return first


def degree_table(algebras: Optional[Sequence[str]] = None) -> list[DegreeRecord]:
    """Degree rows for the given algebra ids, or every sample rank of the seven groups."""
    if algebras is None:
        algebras = [a for row in _DEGREE_TABLE for a in row[5]]
    return [degree_row(root_system_from_id(a)) for a in algebras]


def degree_table_layout() -> list[dict]:
    """The seven printed rows as embedded data."""
    return [{"group": g, "nu": nu, "V": v, "degree": d, "samples": list(s)}
            for _, g, nu, v, d, s in _DEGREE_TABLE]


# ---------------------------------------------------------------------------
# Hecke modification
# ---------------------------------------------------------------------------

def weight_diagram(rs: RootSystem, node: int, limit: int = 5000) -> tuple[Q.Vector, list[tuple[int, ...]]]:
    """Support of the irreducible representation varpi_node.

    Returns the highest weight (root coordinates) and the expansions c with
    weight = varpi - sum c_m alpha_m, closed under lowering along simple strings.
    """
    n = rs.rank
    top = rs.fundamental_weight(node)
    seen = {top}
    stack = [top]
    while stack:
        mu = stack.pop()
        for i in range(n):
            steps = rs.pair(mu, Q.unit_vector(n, i))
            for t in range(1, int(steps) + 1):
                nxt = Q.sub(mu, Q.scale(t, Q.unit_vector(n, i)))
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        if len(seen) > limit:
            raise UnsupportedRepresentationError(f"weight diagram of varpi_{node + 1} exceeds {limit}")
    expansions = sorted(Q.as_ints(Q.sub(top, mu)) for mu in seen)
    return top, expansions


def adjoint_weights(rs: RootSystem) -> tuple[Q.Vector, list[tuple[int, ...]]]:
    """Highest root with the expansions of every root and of the zero weight."""
    theta = Q.vec(rs.highest_root)
    expansions = [tuple(a - b for a, b in zip(rs.highest_root, f)) for f in rs.roots]
    expansions.append(tuple(rs.highest_root))
    return theta, expansions


def hecke_weight_exponents(rs: RootSystem, gamma: Sequence, top: Sequence,
                           expansions: Sequence[Sequence[int]]) -> list[Fraction]:
    """<gamma, nu_j> for nu_j = top - sum c^m_j alpha_m."""
    gamma = _require_coweight(rs, gamma)
    top = Q.vec(top)
    out = []
    for c in expansions:
        if len(c) != rs.rank:
            raise WeightExpansionError(f"expansion {list(c)} has the wrong length for {rs.name}")
        try:
            ints = Q.as_ints(c)
        except ValueError:
            raise WeightExpansionError(f"expansion {list(c)} is not integral") from None
        if any(v < 0 for v in ints):
            raise WeightExpansionError(f"expansion {list(ints)} has a negative coefficient")
        mu = Q.sub(top, ints)
        out.append(rs.pair(mu, gamma))
    return out


@dataclass
class HeckeScaling:
    gamma: Q.Vector
    exponents: dict
    laurent: dict
    violations: list
    old_class: Optional[CharClass] = None
    new_class: Optional[CharClass] = None
    coefficients: Optional[Callable] = field(default=None, repr=False)

    @property
    def admissible(self) -> bool:
        return not self.violations

    def scaled(self, z: complex) -> np.ndarray:
        """Chevalley coefficients of the modified L(z)."""
        out = np.array(self.coefficients(z), dtype=complex)
        n = len(self.gamma)
        for i, k in self.exponents.items():
            out[n + i] *= z ** k
        return out

    def to_dict(self) -> dict:
        return {
            "gamma": Q.vec_str(self.gamma),
            "exponents": {str(i): k for i, k in self.exponents.items()},
            "admissible": self.admissible,
            "violations": self.violations,
            "old_class": self.old_class.to_dict() if self.old_class else None,
            "new_class": self.new_class.to_dict() if self.new_class else None,
        }


def laurent_coefficients(coefficients: Callable, orders: Sequence[int], radius: float = 0.05,
                         nodes: int = 128) -> dict[int, np.ndarray]:
    """a_m = (1/2 pi i) contour integral of f(z) z^{-m-1} dz on |z| = radius."""
    theta = 2 * np.pi * np.arange(nodes) / nodes
    zs = radius * np.exp(1j * theta)
    values = np.array([coefficients(complex(z)) for z in zs])
    return {m: np.mean(values * (zs ** (-m))[:, None], axis=0) for m in orders}


def hecke_lax_scaling(rs: RootSystem, coefficients: Callable, gamma: Sequence,
                      old_coweight: Optional[Sequence] = None, tol: float = 1e-8,
                      radius: float = 0.05, nodes: int = 128) -> HeckeScaling:
    """Scale L_alpha by z^{<gamma, alpha>} and test that the pole stays simple.

    ``coefficients(z)`` returns L(z) in Chevalley coordinates.  A root with
    k = <gamma, alpha> < 0 needs its Laurent coefficients of orders
    -1 .. -k-2 to vanish.
    """
    gamma = _require_coweight(rs, gamma)
    n = rs.rank
    for j in range(n):
        if rs.pair(Q.unit_vector(n, j), gamma) < 0:
            raise NonDominantError(f"{Q.vec_str(gamma)} pairs negatively with alpha_{j + 1}")
    exponents = {i: int(rs.pair(f, gamma)) for i, f in enumerate(rs.roots)}
    depth = max([-k for k in exponents.values()] + [0])
    orders = list(range(-1, depth - 1))
    laurent = laurent_coefficients(coefficients, orders, radius, nodes) if orders else {}
    violations = []
    if laurent:
        scale = max(1.0, float(np.max(np.abs(laurent[-1]))))
        for i, k in exponents.items():
            for m in range(-1, -k - 1):
                size = float(abs(laurent[m][n + i]))
                if size > tol * scale:
                    violations.append({"root": Q.vec_str(rs.roots[i]), "order": m, "size": size})
    old = new = None
    if old_coweight is not None:
        old = characteristic_class(rs, old_coweight)
        new = characteristic_class(rs, Q.add(Q.vec(old_coweight), gamma))
    return HeckeScaling(gamma, exponents, laurent, violations, old, new, coefficients)
