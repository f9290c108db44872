"""Transition operators of a non-trivial bundle.

Given a class generator zeta = e(-varpi^vee_j), the pair (Q, Lambda) with
Lambda Q Lambda^{-1} Q^{-1} = zeta is Q = e(kappa), kappa = rho^vee / h, and
Lambda^0 a lift of the Weyl element lambda_j that maps the fundamental
alcove onto the alcove shifted by -varpi^vee_j.  This module finds lambda_j
by alcove reduction, checks it, and derives the lambda-invariant Cartan
subspace and the reduction of moduli points.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    BundleBenchError,
    LambdaVerificationError,
    LatticeMembershipError,
    NotInvariantError,
    NotMinusculeError,
)
from .lie import rational as Q
from .lie.rootsystem import RootSystem
from .lie.weyl import (
    WeylElement,
    identity_element,
    reflection,
    simple_reflection,
    weyl_group_elements,
)

LATTICE_TAGS = ("Q", "P", "P_l")


# ---------------------------------------------------------------------------
# Affine Weyl elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineWeylElement:
    """x -> linear(x) + translation, with the translation in the tagged lattice."""

    linear: WeylElement
    translation: Q.Vector
    lattice: str = "Q"

    def __post_init__(self):
        if self.lattice not in LATTICE_TAGS:
            raise BundleBenchError(f"unknown lattice tag {self.lattice!r}")

    def check(self, rs: RootSystem) -> None:
        ok = (rs.in_coroot_lattice(self.translation) if self.lattice == "Q"
              else rs.in_coweight_lattice(self.translation))
        if not ok:
            raise LatticeMembershipError(
                f"translation {Q.vec_str(self.translation)} not in the {self.lattice} lattice"
            )

    def apply(self, x: Sequence) -> Q.Vector:
        return Q.add(self.linear.apply(x), self.translation)

    def compose(self, other: "AffineWeylElement") -> "AffineWeylElement":
        """self o other."""
        return AffineWeylElement(
            self.linear.compose(other.linear),
            Q.add(self.linear.apply(other.translation), self.translation),
            _wider(self.lattice, other.lattice),
        )

    def is_identity(self) -> bool:
        return self.linear.is_identity() and not any(self.translation)


def _wider(a: str, b: str) -> str:
    return max(a, b, key=LATTICE_TAGS.index)


def affine_identity(rs: RootSystem, lattice: str = "Q") -> AffineWeylElement:
    return AffineWeylElement(identity_element(rs.rank), Q.zero_vector(rs.rank), lattice)


# ---------------------------------------------------------------------------
# kappa and alcoves
# ---------------------------------------------------------------------------

def compute_kappa(rs: RootSystem) -> Q.Vector:
    """kappa = rho^vee / h."""
    return Q.scale(Fraction(1, rs.coxeter), rs.rho_vee)


def in_alcove(rs: RootSystem, x: Sequence, strict: bool = False) -> bool:
    """<alpha_k, x> >= 0 for simple roots and <theta, x> <= 1."""
    vals = [rs.pair(f, x) for f in rs.simple_roots]
    top = rs.pair(rs.highest_root, x)
    if strict:
        return all(v > 0 for v in vals) and top < 1
    return all(v >= 0 for v in vals) and top <= 1


def _reduce_affine(rs: RootSystem, x: Q.Vector) -> tuple[Q.Vector, AffineWeylElement]:
    """Closed-alcove representative of x under W ⋉ Q^vee."""
    g = affine_identity(rs)
    simple = [simple_reflection(rs, k) for k in range(rs.rank)]
    theta = rs.highest_root
    s_theta = reflection(rs, theta)
    theta_vee = Q.vec(rs.coroot(theta))
    while True:
        for k, f in enumerate(rs.simple_roots):
            if rs.pair(f, x) < 0:
                step = AffineWeylElement(simple[k], Q.zero_vector(rs.rank))
                break
        else:
            if rs.pair(theta, x) > 1:
                step = AffineWeylElement(s_theta, theta_vee)
            else:
                return x, g
        x = step.apply(x)
        g = step.compose(g)


def _omega_generators(rs: RootSystem, lattice: str, generator: Optional[int],
                      step: int) -> list[AffineWeylElement]:
    """Alcove symmetries x -> lambda_j x + varpi^vee_j."""
    if lattice == "Q":
        return []
    if lattice == "P":
        js = [j + 1 for j in rs.minuscule]
    else:
        if generator is None:
            raise BundleBenchError("lattice tag P_l needs a generator coweight index")
        js = [generator]
    gens = []
    for j in js:
        lam = find_lambda(rs, j)
        g = AffineWeylElement(lam, rs.fundamental_coweight(j - 1), lattice)
        out = affine_identity(rs, lattice)
        for _ in range(step if lattice == "P_l" else 1):
            out = g.compose(out)
        gens.append(out)
    return gens


def alcove_reduce(rs: RootSystem, x: Sequence, lattice: str = "Q",
                  generator: Optional[int] = None,
                  step: int = 1) -> tuple[Q.Vector, AffineWeylElement]:
    """Representative of x in the fundamental domain of W ⋉ (lattice).

    ``Q``: the closed alcove.  ``P``: the alcove modulo its diagram
    symmetries; the representative is the lexicographically smallest image.
    ``P_l``: only the symmetries generated by the ``step``-th power of the
    symmetry attached to coweight ``generator``.  The returned element g
    satisfies g(x) = representative.
    """
    if lattice not in LATTICE_TAGS:
        raise BundleBenchError(f"unknown lattice tag {lattice!r}")
    rep, g = _reduce_affine(rs, Q.vec(x))
    gens = _omega_generators(rs, lattice, generator, step)
    if not gens:
        g = AffineWeylElement(g.linear, g.translation, lattice)
        g.check(rs)
        return rep, g
    # orbit of rep under the finite group generated by gens
    best = (rep, AffineWeylElement(g.linear, g.translation, lattice))
    seen = {rep: best[1]}
    frontier = [rep]
    while frontier:
        nxt = []
        for y in frontier:
            for s in gens:
                z = s.apply(y)
                if z not in seen:
                    seen[z] = s.compose(seen[y])
                    nxt.append(z)
        frontier = nxt
    rep = min(seen)
    g = seen[rep]
    g.check(rs)
    return rep, g


# ---------------------------------------------------------------------------
# lambda_j
# ---------------------------------------------------------------------------

def _check_minuscule(rs: RootSystem, j: int) -> None:
    if not 1 <= j <= rs.rank:
        raise BundleBenchError(f"coweight index {j} out of range 1..{rs.rank} for {rs.name}")
    if rs.marks[j - 1] != 1:
        raise NotMinusculeError(
            f"varpi^vee_{j} of {rs.name} has mark {rs.marks[j - 1]}; no diagram symmetry"
        )


def find_lambda(rs: RootSystem, j: Optional[int]) -> WeylElement:
    """Weyl element lambda_j with lambda_j(kappa) = kappa - varpi^vee_j.

    kappa - varpi^vee_j is interior to an alcove adjacent to the origin, so
    its reduction uses linear reflections only; lambda_j is the inverse of
    the reducing element.  ``j=None`` (class in Q^vee) gives the identity.
    """
    if j is None:
        return identity_element(rs.rank)
    _check_minuscule(rs, j)
    kappa = compute_kappa(rs)
    target = Q.sub(kappa, rs.fundamental_coweight(j - 1))
    rep, g = _reduce_affine(rs, target)
    if any(g.translation) or rep != kappa:
        raise LambdaVerificationError(
            f"reduction of kappa - varpi^vee_{j} did not land on kappa by a linear element"
        )
    lam = g.linear.inverse()
    if lam.apply(kappa) != target:
        raise LambdaVerificationError(f"lambda_{j}(kappa) != kappa - varpi^vee_{j}")
    return lam


def brute_force_lambda(rs: RootSystem, j: Optional[int]) -> WeylElement:
    """Same element found by scanning the whole Weyl group (rank <= 3)."""
    if rs.rank > 3:
        raise BundleBenchError(f"brute-force Weyl search limited to rank <= 3, got {rs.name}")
    kappa = compute_kappa(rs)
    target = kappa if j is None else Q.sub(kappa, rs.fundamental_coweight(j - 1))
    if j is not None:
        _check_minuscule(rs, j)
    hits = [w for w in weyl_group_elements(rs) if w.apply(kappa) == target]
    if len(hits) != 1:
        raise LambdaVerificationError(f"expected one Weyl element, found {len(hits)}")
    return hits[0]


def ext_permutation(rs: RootSystem, lam: WeylElement) -> tuple[int, ...]:
    """pi[k] = node of lambda^*(alpha_k) = lambda^{-1}(alpha_k) in Pi^ext."""
    nodes = {rs.ext_root(k): k for k in range(rs.rank + 1)}
    inv = lam.inverse()
    out = []
    for k in range(rs.rank + 1):
        image = inv.apply_root(rs.ext_root(k))
        if image not in nodes:
            raise LambdaVerificationError(
                f"lambda^* maps node {k} to {list(image)}, outside the extended diagram"
            )
        out.append(nodes[image])
    return tuple(out)


def ext_orbits(perm: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    """Cycles of the node permutation, the one through node 0 first."""
    seen = set()
    orbits = []
    for start in range(len(perm)):
        if start in seen:
            continue
        cyc = []
        k = start
        while k not in seen:
            seen.add(k)
            cyc.append(k)
            k = perm[k]
        orbits.append(tuple(sorted(cyc)))
    return tuple(orbits)


# ---------------------------------------------------------------------------
# TransitionData
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TransitionData:
    rs: RootSystem
    j: Optional[int]
    coweight: Q.Vector
    kappa: Q.Vector
    lam: WeylElement
    order: int
    invariant_basis: tuple[Q.Vector, ...]
    node_permutation: tuple[int, ...]
    orbits: tuple[tuple[int, ...], ...]
    notes: list = field(default_factory=list, compare=False)

    @property
    def l(self) -> int:
        return self.order

    @property
    def base_orbit(self) -> tuple[int, ...]:
        """O_0, the orbit of the extended node."""
        return self.orbits[0]

    @property
    def pi1_orbits(self) -> tuple[tuple[int, ...], ...]:
        return self.orbits[1:]

    def lam_power(self, m: int) -> WeylElement:
        return self.lam.power(m % self.order)

    def to_dict(self) -> dict:
        return {
            "algebra": self.rs.name,
            "j": self.j,
            "coweight": Q.vec_str(self.coweight),
            "kappa": Q.vec_str(self.kappa),
            "lambda_coroot_matrix": [list(r) for r in self.lam.coroot_matrix],
            "lambda_root_matrix": [list(r) for r in self.lam.root_matrix],
            "root_permutation": list(self.lam.root_permutation(self.rs)),
            "order": self.order,
            "node_permutation": list(self.node_permutation),
            "orbits": [list(o) for o in self.orbits],
            "invariant_basis": [Q.vec_str(v) for v in self.invariant_basis],
        }


def invariant_cartan(rs: RootSystem, lam: WeylElement) -> tuple[Q.Vector, ...]:
    """Rational basis of ker(lambda - 1) on the Cartan subalgebra."""
    n = rs.rank
    m = [[lam.coroot_matrix[i][k] - (1 if i == k else 0) for k in range(n)] for i in range(n)]
    return tuple(Q.null_space(m))


def transition_data(rs: RootSystem, j: Optional[int]) -> TransitionData:
    """kappa, lambda_j, its order, node permutation and H~_0, all verified."""
    kappa = compute_kappa(rs)
    if not in_alcove(rs, kappa, strict=True):
        raise LambdaVerificationError("kappa is not interior to the fundamental alcove")
    lam = find_lambda(rs, j)
    coweight = Q.zero_vector(rs.rank) if j is None else rs.fundamental_coweight(j - 1)
    perm = ext_permutation(rs, lam)
    if j is not None and perm[j] != 0:
        raise LambdaVerificationError(f"lambda^*(alpha_{j}) is not alpha_0")
    _verify_shift(rs, lam, kappa, j)
    _verify_adjacency(rs, perm)
    order = lam.order()
    return TransitionData(
        rs=rs,
        j=j,
        coweight=coweight,
        kappa=kappa,
        lam=lam,
        order=order,
        invariant_basis=invariant_cartan(rs, lam),
        node_permutation=perm,
        orbits=ext_orbits(perm),
    )


def _verify_shift(rs: RootSystem, lam: WeylElement, kappa: Q.Vector, j: Optional[int]) -> None:
    """<kappa, lambda^*(alpha_k)> = <kappa, alpha_k> - delta_jk for simple roots."""
    inv = lam.inverse()
    for k, f in enumerate(rs.simple_roots, start=1):
        want = rs.pair(f, kappa) - (1 if k == j else 0)
        if rs.pair(inv.apply_root(f), kappa) != want:
            raise LambdaVerificationError(f"shift relation fails at alpha_{k}")


def kappa_shift(td: TransitionData) -> tuple[Q.Vector, Q.Vector]:
    """(lambda(kappa) - kappa, -varpi^vee_j); equal for valid transition data."""
    shift = Q.sub(td.lam.apply(td.kappa), td.kappa)
    return shift, Q.scale(-1, td.coweight)


def _verify_adjacency(rs: RootSystem, perm: Sequence[int]) -> None:
    ext = rs.ext_cartan
    size = len(perm)
    for a in range(size):
        for b in range(size):
            if ext[perm[a]][perm[b]] != ext[a][b]:
                raise LambdaVerificationError(
                    f"node permutation breaks the extended Cartan matrix at ({a}, {b})"
                )


def spinor_pair(rs: RootSystem) -> dict:
    """Both spinor generators of D_{2m}: independent lambdas, one shared Q."""
    if rs.family != "D" or rs.rank % 2:
        raise BundleBenchError(f"{rs.name} has no mu_2 x mu_2 center")
    left = transition_data(rs, rs.rank - 1)
    right = transition_data(rs, rs.rank)
    return {
        "left": left,
        "right": right,
        "shared_q": left.kappa == right.kappa,
        "distinct_lambda": left.lam != right.lam,
    }


# ---------------------------------------------------------------------------
# Invariant-subspace coordinates
# ---------------------------------------------------------------------------

def orbit_mark(rs: RootSystem, orbit: Sequence[int]) -> int:
    """N_O = sum of the marks n_k over the orbit (n_0 = 1)."""
    return sum(1 if k == 0 else rs.marks[k - 1] for k in orbit)


def orbit_basis(td: TransitionData) -> dict[tuple[int, ...], Q.Vector]:
    """b_O in H~_0 for every orbit O != O_0.

    <alpha_k, b_O> = 1 on O, -N_O / l on the simple nodes of O_0 and 0
    elsewhere, so that the relation sum_k n_k <alpha_k, x> = 0 holds.
    """
    rs = td.rs
    out = {}
    for orb in td.pi1_orbits:
        ratio = Fraction(orbit_mark(rs, orb), td.order)
        values = []
        for k in range(1, rs.rank + 1):
            if k in orb:
                values.append(Fraction(1))
            elif k in td.base_orbit:
                values.append(-ratio)
            else:
                values.append(Fraction(0))
        out[orb] = Q.mat_vec(rs.cartan_inv, values)
    return out


def averaged_coroots(td: TransitionData) -> dict[tuple[int, ...], Q.Vector]:
    """s_O = sum of alpha_k^vee over each orbit of Pi_1."""
    n = td.rs.rank
    out = {}
    for orb in td.pi1_orbits:
        v = Q.zero_vector(n)
        for k in orb:
            v = Q.add(v, Q.unit_vector(n, k - 1))
        out[orb] = v
    return out


def orbit_average(td: TransitionData, x: Sequence) -> Q.Vector:
    """(1/l) sum_m lambda^m(x): projection onto H~_0."""
    total = Q.zero_vector(td.rs.rank)
    for m in range(td.order):
        total = Q.add(total, td.lam_power(m).apply(x))
    return Q.scale(Fraction(1, td.order), total)


def is_invariant(td: TransitionData, x: Sequence) -> bool:
    return td.lam.apply(x) == Q.vec(x)


# ---------------------------------------------------------------------------
# Reduction of u~ = y + tau x in H~_0
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReducedRootData:
    """Root data of the invariant subalgebra, as functionals on H~_0.

    Roots are in the root coordinates of the ambient algebra (possibly with
    rational entries), coroots in its coroot coordinates.
    """

    simple: tuple[Q.Vector, ...]
    simple_coroots: tuple[Q.Vector, ...]
    positive: tuple[Q.Vector, ...]
    positive_coroots: tuple[Q.Vector, ...]


def _reflect(rs: RootSystem, root, coroot, x):
    return Q.sub(x, Q.scale(rs.pair(root, x), coroot))


def bs_reduce(td: TransitionData, sub: ReducedRootData, x: Sequence, y: Sequence,
              flavor: str = "sc") -> tuple[Q.Vector, Q.Vector]:
    """Representative of u~ = y + tau x under W~ ⋉ (tau Q~^vee + L).

    x is brought into the closed alcove of the invariant subalgebra by
    simple reflections and affine reflections in the hyperplanes
    <r, x> = 1; the same linear parts act on y, which is then reduced modulo
    L = Q~^vee (``sc``) or P~^vee (``ad``).  Directions orthogonal to every
    coroot (the centre of g~_0) are left unreduced.
    """
    rs = td.rs
    if flavor not in ("sc", "ad"):
        raise BundleBenchError(f"unknown reduction flavor {flavor!r}")
    x, y = Q.vec(x), Q.vec(y)
    for v in (x, y):
        if not is_invariant(td, v):
            raise NotInvariantError(f"{Q.vec_str(v)} is not fixed by lambda")
    while True:
        moved = False
        for r, c in zip(sub.simple, sub.simple_coroots):
            if rs.pair(r, x) < 0:
                x, y = _reflect(rs, r, c, x), _reflect(rs, r, c, y)
                moved = True
                break
        if moved:
            continue
        if not sub.positive:
            break
        top, r, c = max((rs.pair(r, x), r, c) for r, c in zip(sub.positive, sub.positive_coroots))
        if top <= 1:
            break
        x = Q.add(_reflect(rs, r, c, x), c)
        y = _reflect(rs, r, c, y)
    return x, _reduce_mod_lattice(rs, sub, y, flavor)


def _reduce_mod_lattice(rs: RootSystem, sub: ReducedRootData, y: Q.Vector,
                        flavor: str) -> Q.Vector:
    k = len(sub.simple)
    if k == 0:
        return y
    if flavor == "sc":
        cf = rs.cartan_form
        gram = [[Q.dot(Q.vec_mat(a, cf), b) for b in sub.simple_coroots] for a in sub.simple_coroots]
        rhs = [Q.dot(Q.vec_mat(a, cf), y) for a in sub.simple_coroots]
        coeff = Q.solve(gram, rhs)
        for c, cv in zip(coeff, sub.simple_coroots):
            y = Q.sub(y, Q.scale(c.numerator // c.denominator, cv))
        return y
    sub_cartan = [[rs.pair(r, c) for c in sub.simple_coroots] for r in sub.simple]
    inv = Q.inverse(sub_cartan)
    for i, r in enumerate(sub.simple):
        val = rs.pair(r, y)
        shift = val.numerator // val.denominator
        if shift:
            # coweight dual to r_i inside the span of the coroots
            w = Q.zero_vector(rs.rank)
            for m, cv in enumerate(sub.simple_coroots):
                w = Q.add(w, Q.scale(inv[m][i], cv))
            y = Q.sub(y, Q.scale(shift, w))
    return y
