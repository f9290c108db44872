"""Lifts of lambda to automorphisms of the Lie algebra.

A lift P acts by P|_H = lambda and P(E_gamma) = e(phi_gamma) E_{lambda gamma}.
Two families of candidates are produced:

* the sign gauge: rescale E_gamma -> eps_gamma E_gamma (eps_{-gamma} =
  eps_gamma) until N_{lambda a, lambda b} = N_{a, b}; then P permutes the
  rescaled generators.  The eps are solved for over GF(2); an inconsistent
  system yields a witness pair.
* torus gauges Ad_{e(y)} o sigma, where sigma fixes E_{+-alpha_k} up to
  E_{lambda alpha_k} and y in H~_0 is chosen so that P^l = 1.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional

import numpy as np

from ..errors import SignGaugeError
from ..lie import rational as Q
from ..lie.chevalley import StructureConstants
from ..lie.rootsystem import RootSystem
from ..transition import TransitionData, orbit_mark


@dataclass(frozen=True)
class Lift:
    rs: RootSystem
    order: int
    perm: tuple[int, ...]
    phases: tuple[Fraction, ...]
    lam_matrix: tuple[tuple[int, ...], ...]
    label: str
    signs: Optional[tuple[int, ...]] = None
    torus: Optional[Q.Vector] = None
    notes: list = field(default_factory=list, compare=False)

    def image(self, i: int, d: int = 1) -> int:
        for _ in range(d % self.order if self.order else d):
            i = self.perm[i]
        return i

    def cumulative(self, i: int, d: int) -> Fraction:
        """Phi_d: P^d(E_i) = e(Phi_d) E_{lambda^d i}."""
        total = Fraction(0)
        for _ in range(d):
            total += self.phases[i]
            i = self.perm[i]
        return Q.frac_mod1(total)

    def matrix(self) -> np.ndarray:
        """P on Chevalley coefficient columns."""
        rs = self.rs
        n, dim = rs.rank, rs.dim
        out = np.zeros((dim, dim), dtype=complex)
        out[:n, :n] = np.array(self.lam_matrix, dtype=float)
        for i, ph in enumerate(self.phases):
            out[n + self.perm[i], n + i] = np.exp(2j * np.pi * float(ph))
        return out

    def automorphism_defect(self, sc: StructureConstants) -> int:
        """Pairs where P fails to respect [E_a, E_b] = N_ab E_{a+b} or [E_a, E_-a] = H_a."""
        rs = self.rs
        bad = 0
        for (i, j), v in sc.table.items():
            k = rs.index(tuple(a + b for a, b in zip(rs.roots[i], rs.roots[j])))
            w = sc.n(self.perm[i], self.perm[j])
            flip = Fraction(0) if w == v else Fraction(1, 2)
            if Q.frac_mod1(self.phases[i] + self.phases[j] - self.phases[k] + flip) != 0:
                bad += 1
        for i in range(len(rs.roots)):
            if Q.frac_mod1(self.phases[i] + self.phases[rs.negative_index(i)]) != 0:
                bad += 1
        return bad

    def order_defect(self) -> int:
        """Roots with P^l(E_gamma) != E_gamma."""
        return sum(1 for i in range(len(self.phases)) if self.cumulative(i, self.order) != 0)

    def to_dict(self) -> dict:
        out = {"label": self.label, "phases": Q.vec_str(self.phases)}
        if self.signs is not None:
            out["signs"] = list(self.signs)
        if self.torus is not None:
            out["torus"] = Q.vec_str(self.torus)
        return out


def _lam_rows(td: TransitionData) -> tuple[tuple[int, ...], ...]:
    return td.lam.coroot_matrix


# ---------------------------------------------------------------------------
# sigma: sign propagation from the simple generators
# ---------------------------------------------------------------------------

def sigma_signs(rs: RootSystem, sc: StructureConstants, perm: tuple[int, ...]) -> tuple[int, ...]:
    """c_gamma with sigma(E_gamma) = c_gamma E_{lambda gamma}, c = 1 on +-simple roots."""
    c: dict[int, int] = {}
    npos = rs.n_positive
    simple = [rs.index(f) for f in rs.simple_roots]
    for sign in (1, -1):
        for k in simple:
            c[k if sign > 0 else rs.negative_index(k)] = 1
        for p in range(npos):
            g = p if sign > 0 else rs.negative_index(p)
            if g in c:
                continue
            gamma = rs.roots[g]
            for k in simple:
                a = k if sign > 0 else rs.negative_index(k)
                rest = tuple(x - y for x, y in zip(gamma, rs.roots[a]))
                if rs.is_root(rest):
                    b = rs.index(rest)
                    num = sc.n(perm[a], perm[b])
                    den = sc.n(a, b)
                    c[g] = c[a] * c[b] * (1 if num == den else -1)
                    break
    return tuple(c[i] for i in range(len(rs.roots)))


def sigma_power_phases(perm: tuple[int, ...], c: tuple[int, ...], order: int) -> tuple[Fraction, ...]:
    """theta_gamma in {0, 1/2} with sigma^l(E_gamma) = e(theta_gamma) E_gamma."""
    out = []
    for i in range(len(c)):
        s, k = 1, i
        for _ in range(order):
            s *= c[k]
            k = perm[k]
        out.append(Fraction(0) if s == 1 else Fraction(1, 2))
    return tuple(out)


def _phase(sign: int) -> Fraction:
    return Fraction(0) if sign == 1 else Fraction(1, 2)


# ---------------------------------------------------------------------------
# Sign gauge over GF(2)
# ---------------------------------------------------------------------------

def sign_gauge(rs: RootSystem, sc: StructureConstants, perm: tuple[int, ...]) -> tuple[int, ...]:
    """eps_gamma = +-1 with eps_{-gamma} = eps_gamma making N lambda-invariant.

    Raises SignGaugeError carrying the root pair whose equation became 0 = 1.
    """
    npos = rs.n_positive

    def var(i: int) -> int:
        return i if i < npos else rs.negative_index(i)

    pivots: dict[int, tuple[int, int, tuple]] = {}
    for (i, j), v in sc.table.items():
        k = rs.index(tuple(a + b for a, b in zip(rs.roots[i], rs.roots[j])))
        mask = 0
        for r in (i, j, k, perm[i], perm[j], perm[k]):
            mask ^= 1 << var(r)
        rhs = 0 if sc.n(perm[i], perm[j]) == v else 1
        origin = (rs.roots[i], rs.roots[j])
        while mask:
            b = mask.bit_length() - 1
            if b not in pivots:
                pivots[b] = (mask, rhs, origin)
                break
            pm, pr, _ = pivots[b]
            mask ^= pm
            rhs ^= pr
        else:
            if rhs:
                raise SignGaugeError(origin)
    x = [0] * npos
    for b in sorted(pivots):
        mask, rhs, _ = pivots[b]
        val = rhs
        rest = mask & ~(1 << b)
        while rest:
            k = rest.bit_length() - 1
            val ^= x[k]
            rest &= ~(1 << k)
        x[b] = val
    return tuple(-1 if x[var(i)] else 1 for i in range(len(rs.roots)))


def sign_gauge_lift(td: TransitionData, sc: StructureConstants) -> Lift:
    rs = td.rs
    perm = td.lam.root_permutation(rs)
    eps = sign_gauge(rs, sc, perm)
    phases = tuple(_phase(eps[i] * eps[perm[i]]) for i in range(len(rs.roots)))
    return Lift(rs, td.order, perm, phases, _lam_rows(td), "sign", signs=eps)


def gauged_constants(sc: StructureConstants, lift: Lift) -> StructureConstants:
    """Structure constants in the rescaled basis of a sign-gauge lift."""
    if lift.signs is None:
        raise SignGaugeError((), "lift carries no sign gauge")
    return sc.gauged(lift.signs)


def sign_gauge_fix(td: TransitionData, sc: StructureConstants) -> tuple[StructureConstants, Lift]:
    """Rescaled constants with N_{lambda a, lambda b} = N_{a, b}, and the lift permuting them.

    The lift carries the eps assignment in ``signs``.  Raises SignGaugeError
    with a witness pair when no +-1 rescaling exists.
    """
    lift = sign_gauge_lift(td, sc)
    return gauged_constants(sc, lift), lift


# ---------------------------------------------------------------------------
# Torus gauges
# ---------------------------------------------------------------------------

def torus_lifts(td: TransitionData, sc: StructureConstants) -> list[Lift]:
    """All Ad_{e(y)} o sigma of order l with y = w/l in H~_0.

    l <alpha_k, y> = w_O on the node orbit O of k, with w_O = -theta_O + m_O
    for O != O_0 and w_{O_0} fixed by sum_O N_O w_O = 0.
    """
    rs = td.rs
    l = td.order
    perm = td.lam.root_permutation(rs)
    c = sigma_signs(rs, sc, perm)
    theta = sigma_power_phases(perm, c, l)
    node_theta = {k: theta[rs.index(rs.ext_root(k))] for k in range(rs.rank + 1)}
    free = td.pi1_orbits
    out = []
    for ms in product(range(l), repeat=len(free)):
        w = {}
        ok = True
        for orb, m in zip(free, ms):
            w[orb] = -node_theta[orb[0]] + m
            if any(Q.frac_mod1(node_theta[k] + w[orb]) for k in orb):
                ok = False
        w0 = -Fraction(1, l) * sum(orbit_mark(rs, orb) * w[orb] for orb in free)
        if any(Q.frac_mod1(node_theta[k] + w0) for k in td.base_orbit):
            ok = False
        if not ok:
            continue
        w[td.base_orbit] = w0
        values = []
        for k in range(1, rs.rank + 1):
            orb = next(o for o in td.orbits if k in o)
            values.append(w[orb] / l)
        y = Q.mat_vec(rs.cartan_inv, values)
        if td.lam.apply(y) != y:
            continue
        phases = tuple(
            Q.frac_mod1(_phase(c[i]) + rs.pair(rs.roots[perm[i]], y))
            for i in range(len(rs.roots))
        )
        label = "torus m=(" + ",".join(str(m) for m in ms) + ")"
        out.append(Lift(rs, l, perm, phases, _lam_rows(td), label, torus=y))
    return out


def gauge_candidates(td: TransitionData, sc: StructureConstants) -> list[Lift]:
    """Sign gauge first (when it exists), then torus gauges; duplicates dropped.

    Every returned lift is an automorphism of order l.
    """
    rs = td.rs
    candidates: list[Lift] = []
    notes: list[str] = []
    try:
        candidates.append(sign_gauge_lift(td, sc))
    except SignGaugeError as exc:
        notes.append(f"no sign gauge for {rs.name} j={td.j}: {exc}")
    candidates.extend(torus_lifts(td, sc))
    seen = set()
    out = []
    for lift in candidates:
        if lift.phases in seen:
            continue
        if lift.automorphism_defect(sc) or lift.order_defect():
            notes.append(f"candidate {lift.label} rejected: not an automorphism of order {td.order}")
            continue
        seen.add(lift.phases)
        out.append(lift)
    if out:
        out[0].notes.extend(notes)
    return out
