"""Elliptic-function kernel: theta, phi(u, z), Eisenstein E1/E2, twisted phi.

Everything is evaluated from the theta series

    theta(z) = sum_n (-1)^n exp(pi i (n + 1/2)^2 tau + pi i (2n + 1) z)

(the q^{1/8} prefactor folded into the exponent), with z-derivatives taken
termwise.  The function is odd, theta(z + 1) = -theta(z) and
theta(z + tau) = -exp(-pi i tau - 2 pi i z) theta(z).
"""

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import EllipticDomainError, PoleError, UnsupportedOrderError

TWO_PI_I = 2j * math.pi

MIN_IMAG_TAU = 0.1
POLE_EPS = 1e-6


def e(x):
    """exp(2 pi i x)."""
    return np.exp(TWO_PI_I * x)


@dataclass(frozen=True)
class EllipticContext:
    """Modulus tau plus the numerical guards used by every evaluation."""

    tau: complex
    pole_eps: float = POLE_EPS
    min_imag: float = MIN_IMAG_TAU

    def __post_init__(self):
        tau = complex(self.tau)
        object.__setattr__(self, "tau", tau)
        if not tau.imag >= self.min_imag:
            raise EllipticDomainError(
                f"Im tau = {tau.imag:.4g} below the supported floor {self.min_imag}"
            )

    def n_terms(self, z: complex = 0j) -> int:
        """Half-width of the theta series so that dropped terms are < 1e-16 relative."""
        t = self.tau.imag
        return int(abs(complex(z).imag) / t + math.sqrt(37.0 / (math.pi * t)) + 2)

    @cached_property
    def theta_prime0(self) -> complex:
        return complex(theta_derivs(0j, self, 1)[1])

    @cached_property
    def eta1(self) -> complex:
        return eta1(self)

    def lattice_distance(self, w: complex) -> float:
        w = complex(w)
        tau = self.tau
        b = round(w.imag / tau.imag)
        best = math.inf
        for nb in (b - 1, b, b + 1):
            r = w - nb * tau
            a = round(r.real)
            for na in (a - 1, a, a + 1):
                best = min(best, abs(r - na))
        return best

    def guard(self, w: complex) -> None:
        d = self.lattice_distance(w)
        if d < self.pole_eps:
            raise PoleError(complex(w), d)


# ---------------------------------------------------------------------------
# Theta
# ---------------------------------------------------------------------------

def theta_derivs(z: complex, ctx: EllipticContext, order: int = 3) -> np.ndarray:
    """[theta, theta', ..., theta^(order)] at z from one series pass."""
    z = complex(z)
    big = ctx.n_terms(z)
    n = np.arange(-big - 1, big + 1)
    k = 1j * math.pi * (2 * n + 1)
    sign = np.where(n % 2 == 0, 1.0, -1.0)
    terms = sign * np.exp(1j * math.pi * (n + 0.5) ** 2 * ctx.tau + k * z)
    out = np.empty(order + 1, dtype=complex)
    power = np.ones_like(k)
    for m in range(order + 1):
        out[m] = np.sum(terms * power)
        power = power * k
    return out


def theta(z: complex, ctx: EllipticContext) -> complex:
    return complex(theta_derivs(z, ctx, 0)[0])


# ---------------------------------------------------------------------------
# Eisenstein functions
# ---------------------------------------------------------------------------

def eisenstein(z: complex, order: int, ctx: EllipticContext) -> complex:
    """E1(z) = d log theta / dz (order 1) or E2(z) = -dE1/dz (order 2)."""
    ctx.guard(z)
    t = theta_derivs(z, ctx, 2)
    if order == 1:
        return complex(t[1] / t[0])
    if order == 2:
        return complex((t[1] ** 2 - t[0] * t[2]) / t[0] ** 2)
    raise UnsupportedOrderError(f"Eisenstein order must be 1 or 2, got {order}")


def e1(z: complex, ctx: EllipticContext) -> complex:
    return eisenstein(z, 1, ctx)


def e2(z: complex, ctx: EllipticContext) -> complex:
    return eisenstein(z, 2, ctx)


# ---------------------------------------------------------------------------
# Kronecker function phi
# ---------------------------------------------------------------------------

def phi(u: complex, z: complex, ctx: EllipticContext) -> complex:
    """phi(u, z) = theta(u + z) theta'(0) / (theta(u) theta(z))."""
    ctx.guard(u)
    ctx.guard(z)
    return complex(theta(u + z, ctx) * ctx.theta_prime0 / (theta(u, ctx) * theta(z, ctx)))


def phi_du(u: complex, z: complex, ctx: EllipticContext) -> complex:
    """d phi / du = phi (E1(u + z) - E1(u))."""
    ctx.guard(u + z)
    return phi(u, z, ctx) * (e1(u + z, ctx) - e1(u, ctx))


def phi_dz(u: complex, z: complex, ctx: EllipticContext) -> complex:
    """d phi / dz = phi (E1(u + z) - E1(z))."""
    ctx.guard(u + z)
    return phi(u, z, ctx) * (e1(u + z, ctx) - e1(z, ctx))


# ---------------------------------------------------------------------------
# Twisted phi
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwistParams:
    """kappa-twist data: <kappa, beta> = height(beta)/h, order l of lambda."""

    coxeter: int
    l: int


def twisted_argument(pairing: complex, height: int, a: int, params: TwistParams,
                     ctx: EllipticContext) -> complex:
    return pairing + ctx.tau * height / params.coxeter + a / params.l


def phi_twisted(height: int, a: int, pairing: complex, z: complex, params: TwistParams,
                ctx: EllipticContext) -> complex:
    """phi^a_beta(x, z) = e(z f_beta/h) phi(<x, beta> + tau f_beta/h + a/l, z).

    The root beta and the Cartan point x enter only through two numbers:
    ``height`` is f_beta = ht(beta) and ``pairing`` is <x, beta>. ``a`` is the
    eigenvalue index of lambda and ``z`` the spectral parameter. A call
    phi^a_beta(x, z) is therefore
    ``phi_twisted(rs.height(beta), a, rs.pair_numeric(beta, x), z, params, ctx)``.
    """
    arg = twisted_argument(pairing, height, a, params, ctx)
    return complex(e(z * height / params.coxeter) * phi(arg, z, ctx))


def phi_twisted_du(height: int, a: int, pairing: complex, z: complex, params: TwistParams,
                   ctx: EllipticContext) -> complex:
    """Derivative of phi^a_beta(x, z) along <x, beta>."""
    arg = twisted_argument(pairing, height, a, params, ctx)
    return complex(e(z * height / params.coxeter) * phi_du(arg, z, ctx))


# ---------------------------------------------------------------------------
# Weierstrass bridge
# ---------------------------------------------------------------------------

def eta1(ctx: EllipticContext, terms: int = 200) -> complex:
    """Quasi-period constant eta_1(tau) from the Dedekind eta series.

    (24 / 2 pi i) eta'(tau)/eta(tau) = 1 - 24 sum n q^n / (1 - q^n) is the
    normalized Eisenstein series; eta_1 carries the extra factor pi^2/6 so
    that E2(z) = 1/z^2 + 2 eta_1 + O(z^2).
    """
    q = np.exp(TWO_PI_I * ctx.tau)
    n = np.arange(1, terms + 1)
    qn = q ** n
    dlog_eta = (TWO_PI_I / 24) * (1 - 24 * np.sum(n * qn / (1 - qn)))
    return complex(math.pi ** 2 / 6 * (24 / TWO_PI_I) * dlog_eta)


def eta1_from_theta(ctx: EllipticContext) -> complex:
    """Same constant as -theta'''(0) / (6 theta'(0))."""
    t = theta_derivs(0j, ctx, 3)
    return complex(-t[3] / (6 * t[1]))


def weierstrass_bridge(z: complex, ctx: EllipticContext) -> tuple[complex, complex]:
    """(zeta_W(z), wp(z)) with zeta_W = E1 + 2 eta1 z and wp = E2 - 2 eta1."""
    h = ctx.eta1
    return e1(z, ctx) + 2 * h * z, e2(z, ctx) - 2 * h


# ---------------------------------------------------------------------------
# Identity checks
# ---------------------------------------------------------------------------

@dataclass
class FayResiduals:
    three_term: float
    derivative: float
    degenerate: float
    wp_product: float
    samples: int
    skipped: int

    def as_dict(self) -> dict:
        return {
            "three_term": self.three_term,
            "derivative": self.derivative,
            "degenerate": self.degenerate,
            "wp_product": self.wp_product,
            "samples": self.samples,
            "skipped": self.skipped,
        }


def _scaled(value: complex, *terms: complex) -> float:
    return abs(value) / max(1.0, *(abs(t) for t in terms))


def random_points(rng: np.random.Generator, n: int, ctx: EllipticContext,
                  width: int = 4) -> np.ndarray:
    """n x width complex points s + t tau with s, t uniform in [-1/2, 1/2)."""
    s = rng.uniform(-0.5, 0.5, size=(n, width))
    t = rng.uniform(-0.5, 0.5, size=(n, width))
    return s + t * ctx.tau


def fay_residuals(points: np.ndarray, ctx: EllipticContext, margin: float = 0.05) -> FayResiduals:
    """Max scaled residuals of the Fay identities over rows (u1, u2, z1, z2).

    three_term:  phi(u1,z1)phi(u2,z2) - phi(u1+u2,z1)phi(u2,z2-z1) - phi(u1+u2,z2)phi(u1,z1-z2)
    derivative:  phi(u1,z)phi(u2,z) - phi(u1+u2,z)(E1(u1)+E1(u2)) + d_z phi(u1+u2,z)
    degenerate: phi(x,z)phi(-x,w) - phi(x,z-w)(E1(w)-E1(z)) - d_x phi(x,z-w)
    wp_product: phi(u,z)phi(-u,z) - E2(z) + E2(u)
    Rows with any argument within ``margin`` of the lattice are skipped.
    """
    worst = {"three_term": 0.0, "derivative": 0.0, "degenerate": 0.0, "wp_product": 0.0}
    skipped = 0
    for u1, u2, z1, z2 in points:
        args = (u1, u2, z1, z2, u1 + u2, z1 - z2, u1 + z1, u2 + z2, u1 + u2 + z1,
                u1 + u2 + z2, u2 + z2 - z1, u1 + z1 - z2, u1 + u2 + z1 - z2)
        if min(ctx.lattice_distance(a) for a in args) < margin:
            skipped += 1
            continue
        a = phi(u1, z1, ctx) * phi(u2, z2, ctx)
        b = phi(u1 + u2, z1, ctx) * phi(u2, z2 - z1, ctx)
        c = phi(u1 + u2, z2, ctx) * phi(u1, z1 - z2, ctx)
        worst["three_term"] = max(worst["three_term"], _scaled(a - b - c, a, b, c))

        p = phi(u1, z1, ctx) * phi(u2, z1, ctx)
        q = phi(u1 + u2, z1, ctx) * (e1(u1, ctx) + e1(u2, ctx))
        r = phi_dz(u1 + u2, z1, ctx)
        worst["derivative"] = max(worst["derivative"], _scaled(p - q + r, p, q, r))

        x, z, w = u1, z1, z2
        p = phi(x, z, ctx) * phi(-x, w, ctx)
        q = phi(x, z - w, ctx) * (e1(w, ctx) - e1(z, ctx))
        r = phi_du(x, z - w, ctx)
        worst["degenerate"] = max(worst["degenerate"], _scaled(p - q - r, p, q, r))

        p = phi(u1, z1, ctx) * phi(-u1, z1, ctx)
        q = e2(z1, ctx) - e2(u1, ctx)
        worst["wp_product"] = max(worst["wp_product"], _scaled(p - q, p, q))
    return FayResiduals(samples=len(points) - skipped, skipped=skipped, **worst)


def contour_residue(f, ctx: EllipticContext, radius: float = 1e-2, nodes: int = 64) -> complex:
    """(1/2 pi i) contour integral of f around 0 by the trapezoid rule."""
    theta_k = 2 * math.pi * np.arange(nodes) / nodes
    zs = radius * np.exp(1j * theta_k)
    return complex(np.mean([f(z) * z for z in zs]))


def quasiperiodicity_battery(ctx: EllipticContext, rng: np.random.Generator,
                             n: int = 20) -> dict[str, float]:
    """Max relative residuals of the shift, parity and residue relations."""
    tau = ctx.tau
    out = {key: 0.0 for key in (
        "theta_shift_1", "theta_shift_tau", "theta_odd",
        "phi_shift_1", "phi_shift_tau", "phi_symmetric",
        "e1_shift_1", "e1_shift_tau", "e2_shift_1", "e2_shift_tau", "e2_even",
        "e2_vs_e1_difference", "phi_dz_vs_difference",
        "wp_minus_e2_constant", "zeta_shift_1", "eta1_theta",
    )}

    def rel(a, b):
        return abs(a - b) / max(1.0, abs(b))

    pts = random_points(rng, n, ctx, width=2)
    wp_ref = None
    for u, z in pts:
        if min(ctx.lattice_distance(w) for w in (u, z, u + z, u + z + 1, u + z + tau)) < 0.05:
            continue
        t = theta(z, ctx)
        out["theta_shift_1"] = max(out["theta_shift_1"], rel(theta(z + 1, ctx), -t))
        out["theta_shift_tau"] = max(out["theta_shift_tau"], rel(
            theta(z + tau, ctx), -np.exp(-1j * math.pi * tau - TWO_PI_I * z) * t))
        out["theta_odd"] = max(out["theta_odd"], rel(theta(-z, ctx), -t))
        f = phi(u, z, ctx)
        out["phi_shift_1"] = max(out["phi_shift_1"], rel(phi(u, z + 1, ctx), f))
        out["phi_shift_tau"] = max(out["phi_shift_tau"], rel(phi(u, z + tau, ctx), e(-u) * f))
        out["phi_symmetric"] = max(out["phi_symmetric"], rel(phi(z, u, ctx), f))
        g1 = e1(z, ctx)
        out["e1_shift_1"] = max(out["e1_shift_1"], rel(e1(z + 1, ctx), g1))
        out["e1_shift_tau"] = max(out["e1_shift_tau"], rel(e1(z + tau, ctx), g1 - TWO_PI_I))
        g2 = e2(z, ctx)
        out["e2_shift_1"] = max(out["e2_shift_1"], rel(e2(z + 1, ctx), g2))
        out["e2_shift_tau"] = max(out["e2_shift_tau"], rel(e2(z + tau, ctx), g2))
        out["e2_even"] = max(out["e2_even"], rel(e2(-z, ctx), g2))
        h = 1e-5
        fd = -(e1(z + h, ctx) - e1(z - h, ctx)) / (2 * h)
        out["e2_vs_e1_difference"] = max(out["e2_vs_e1_difference"], rel(fd, g2))
        fd = (phi(u, z + h, ctx) - phi(u, z - h, ctx)) / (2 * h)
        out["phi_dz_vs_difference"] = max(out["phi_dz_vs_difference"], rel(fd, phi_dz(u, z, ctx)))
        zeta_z, wp_z = weierstrass_bridge(z, ctx)
        if wp_ref is None:
            wp_ref = wp_z - g2
        out["wp_minus_e2_constant"] = max(out["wp_minus_e2_constant"], rel(wp_z - g2, wp_ref))
        zeta_z1, _ = weierstrass_bridge(z + 1, ctx)
        out["zeta_shift_1"] = max(out["zeta_shift_1"], rel(zeta_z1 - zeta_z, 2 * ctx.eta1))
    out["eta1_theta"] = rel(eta1_from_theta(ctx), ctx.eta1)
    u0 = complex(pts[0][0]) if len(pts) else 0.3 + 0.2j
    out["phi_residue"] = abs(contour_residue(lambda z: phi(u0, z, ctx), ctx) - 1)
    return out


def nearest_lattice_distances(values: Sequence[complex], ctx: EllipticContext) -> float:
    return min(ctx.lattice_distance(v) for v in values)
