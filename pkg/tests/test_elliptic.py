import cmath

import numpy as np
import pytest

from bundlebench.config import DEFAULT_TOLERANCES
from bundlebench.elliptic import (
    EllipticContext,
    TwistParams,
    e1,
    e2,
    eisenstein,
    eta1,
    eta1_from_theta,
    fay_residuals,
    phi,
    phi_twisted,
    quasiperiodicity_battery,
    random_points,
    theta,
)
from bundlebench.errors import BundleBenchError, EllipticDomainError, PoleError, UnsupportedOrderError

DIFFERENCE_KEYS = {"e2_vs_e1_difference", "phi_dz_vs_difference"}


def test_fay_identities(ctx, rng):
    res = fay_residuals(random_points(rng, 200, ctx), ctx)
    assert res.samples > 100
    assert res.samples + res.skipped == 200
    for key in ("three_term", "derivative", "degenerate", "wp_product"):
        assert getattr(res, key) < DEFAULT_TOLERANCES["fay"], key


@pytest.mark.parametrize("tau", [0.3 + 1.5j, 1j, -0.45 + 0.8j])
def test_quasiperiodicity_battery(tau):
    ctx = EllipticContext(tau)
    out = quasiperiodicity_battery(ctx, np.random.default_rng(3), n=12)
    for key, value in out.items():
        if key in DIFFERENCE_KEYS:
            tol = DEFAULT_TOLERANCES["difference"]
        elif key == "phi_residue":
            tol = DEFAULT_TOLERANCES["residue"]
        else:
            tol = DEFAULT_TOLERANCES["quasi"]
        assert value < tol, key


def test_theta_is_odd_and_vanishes_at_zero(ctx):
    z = 0.17 + 0.31j
    assert abs(theta(-z, ctx) + theta(z, ctx)) < 1e-13
    assert abs(theta(0j, ctx)) < 1e-14
    assert abs(ctx.theta_prime0) > 0.1


def test_e1_shift_by_tau(ctx):
    z = 0.21 - 0.13j
    assert abs(e1(z + ctx.tau, ctx) - (e1(z, ctx) - 2j * cmath.pi)) < 1e-10
    assert abs(e1(z + 1, ctx) - e1(z, ctx)) < 1e-10


def test_e2_has_double_pole(ctx):
    z = 1e-3
    assert abs(z * z * e2(z, ctx) - 1) < 1e-4


def test_eta1_agrees_with_theta_series(ctx):
    assert abs(eta1(ctx) - eta1_from_theta(ctx)) < 1e-10


def test_phi_shift_by_tau_picks_up_character(ctx):
    u, z = 0.23 + 0.11j, -0.18 + 0.27j
    assert abs(phi(u, z + ctx.tau, ctx) - cmath.exp(-2j * cmath.pi * u) * phi(u, z, ctx)) < 1e-9


def test_twisted_phi_without_twist_is_phi(ctx):
    params = TwistParams(coxeter=2, l=1)
    u, z = 0.19 + 0.07j, 0.31 - 0.22j
    assert abs(phi_twisted(0, 0, u, z, params, ctx) - phi(u, z, ctx)) < 1e-13


def test_twisted_phi_from_root_data(ctx, rs):
    # beta = alpha_1 + alpha_2 in A2, a = 1, lambda of order 3
    a2 = rs("A2")
    beta, x, z = (1, 1), (0.1 + 0.2j, -0.05 + 0.1j), 0.27 - 0.14j
    params = TwistParams(coxeter=a2.coxeter, l=3)
    pairing = a2.pair_numeric(beta, x)
    want = cmath.exp(2j * cmath.pi * z * 2 / 3) * phi(pairing + ctx.tau * 2 / 3 + 1 / 3, z, ctx)
    got = phi_twisted(a2.height(beta), 1, pairing, z, params, ctx)
    assert abs(got - want) < 1e-10 * max(1.0, abs(want))


def test_low_modulus_rejected():
    with pytest.raises(EllipticDomainError):
        EllipticContext(0.2 + 0.05j)


@pytest.mark.parametrize("w", [0j, 1 + 0j, 0.3 + 1.5j, 1e-8 + 0j])
def test_lattice_points_are_poles(ctx, w):
    with pytest.raises(PoleError):
        e1(w, ctx)


def test_eisenstein_order_checked(ctx):
    with pytest.raises(UnsupportedOrderError) as info:
        eisenstein(0.2 + 0.1j, 3, ctx)
    assert isinstance(info.value, BundleBenchError)
    assert "got 3" in str(info.value)
