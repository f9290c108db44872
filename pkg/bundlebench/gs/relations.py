"""Gram matrices and brackets of the GS basis, numerically and in closed form.

The numeric tables come from conjugating the Chevalley data by the change of
basis; the closed forms are assembled orbit by orbit from N_{a,b}, the lift
phases and powers of omega.  Both are returned so callers can compare them.
"""

import math

import numpy as np

from ..errors import NotInvariantError
from .basis import GSBasis, _tensor, orbit_sum


def _lam(basis: GSBasis) -> np.ndarray:
    return np.array(basis.td.lam.coroot_matrix, dtype=float)


def _cartan_form(basis: GSBasis) -> np.ndarray:
    return np.array([[float(v) for v in row] for row in basis.rs.cartan_form])


def _pair(basis: GSBasis, root_index: int, x: np.ndarray):
    f = np.array(basis.rs.roots[root_index], dtype=float)
    return f @ np.array(basis.rs.cartan, dtype=float) @ x


def _node_vectors(basis: GSBasis) -> list[np.ndarray]:
    rs = basis.rs
    return [np.array(rs.ext_coroot(orb[0]), dtype=float) for orb in basis.td.orbits]


def _node_steps(basis: GSBasis) -> dict[int, tuple[int, int]]:
    """k -> (node orbit, s) with lambda^s(alpha^vee_{base}) = alpha^vee_k, k = 1..n."""
    rs = basis.rs
    lam = basis.td.lam
    out = {}
    for o, orb in enumerate(basis.td.orbits):
        cur = tuple(rs.ext_coroot(orb[0]))
        for s in range(basis.l):
            for k in orb:
                if k and k not in out and tuple(rs.ext_coroot(k)) == cur:
                    out[k] = (o, s)
            cur = tuple(int(v) for v in lam.apply(cur))
    return out


def cartan_fourier(basis: GSBasis, x: np.ndarray, c: int) -> np.ndarray:
    """h^c[x] = l^{-1/2} sum_m omega^{mc} lambda^m x as a Chevalley column."""
    lam = _lam(basis)
    v = np.zeros(basis.rs.dim, dtype=complex)
    cur = np.asarray(x, dtype=complex)
    for m in range(basis.l):
        v[: basis.rs.rank] += basis.omega ** (m * c) * cur / math.sqrt(basis.l)
        cur = lam @ cur
    return v


def cartan_coefficients(basis: GSBasis, x: np.ndarray, c: int) -> np.ndarray:
    """Coefficients of h^c[x] on the h generators (x in coroot coordinates).

    Uses h^c[alpha^vee_k] = omega^{-s_k c} h^c_{O(k)} and, for the dropped
    h^0 of the alpha_0 orbit, h^0_{O_0} = -(1/N_0) sum_{O != O_0} N_O h^0_O.
    """
    rs = basis.rs
    out = np.zeros(basis.size, dtype=complex)
    steps = _node_steps(basis)
    c %= basis.l
    comarks = [1] + [float(v) for v in rs.comarks]
    mark = [sum(comarks[k] for k in orb) for orb in basis.td.orbits]
    for k in range(1, rs.rank + 1):
        if not x[k - 1]:
            continue
        o, s = steps[k]
        coef = x[k - 1] * basis.omega ** (-s * c)
        if o == 0 and c == 0:
            for o2 in range(1, len(basis.td.orbits)):
                i = basis.find("h", o2, 0)
                if i is not None:
                    out[i] += -coef * mark[o2] / mark[0]
            continue
        i = basis.find("h", o, c)
        if i is not None:
            out[i] += coef
    return out


# ---------------------------------------------------------------------------
# Gram
# ---------------------------------------------------------------------------

def closed_form_gram(basis: GSBasis) -> np.ndarray:
    """(t^a_A, t^b_B) = delta^{a+b} sum_d omega^{da} e(Phi_d(A)) delta_{lambda^d A, -B} 2/(B,B);
    (h^a_O, h^b_O') = delta^{a+b} sum_s omega^{sa} (lambda^s x_O, x_O')."""
    rs = basis.rs
    l = basis.l
    lift = basis.lift
    out = np.zeros((basis.size, basis.size), dtype=complex)
    cf = _cartan_form(basis)
    lam = _lam(basis)
    xs = _node_vectors(basis)
    for i, gi in enumerate(basis.generators):
        for j, gj in enumerate(basis.generators):
            if (gi.grade + gj.grade) % l or gi.kind != gj.kind:
                continue
            if gi.kind == "h":
                cur = xs[gi.orbit]
                total = 0j
                for s in range(l):
                    total += basis.omega ** (s * gi.grade) * (cur @ cf @ xs[gj.orbit])
                    cur = lam @ cur
                out[i, j] = total
                continue
            a_base = basis.orbits.root_orbits[gi.orbit].base
            b_base = basis.orbits.root_orbits[gj.orbit].base
            target = rs.negative_index(b_base)
            total = 0j
            for d in range(l):
                if lift.image(a_base, d) == target:
                    phase = float(lift.cumulative(a_base, d))
                    total += basis.omega ** (d * gi.grade) * np.exp(2j * np.pi * phase)
            out[i, j] = total * 2 / float(rs.norm2(rs.roots[b_base]))
    return out


def gs_gram(basis: GSBasis) -> dict:
    """Gram blocks, the dual Gram, and their agreement with the closed forms."""
    h = basis.h_indices()
    t = basis.t_indices()
    g = basis.gram
    closed = closed_form_gram(basis)
    dual_gram = basis.duals.T @ basis.killing @ basis.duals
    h_block = g[np.ix_(h, h)] if h else np.zeros((0, 0))
    dual_h = dual_gram[np.ix_(h, h)] if h else np.zeros((0, 0))
    return {
        "t": g[np.ix_(t, t)],
        "h": h_block,
        "dual": dual_gram,
        "closed_form_residual": float(np.max(np.abs(g - closed))),
        "cross_residual": float(np.max(np.abs(g[np.ix_(h, t)]))) if h and t else 0.0,
        "dual_h_residual": float(np.max(np.abs(dual_h - np.linalg.inv(h_block)))) if h else 0.0,
        "dual_inverse_residual": float(np.max(np.abs(dual_gram - basis.gram_inv))),
    }


# ---------------------------------------------------------------------------
# Brackets
# ---------------------------------------------------------------------------

def gs_structure_constants(basis: GSBasis) -> np.ndarray:
    """C[i, j, k] with [X_i, X_j] = sum_k C[i, j, k] X_k, by conjugation."""
    f = _tensor(basis.sc)
    x = basis.vectors
    left = np.einsum("ia,ijk->ajk", x, f)
    brackets = np.einsum("ajk,jb->abk", left, x)
    return brackets @ (basis.killing @ basis.duals)


def closed_form_structure_constants(basis: GSBasis) -> np.ndarray:
    """Bracket table assembled from the orbit formulas.

    [h^c_O, t^b_B] = l^{-1/2} sum_d omega^{dc} <B, lambda^d x_O> t^{c+b}_B
    [t^a_A, t^b_B] = l^{-1/2} sum_d omega^{da} e(Phi_d(A)) X_d, where X_d is
      N_{lambda^d A, B} e(-Phi_s(E)) omega^{-s(a+b)} t^{a+b}_E  if lambda^d A + B = lambda^s E
      -h^{a+b}[B^vee]                                        if lambda^d A = -B
    """
    rs = basis.rs
    l = basis.l
    lift = basis.lift
    sc = basis.sc
    size = basis.size
    omega = basis.omega
    norm = 1 / math.sqrt(l)
    out = np.zeros((size, size, size), dtype=complex)
    lam = _lam(basis)
    xs = _node_vectors(basis)
    orbits = basis.orbits

    for i in basis.h_indices():
        gi = basis.generators[i]
        for j in basis.t_indices():
            gj = basis.generators[j]
            k = basis.find("t", gj.orbit, gi.grade + gj.grade)
            if k is None:
                continue
            base = orbits.root_orbits[gj.orbit].base
            cur = xs[gi.orbit]
            coef = 0j
            for d in range(l):
                coef += omega ** (d * gi.grade) * _pair(basis, base, cur)
                cur = lam @ cur
            out[i, j, k] = norm * coef
            out[j, i, k] = -norm * coef

    for i in basis.t_indices():
        gi = basis.generators[i]
        a_base = orbits.root_orbits[gi.orbit].base
        for j in basis.t_indices():
            gj = basis.generators[j]
            b_base = orbits.root_orbits[gj.orbit].base
            c = (gi.grade + gj.grade) % l
            b_root = rs.roots[b_base]
            for d in range(l):
                img = lift.image(a_base, d)
                weight = norm * omega ** (d * gi.grade) * np.exp(
                    2j * np.pi * float(lift.cumulative(a_base, d)))
                if img == rs.negative_index(b_base):
                    coroot = np.array(rs.coroot(b_root), dtype=float)
                    out[i, j] -= weight * cartan_coefficients(basis, coroot, c)
                    continue
                n_val = sc.n(img, b_base)
                if not n_val:
                    continue
                e_idx = rs.index(tuple(p + q for p, q in zip(rs.roots[img], b_root)))
                e_orb = orbits.orbit(e_idx)
                k = basis.find("t", orbits.orbit_of_root[e_idx], c)
                if k is None:
                    continue
                s = e_orb.step_of(e_idx)
                back = np.exp(-2j * np.pi * float(lift.cumulative(e_orb.base, s)))
                out[i, j, k] += weight * n_val * back * omega ** (-s * c)
    return out


def grading_defect(table: np.ndarray, basis: GSBasis, tol: float = 1e-10) -> int:
    """Entries with [g_a, g_b] leaking outside g_{a+b}."""
    g = basis.grades
    l = basis.l
    mask = (g[:, None, None] + g[None, :, None] - g[None, None, :]) % l != 0
    return int(np.count_nonzero(np.abs(table[mask]) > tol))


def normalized_cartan(basis: GSBasis, root_index: int, k: int) -> np.ndarray:
    """h-bar^k_alpha = ((alpha, alpha)/2) h^k[alpha^vee]."""
    rs = basis.rs
    f = rs.roots[root_index]
    coroot = np.array(rs.coroot(f), dtype=float)
    return float(rs.norm2(f)) / 2 * cartan_fourier(basis, coroot, k)


def cartan_relation_residual(basis: GSBasis, limit: int | None = None) -> float:
    """[h-bar^k_a, t^m_B] = l^{-1/2} sum_s omega^{-ks} (a, lambda^s B) t^{k+m}_B.

    ``limit`` caps the number of positive roots a that are tried.
    """
    rs = basis.rs
    l = basis.l
    worst = 0.0
    positives = range(rs.n_positive if limit is None else min(limit, rs.n_positive))
    for a in positives:
        for k in range(l):
            hbar = normalized_cartan(basis, a, k)
            for j in basis.t_indices():
                g = basis.generators[j]
                base = basis.orbits.root_orbits[g.orbit].base
                coef = 0j
                for s in range(l):
                    img = basis.lift.image(base, s)
                    coef += basis.omega ** (-k * s) * float(rs.inner(rs.roots[a], rs.roots[img]))
                coef /= math.sqrt(l)
                lhs = basis.bracket(hbar, basis.vectors[:, j])
                target = basis.find("t", g.orbit, k + g.grade)
                rhs = coef * basis.vectors[:, target] if target is not None else 0 * lhs
                worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def transfer_residual(basis: GSBasis) -> float:
    """t^k[P^s E_B] = omega^{-ks} t^k_B for every orbit, shift and grade."""
    p = basis.lift.matrix()
    rs = basis.rs
    worst = 0.0
    for j in basis.t_indices():
        g = basis.generators[j]
        orb = basis.orbits.root_orbits[g.orbit]
        e = np.zeros(rs.dim, dtype=complex)
        e[rs.rank + orb.base] = 1
        for s in range(basis.l):
            moved = np.linalg.matrix_power(p, s) @ e
            total = np.zeros(rs.dim, dtype=complex)
            cur = moved
            for m in range(basis.l):
                total += basis.omega ** (m * g.grade) * cur
                cur = p @ cur
            total /= math.sqrt(basis.l)
            want = basis.omega ** (-g.grade * s) * basis.vectors[:, j]
            worst = max(worst, float(np.max(np.abs(total - want))))
    return worst


def sum_rule_residual(basis: GSBasis) -> float:
    """h-bar^k_{-a} = -h-bar^k_a."""
    rs = basis.rs
    worst = 0.0
    for a in range(rs.n_positive):
        for k in range(basis.l):
            diff = normalized_cartan(basis, rs.negative_index(a), k) + normalized_cartan(basis, a, k)
            worst = max(worst, float(np.max(np.abs(diff))))
    return worst


def orbit_sum_residual(basis: GSBasis) -> float:
    """Stored t generators agree with a fresh orbit sum from their base."""
    worst = 0.0
    for j in basis.t_indices():
        g = basis.generators[j]
        base = basis.orbits.root_orbits[g.orbit].base
        worst = max(worst, float(np.max(np.abs(orbit_sum(basis.lift, base, g.grade)
                                                - basis.vectors[:, j]))))
    return worst


# ---------------------------------------------------------------------------
# Adjoint actions of Q and Lambda
# ---------------------------------------------------------------------------

def ad_q_matrix(basis: GSBasis) -> np.ndarray:
    """Ad_Q = diag(1 on H, e(<gamma, kappa>) on E_gamma)."""
    rs = basis.rs
    kappa = [float(v) for v in basis.td.kappa]
    diag = [1.0 + 0j] * rs.rank + [np.exp(2j * np.pi * rs.pair_numeric(f, kappa)) for f in rs.roots]
    return np.diag(diag)


def ad_lambda_matrix(basis: GSBasis, u: np.ndarray) -> np.ndarray:
    """Ad_Lambda = P o Ad_{e(u)}."""
    rs = basis.rs
    diag = [1.0 + 0j] * rs.rank + [np.exp(2j * np.pi * rs.pair_numeric(f, u)) for f in rs.roots]
    return basis.lift.matrix() @ np.diag(diag)


def check_invariant_numeric(basis: GSBasis, u: np.ndarray, tol: float = 1e-12) -> None:
    lam = _lam(basis)
    if np.max(np.abs(lam @ u - u), initial=0.0) > tol:
        raise NotInvariantError(f"u = {np.round(u, 6).tolist()} is not fixed by lambda")


def adjoint_eigen_check(basis: GSBasis, u: np.ndarray) -> dict[str, float]:
    """Eigen-relations of Ad_Q and Ad_Lambda on the GS basis and its duals."""
    u = np.asarray(u, dtype=complex)
    check_invariant_numeric(basis, u)
    rs = basis.rs
    aq = ad_q_matrix(basis)
    al = ad_lambda_matrix(basis, u)
    kappa = [float(v) for v in basis.td.kappa]
    out = {"ad_lambda": 0.0, "ad_q": 0.0, "ad_q_cartan_duals": 0.0, "commute": 0.0}
    for i, g in enumerate(basis.generators):
        v = basis.vectors[:, i]
        if g.kind == "h":
            want_l = basis.omega ** (-g.grade)
            want_q = 1.0
            d = basis.duals[:, i]
            out["ad_q_cartan_duals"] = max(out["ad_q_cartan_duals"],
                                           float(np.max(np.abs(aq @ d - d))))
        else:
            base = basis.orbits.root_orbits[g.orbit].base
            f = rs.roots[base]
            want_l = np.exp(2j * np.pi * (rs.pair_numeric(f, u) - g.grade / basis.l))
            want_q = np.exp(2j * np.pi * rs.pair_numeric(f, kappa))
        out["ad_lambda"] = max(out["ad_lambda"], float(np.max(np.abs(al @ v - want_l * v))))
        out["ad_q"] = max(out["ad_q"], float(np.max(np.abs(aq @ v - want_q * v))))
    out["commute"] = float(np.max(np.abs(al @ aq - aq @ al)))
    return out
