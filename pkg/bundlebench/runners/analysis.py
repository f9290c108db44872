"""Runners for the numerical layers: elliptic kernel, Lax operator, r-matrix."""

import numpy as np

from ..config import RunConfig
from ..elliptic import EllipticContext, fay_residuals, quasiperiodicity_battery, random_points
from ..errors import DegenerateSampleError, SingularPhaseError
from ..lax import (
    build_lax,
    hamiltonians,
    invariant_scan,
    moment_reduce,
    orthogonality_residual,
    phase_space_dimensions,
    quasiperiodicity_residual,
    random_spin,
    residue_residual,
    sample_points,
    standard_comparison,
    zero_cartan_indices,
)
from ..pipeline import resolved_basis
from ..rmatrix import SweepSummary, cybe_sweep, rll_sweep
from .report import ReportDocument, check, exceeds

# points per draw for the Lax quasi-periodicity and orthogonality checks
LAX_POINTS = 8

_DIFFERENCE_KEYS = ("e2_vs_e1_difference", "phi_dz_vs_difference")


def run_fay(cfg: RunConfig) -> ReportDocument:
    """Fay identities, quasi-periodicities and the Weierstrass bridge."""
    report = ReportDocument("verify-fay", cfg)
    ctx = EllipticContext(cfg.tau)
    rng = np.random.default_rng(cfg.seed)
    points = random_points(rng, cfg.fay_samples, ctx)
    fay = report.timed("fay", fay_residuals, points, ctx)
    if fay.samples == 0:
        raise DegenerateSampleError("every Fay sample fell next to the period lattice")
    if fay.skipped:
        report.note(f"{fay.skipped} of {cfg.fay_samples} Fay samples skipped near the lattice")
    report.data["fay"] = fay.as_dict()
    for key in ("three_term", "derivative", "degenerate", "wp_product"):
        report.add(check(f"fay_{key}", getattr(fay, key), cfg.tol("fay"), samples=fay.samples))

    battery = report.timed("quasiperiodicity", quasiperiodicity_battery, ctx, rng, cfg.samples)
    report.data["quasiperiodicity"] = battery
    for key, value in battery.items():
        if key in _DIFFERENCE_KEYS:
            tol = cfg.tol("difference")
        elif key == "phi_residue":
            tol = cfg.tol("residue")
        else:
            tol = cfg.tol("quasi")
        report.add(check(key, value, tol))
    return report


def _reduced_laxes(basis, ctx, cfg: RunConfig, report: ReportDocument):
    """Moment-reduced Lax operators for draws seed, seed + 1, ...; singular draws skipped."""
    out = []
    for d in range(cfg.samples):
        spin = moment_reduce(random_spin(basis, cfg.seed + d), basis)
        try:
            out.append((d, build_lax(basis, spin, ctx)))
        except SingularPhaseError as exc:
            report.note(f"draw {d} skipped: {exc}")
    if not out:
        raise DegenerateSampleError(f"all {cfg.samples} draws hit singular phases")
    return out


def run_lax(cfg: RunConfig) -> ReportDocument:
    """Quasi-periodicity, residue and grade orthogonality of L(z)."""
    report = ReportDocument("lax-verify", cfg)
    ctx = EllipticContext(cfg.tau)
    resolved = resolved_basis(cfg.algebra, cfg.j)
    basis = resolved.basis
    report.data.update({
        "algebra": basis.rs.name,
        "l": basis.l,
        "phase_space": phase_space_dimensions(basis),
    })
    worst = {"shift_1": 0.0, "shift_tau": 0.0, "residue": 0.0, "orthogonality": 0.0}
    laxes = report.timed("build", _reduced_laxes, basis, ctx, cfg, report)
    for d, lax in laxes:
        zs = sample_points(ctx, LAX_POINTS, cfg.seed + d)
        r1, rt = quasiperiodicity_residual(lax, zs)
        worst["shift_1"] = max(worst["shift_1"], r1)
        worst["shift_tau"] = max(worst["shift_tau"], rt)
        worst["residue"] = max(worst["residue"], residue_residual(lax))
        worst["orthogonality"] = max(worst["orthogonality"], orthogonality_residual(lax, zs))
    draws = len(laxes)
    report.add(check("lax_shift_1", worst["shift_1"], cfg.tol("lax_quasi"), draws=draws))
    report.add(check("lax_shift_tau", worst["shift_tau"], cfg.tol("lax_quasi"), draws=draws))
    report.add(check("lax_residue", worst["residue"], cfg.tol("residue"), draws=draws))
    report.add(check("grade_orthogonality", worst["orthogonality"], cfg.tol("orthogonality"),
                     draws=draws))

    # without the moment constraint the tau shift picks up the H~_0 atoms
    if zero_cartan_indices(basis):
        try:
            raw = build_lax(basis, random_spin(basis, cfg.seed), ctx)
            _, rt = quasiperiodicity_residual(raw, sample_points(ctx, LAX_POINTS, cfg.seed))
            report.data["unreduced_shift_tau"] = rt
        except SingularPhaseError as exc:
            report.note(f"unreduced draw skipped: {exc}")
    return report


def run_hamiltonians(cfg: RunConfig) -> ReportDocument:
    """1/2 (L, L) = H + I E2(z): scan fit against the closed-form sectors."""
    report = ReportDocument("hamiltonians", cfg)
    ctx = EllipticContext(cfg.tau)
    resolved = resolved_basis(cfg.algebra, cfg.j)
    basis = resolved.basis
    tilde = resolved.invariant.tilde_indices
    worst = {"defect": 0.0, "hamiltonian": 0.0, "casimir": 0.0, "standard_lax": 0.0,
             "standard_hamiltonian": 0.0}
    sectors = []
    laxes = report.timed("build", _reduced_laxes, basis, ctx, cfg, report)
    for d, lax in laxes:
        zs = sample_points(ctx, cfg.scan_samples, cfg.seed + d)
        scan = invariant_scan(lax, zs)
        split = hamiltonians(lax, tilde)
        worst["defect"] = max(worst["defect"], scan.defect)
        worst["hamiltonian"] = max(worst["hamiltonian"], _relative(scan.hamiltonian, split.total))
        worst["casimir"] = max(worst["casimir"], _relative(scan.casimir, split.casimir))
        if basis.l == 1:
            cmp = standard_comparison(lax, zs[:LAX_POINTS])
            worst["standard_lax"] = max(worst["standard_lax"], cmp["lax"])
            worst["standard_hamiltonian"] = max(worst["standard_hamiltonian"], cmp["hamiltonian"])
        if len(sectors) < 3:
            sectors.append({"draw": d, "scan": scan.to_dict(), "sectors": split.to_dict()})
    report.data.update({"algebra": basis.rs.name, "l": basis.l, "examples": sectors})
    report.add(check("scan_fit", worst["defect"], cfg.tol("scan")))
    report.add(check("scan_vs_closed_form", worst["hamiltonian"], cfg.tol("hamiltonian")))
    report.add(check("casimir_coefficient", worst["casimir"], cfg.tol("hamiltonian")))
    if basis.l == 1:
        report.add(check("standard_lax", worst["standard_lax"], cfg.tol("standard")))
        report.add(check("standard_hamiltonian", worst["standard_hamiltonian"], cfg.tol("standard")))
    return report


def _relative(a: complex, b: complex) -> float:
    return float(abs(a - b) / max(1.0, abs(b)))


def _require_draws(summary: SweepSummary, what: str) -> None:
    if summary.skipped >= summary.draws:
        raise DegenerateSampleError(f"all {summary.draws} {what} draws hit singular phases")


def run_rll(cfg: RunConfig) -> ReportDocument:
    """Poisson brackets of L against [L1 + L2, r], with sensitivity and ablation controls."""
    report = ReportDocument("verify-rll", cfg)
    ctx = EllipticContext(cfg.tau)
    basis = resolved_basis(cfg.algebra, cfg.j).basis
    reduced = report.timed("reduced", rll_sweep, basis, ctx, cfg.seed, cfg.samples)
    _require_draws(reduced, "RLL")
    m = reduced.maxima
    tol = cfg.tol("rll")
    control = ("dynamical terms dropped" if zero_cartan_indices(basis)
               else "Cartan part of r dropped")
    report.add(check("rll", m["residual"], tol, draws=reduced.draws - reduced.skipped))
    report.add(check("rll_reduced_anomaly", m["anomaly"], tol))
    report.add(check("r_representation", m["representation"], tol))
    report.add(check("bracket_antisymmetry", m["table_antisymmetry"], tol))
    report.add(exceeds("rll_sensitivity", m["min_sensitivity"], cfg.tol("sensitivity"),
                        control="phi perturbed by 1e-4"))
    report.add(exceeds("rll_ablation", m["min_ablation"], cfg.tol("ablation"), control=control))

    unreduced = report.timed("unreduced", rll_sweep, basis, ctx, cfg.seed, cfg.samples, False)
    _require_draws(unreduced, "RLL")
    report.add(check("rll_unreduced", unreduced.maxima["residual"], tol))
    report.data.update({
        "algebra": basis.rs.name,
        "l": basis.l,
        "reduced": reduced.to_dict(),
        "unreduced": unreduced.to_dict(),
    })
    if reduced.skipped:
        report.note(f"{reduced.skipped} reduced RLL draws skipped")
    return report


def run_cybe(cfg: RunConfig) -> ReportDocument:
    """Classical dynamical Yang-Baxter equation with an ablation control."""
    report = ReportDocument("verify-cybe", cfg)
    ctx = EllipticContext(cfg.tau)
    basis = resolved_basis(cfg.algebra, cfg.j).basis
    summary = report.timed("cybe", cybe_sweep, basis, ctx, cfg.seed, cfg.samples)
    _require_draws(summary, "CYBE")
    report.add(check("cybe", summary.maxima["residual"], cfg.tol("cybe"),
                     draws=summary.draws - summary.skipped))
    report.add(exceeds("cybe_ablation", summary.maxima["min_ablation"], cfg.tol("ablation")))
    report.data.update({"algebra": basis.rs.name, "l": basis.l, "sweep": summary.to_dict()})
    for message in summary.notes:
        report.note(message)
    return report

