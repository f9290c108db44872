"""Runners for characteristic classes, conformal degrees and Hecke bookkeeping."""

from typing import Optional

from ..charclass import (
    characteristic_class,
    class_order,
    degree_table,
    degree_table_layout,
    hecke_lax_scaling,
    hecke_weight_exponents,
    parse_coweight,
    tabulated_representation,
    weight_diagram,
)
from ..config import RunConfig
from ..elliptic import EllipticContext
from ..errors import SingularPhaseError
from ..lax import build_lax, moment_reduce, random_spin
from ..lie import rational as Q
from ..pipeline import resolved_basis, root_system
from .report import ReportDocument, exact


def run_degrees(cfg: RunConfig, algebras: Optional[list[str]] = None) -> ReportDocument:
    """Residues deg mod dim V for every tabulated row, or for the given algebras."""
    report = ReportDocument("degrees", cfg)
    rows = report.timed("degrees", degree_table, algebras)
    report.data["layout"] = degree_table_layout()
    report.data["rows"] = [r.to_dict() for r in rows]
    for rec in rows:
        report.add(exact(f"degree_{rec.algebra}", bool(rec.matches),
                         residue=Q.frac_str(rec.residue), printed=Q.frac_str(rec.printed_residue),
                         dim_V=rec.dim))
        for message in rec.notes:
            report.note(f"{rec.algebra}: {message}")
    return report


def _dominant(rs, gamma) -> bool:
    return all(rs.pair(Q.unit_vector(rs.rank, j), gamma) >= 0 for j in range(rs.rank))


def run_class(cfg: RunConfig, expression: str, start: Optional[str] = None) -> ReportDocument:
    """Class of gamma in P^vee / Q^vee, its order, and a Hecke modification by gamma."""
    report = ReportDocument("class", cfg)
    rs = root_system(cfg.algebra)
    gamma = parse_coweight(rs, expression)
    cls = characteristic_class(rs, gamma)
    report.data.update({"expression": expression, "class": cls.to_dict()})
    report.add(exact("class_order", class_order(rs, gamma) == cls.order, order=cls.order))
    report.add(exact("class_inverse", (cls + cls.inverse()).trivial))

    old = parse_coweight(rs, start) if start else Q.zero_vector(rs.rank)
    shifted = characteristic_class(rs, Q.add(old, gamma))
    composed = characteristic_class(rs, old) + cls
    report.add(exact("class_shift", shifted.exponents == composed.exponents,
                     new=shifted.to_dict()["phases"]))

    if not _dominant(rs, gamma):
        report.note(f"{expression} is not dominant; Hecke modification skipped")
        return report

    node, dim = tabulated_representation(rs)
    top, expansions = weight_diagram(rs, node)
    exponents = hecke_weight_exponents(rs, gamma, top, expansions)
    report.data["hecke_weights"] = {
        "nu": f"varpi_{node + 1}",
        "dim_V": dim,
        "exponents": [Q.frac_str(e) for e in exponents],
    }
    report.add(exact("weight_count", len(expansions) == dim, weights=len(expansions), dim_V=dim))

    basis = resolved_basis(cfg.algebra, 0).basis
    spin = moment_reduce(random_spin(basis, cfg.seed), basis)
    try:
        lax = build_lax(basis, spin, EllipticContext(cfg.tau))
    except SingularPhaseError as exc:
        report.note(f"Hecke scaling skipped: {exc}")
        return report
    scaling = report.timed("hecke", hecke_lax_scaling, rs, lax, gamma, old)
    report.data["hecke"] = scaling.to_dict()
    report.add(exact("hecke_class", scaling.new_class.exponents == shifted.exponents))
    if not scaling.admissible:
        report.note(f"generic spin is not admissible for {expression}: "
                    f"{len(scaling.violations)} Laurent coefficients survive")
    return report
