"""The ``all`` suite: every runner for one algebra and class, merged into one report."""

from dataclasses import replace

from ..config import RunConfig
from ..pipeline import class_index, root_system
from .algebra import run_gs, run_info, run_transition
from .analysis import run_cybe, run_fay, run_hamiltonians, run_lax, run_rll
from .classes import run_class, run_degrees
from .report import ReportDocument


def _merge(into: ReportDocument, part: ReportDocument, tag: str = "") -> None:
    prefix = tag or part.command
    for rec in part.records:
        rec.name = f"{prefix}:{rec.name}"
        into.add(rec)
    for message in part.notes:
        into.note(f"{prefix}: {message}")
    for label, seconds in part.seconds.items():
        into.seconds[f"{prefix}:{label}"] = seconds
    into.data[prefix] = part.data


def run_all(cfg: RunConfig) -> ReportDocument:
    report = ReportDocument("all", cfg)
    rs = root_system(cfg.algebra)
    j = class_index(rs, cfg.j)
    for runner in (run_info, run_transition, run_gs, run_fay, run_lax, run_hamiltonians,
                   run_rll, run_cybe):
        _merge(report, runner(cfg))
    _merge(report, run_degrees(cfg, [rs.name]))
    if j is not None:
        _merge(report, run_class(cfg, f"w{j}"))
        # untwisted run: compared against the directly coded spin-CM system
        _merge(report, run_hamiltonians(replace(cfg, j=0)), "hamiltonians-untwisted")
    return report
