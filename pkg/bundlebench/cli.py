"""bundlebench CLI: run constructions and verification suites, seal and verify reports."""

import argparse
import json
import sys
from pathlib import Path

from .config import DEFAULT_TOLERANCES, build_config, parse_tau
from .console import error, info, verdict_line, warn
from .errors import BundleBenchError

_CONFIG_FLAGS = ("algebra", "class", "tau", "seed", "samples", "fay_samples", "scan_samples", "out")


def _config(args: argparse.Namespace):
    flags = {key: getattr(args, key, None) for key in _CONFIG_FLAGS}
    if getattr(args, "algebra_flag", None):
        flags["algebra"] = args.algebra_flag
    for name in DEFAULT_TOLERANCES:
        flags[f"tol_{name}"] = getattr(args, f"tol_{name}", None)
    return build_config(flags, Path(args.config) if getattr(args, "config", None) else None)


def _fmt(value) -> str:
    return "-" if value is None else f"{value:.3e}"


def _emit(report, args: argparse.Namespace) -> None:
    """Print the report (table or JSON), surface notes, seal when --out is set, set the exit code."""
    for message in report.notes:
        warn(message, args.quiet)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2, ensure_ascii=False))
    else:
        width = max((len(r.name) for r in report.records), default=4)
        for rec in report.records:
            print(f"{rec.name:<{width}}  {_fmt(rec.residual):>10}  {_fmt(rec.tolerance):>10}  "
                  f"{verdict_line(rec.passed)}")
        print(f"{report.command}: {verdict_line(report.passed)} "
              f"({len(report.records) - len(report.failures())}/{len(report.records)} checks)")
    if report.config.out is not None:
        from .runners.report import seal

        receipt = seal(report, report.config.out)
        info(f"sealed {report.config.out}. Receipt ID: {receipt['id']}", args.quiet)
    if not report.passed:
        sys.exit(1)


def cmd_info(args: argparse.Namespace) -> None:
    from .runners.algebra import run_info

    _emit(run_info(_config(args)), args)


def cmd_transition(args: argparse.Namespace) -> None:
    from .runners.algebra import run_transition

    _emit(run_transition(_config(args)), args)


def cmd_gs(args: argparse.Namespace) -> None:
    from .runners.algebra import run_gs

    _emit(run_gs(_config(args)), args)


def cmd_verify_fay(args: argparse.Namespace) -> None:
    from .runners.analysis import run_fay

    _emit(run_fay(_config(args)), args)


def cmd_lax(args: argparse.Namespace) -> None:
    from .runners.analysis import run_lax

    _emit(run_lax(_config(args)), args)


def cmd_hamiltonians(args: argparse.Namespace) -> None:
    from .runners.analysis import run_hamiltonians

    _emit(run_hamiltonians(_config(args)), args)


def cmd_verify_rll(args: argparse.Namespace) -> None:
    from .runners.analysis import run_rll

    _emit(run_rll(_config(args)), args)


def cmd_verify_cybe(args: argparse.Namespace) -> None:
    from .runners.analysis import run_cybe

    _emit(run_cybe(_config(args)), args)


def cmd_degrees(args: argparse.Namespace) -> None:
    from .runners.classes import run_degrees

    _emit(run_degrees(_config(args), args.algebras or None), args)


def cmd_class(args: argparse.Namespace) -> None:
    from .runners.classes import run_class

    _emit(run_class(_config(args), args.coweight, args.start), args)


def cmd_all(args: argparse.Namespace) -> None:
    from .runners.suite import run_all

    _emit(run_all(_config(args)), args)


def _receipt_dir(args: argparse.Namespace) -> Path:
    receipt_dir = Path(args.dir)
    if not (receipt_dir / "receipt.json").exists():
        error(f"no receipt.json found in {receipt_dir}")
        sys.exit(2)
    return receipt_dir


def cmd_inspect(args: argparse.Namespace) -> None:
    from .receipts.receipt import receipt_summary

    for key, value in receipt_summary(_receipt_dir(args)).items():
        print(f"{key:<10} {value}")


def cmd_verify(args: argparse.Namespace) -> None:
    from .receipts.receipt import verify_receipt

    problems = verify_receipt(_receipt_dir(args))
    for problem in problems:
        print(f"  {problem}")
    if problems:
        print(verdict_line(False, no="TAMPERED"))
        sys.exit(1)
    print(verdict_line(True, yes="VERIFIED"))


def _run_options() -> argparse.ArgumentParser:
    """Flags shared by every run subcommand; defaults stay None so the config file can fill them."""
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--algebra", dest="algebra_flag", help="Algebra id, e.g. A3, D5, E6")
    p.add_argument("--class", dest="class", type=int,
                   help="Class generator index j (1-based coweight); 0 = trivial class")
    p.add_argument("--tau", type=parse_tau, help="Modulus as re,im (default 0.3,1.5)")
    p.add_argument("--seed", type=int, help="RNG seed (default 7)")
    p.add_argument("--samples", type=int, help="Random draws per sweep (default 20)")
    p.add_argument("--fay-samples", dest="fay_samples", type=int,
                   help="Points for the Fay identities (default 1000)")
    p.add_argument("--scan-samples", dest="scan_samples", type=int,
                   help="z-samples for the Hamiltonian scan (default 32)")
    p.add_argument("--config", help="key = value configuration file")
    p.add_argument("--out", type=Path, help="Seal the report into this directory")
    p.add_argument("--json", action="store_true", help="Print the full JSON report")
    tol = p.add_argument_group("tolerances")
    for name, default in DEFAULT_TOLERANCES.items():
        tol.add_argument(f"--tol-{name.replace('_', '-')}", dest=f"tol_{name}", type=float,
                         metavar="X", help=f"(default {default:g})")
    return p


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(
        prog="bundlebench",
        description="bundlebench: Lax operators and r-matrices for non-trivial elliptic bundles",
    )
    parser.add_argument(
        "--quiet", "-q",
        action="store_true",
        default=False,
        help="Suppress [WARN] and [INFO] messages",
    )
    sub = parser.add_subparsers(dest="command")
    common = _run_options()

    def algebra_command(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("algebra", nargs="?", help="Algebra id (same as --algebra)")
        p.set_defaults(func=func)
        return p

    algebra_command("info", cmd_info, "Root data, center and Jacobi identity")
    algebra_command("transition", cmd_transition, "kappa, lambda_j and the invariant Cartan H~_0")
    algebra_command("gs", cmd_gs, "GS basis: orbits, Grams, grading, invariant subalgebra")
    algebra_command("lax-verify", cmd_lax, "Quasi-periodicity and residue of the Lax operator")
    algebra_command("hamiltonians", cmd_hamiltonians, "Quadratic Hamiltonians against the invariant scan")
    algebra_command("verify-rll", cmd_verify_rll, "Classical RLL relation with controls")
    algebra_command("verify-cybe", cmd_verify_cybe, "Classical dynamical Yang-Baxter equation")
    algebra_command("verify-fay", cmd_verify_fay, "Fay identities and elliptic quasi-periodicities")
    algebra_command("all", cmd_all, "Full suite for one algebra and class")

    degrees = sub.add_parser("degrees", parents=[common],
                             help="Conformal-group degrees mod dim V")
    degrees.add_argument("algebras", nargs="*", help="Algebra ids (default: every tabulated row)")
    degrees.set_defaults(func=cmd_degrees)

    cls = sub.add_parser("class", parents=[common],
                         help="Characteristic class of a coweight, e.g. 'class A3 w3+w3'")
    cls.add_argument("algebra", help="Algebra id")
    cls.add_argument("coweight", help="Coweight: w3+w3, 2w1-a2 or 1/2,0,1/2")
    cls.add_argument("--from", dest="start", help="Coweight of the bundle being modified")
    cls.set_defaults(func=cmd_class)

    inspect_parser = sub.add_parser("inspect", help="Print a summary of a sealed report")
    inspect_parser.add_argument("dir", help="Directory containing receipt.json")
    inspect_parser.set_defaults(func=cmd_inspect)

    verify_parser = sub.add_parser("verify", help="Verify a sealed report directory")
    verify_parser.add_argument("dir", help="Directory containing receipt.json")
    verify_parser.set_defaults(func=cmd_verify)

    args = parser.parse_args(argv)

    if not hasattr(args, "func"):
        parser.print_help()
        sys.exit(2)

    try:
        args.func(args)
    except BundleBenchError as exc:
        error(str(exc))
        sys.exit(2)


if __name__ == "__main__":
    main()
