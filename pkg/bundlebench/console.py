"""Prefixed stderr lines and coloured verdicts for the command line."""

import sys

_GREEN = "\033[32m"
_RED = "\033[31m"
_RESET = "\033[0m"


def warn(message: str, quiet: bool = False) -> None:
    """Emit a ``[WARN]`` line on stderr unless *quiet*."""
    if not quiet:
        print(f"[WARN] {message}", file=sys.stderr)


def info(message: str, quiet: bool = False) -> None:
    if not quiet:
        print(f"[INFO] {message}", file=sys.stderr)


def error(message: str) -> None:
    print(f"Error: {message}", file=sys.stderr)


def verdict_line(passed: bool, yes: str = "PASS", no: str = "FAIL") -> str:
    """Green *yes* or red *no*, the way receipts print VERIFIED/TAMPERED."""
    if passed:
        return f"{_GREEN}{yes}{_RESET}"
    return f"{_RED}{no}{_RESET}"
