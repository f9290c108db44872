"""Exact rational vectors and matrices.

Vectors are tuples of :class:`fractions.Fraction`; matrices are tuples of
such rows.  Small products are done directly on Fractions, while inverses,
null spaces and ranks go through ``sympy.Matrix`` so that no floating point
error reaches the algebra layer.
"""

import math
from fractions import Fraction
from typing import Iterable, Sequence

import sympy

Vector = tuple[Fraction, ...]
Matrix = tuple[Vector, ...]


def frac(x) -> Fraction:
    """Coerce ints, Fractions and sympy Rationals to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, sympy.Rational):
        return Fraction(int(x.p), int(x.q))
    return Fraction(x)


def vec(values: Iterable) -> Vector:
    return tuple(frac(v) for v in values)


def mat(rows: Iterable[Iterable]) -> Matrix:
    return tuple(vec(r) for r in rows)


def zero_vector(n: int) -> Vector:
    return (Fraction(0),) * n


def unit_vector(n: int, k: int) -> Vector:
    return tuple(Fraction(1 if i == k else 0) for i in range(n))


def identity(n: int) -> Matrix:
    return tuple(unit_vector(n, k) for k in range(n))


def add(x: Sequence, y: Sequence) -> Vector:
    return tuple(frac(a) + frac(b) for a, b in zip(x, y))


def sub(x: Sequence, y: Sequence) -> Vector:
    return tuple(frac(a) - frac(b) for a, b in zip(x, y))


def scale(c, x: Sequence) -> Vector:
    c = frac(c)
    return tuple(c * frac(a) for a in x)


def dot(x: Sequence, y: Sequence) -> Fraction:
    return sum((frac(a) * frac(b) for a, b in zip(x, y)), Fraction(0))


def mat_vec(m: Sequence[Sequence], x: Sequence) -> Vector:
    return tuple(dot(row, x) for row in m)


def vec_mat(x: Sequence, m: Sequence[Sequence]) -> Vector:
    """Row vector times matrix."""
    n = len(m[0])
    return tuple(sum((frac(x[i]) * frac(m[i][k]) for i in range(len(x))), Fraction(0))
                 for k in range(n))


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(dot(row, col) for col in cols) for row in a)


def transpose(m: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(frac(v) for v in col) for col in zip(*m))


def is_integral(x: Sequence) -> bool:
    return all(frac(v).denominator == 1 for v in x)


def as_ints(x: Sequence) -> tuple[int, ...]:
    out = []
    for v in x:
        v = frac(v)
        if v.denominator != 1:
            raise ValueError(f"non-integral entry {v}")
        out.append(v.numerator)
    return tuple(out)


def frac_mod1(x) -> Fraction:
    """Representative of x mod 1 in [0, 1)."""
    x = frac(x)
    return x - (x.numerator // x.denominator)


# ---------------------------------------------------------------------------
# sympy bridge
# ---------------------------------------------------------------------------

def to_sympy(m: Sequence[Sequence]) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(frac(v).numerator, frac(v).denominator)
                          for v in row] for row in m])


def from_sympy(m: sympy.Matrix) -> Matrix:
    return tuple(tuple(frac(m[i, j]) for j in range(m.cols)) for i in range(m.rows))


def inverse(m: Sequence[Sequence]) -> Matrix:
    return from_sympy(to_sympy(m).inv())


def determinant(m: Sequence[Sequence]) -> Fraction:
    return frac(to_sympy(m).det())


def rank(m: Sequence[Sequence]) -> int:
    if not m:
        return 0
    return int(to_sympy(m).rank())


def null_space(m: Sequence[Sequence]) -> list[Vector]:
    """Rational basis of {x : m x = 0}, each vector scaled to integers."""
    basis = []
    for v in to_sympy(m).nullspace():
        entries = [frac(e) for e in v]
        den = math.lcm(*[e.denominator for e in entries])
        ints = [int(e * den) for e in entries]
        g = math.gcd(*ints) or 1
        basis.append(vec(e // g for e in ints))
    return basis


def solve(m: Sequence[Sequence], rhs: Sequence) -> Vector:
    """Unique solution of m x = rhs."""
    sol = to_sympy(m).LUsolve(to_sympy([[v] for v in rhs]))
    return vec(sol[i, 0] for i in range(sol.rows))


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def frac_str(x) -> str:
    """``"p/q"`` (or ``"p"`` for integers), the report format for rationals."""
    x = frac(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def vec_str(x: Sequence) -> list[str]:
    return [frac_str(v) for v in x]


def parse_frac(text: str) -> Fraction:
    return Fraction(text.strip())
