"""Integer power series in noncommuting variables, truncated by total degree.

This is the workhorse behind free-nilpotent normal forms: substituting
X_i -> 1 + x_i sends a free-group word to a unit of Z<x_1..x_d>/(deg > c),
and the lowest-degree part of the image tracks the word's class in the
lower central series.  Monomials are tuples of 0-based letters; the empty
tuple is the constant term.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence


def general_binomial(e: int, k: int) -> int:
    """C(e, k) for arbitrary integer e (negative upper index allowed)."""
    if k < 0:
        return 0
    num = 1
    for t in range(k):
        num *= e - t
    den = 1
    for t in range(2, k + 1):
        den *= t
    return num // den


@dataclass(frozen=True)
class TruncatedSeries:
    d: int
    c: int
    coeffs: Mapping[tuple[int, ...], int]

    def is_one(self) -> bool:
        return all(v == 0 for k, v in self.coeffs.items() if k != ()) \
            and self.coeffs.get((), 0) == 1

    def homogeneous(self, degree: int) -> dict[tuple[int, ...], int]:
        return {k: v for k, v in self.coeffs.items()
                if len(k) == degree and v != 0}

    def constant(self) -> int:
        return self.coeffs.get((), 0)


def one(d: int, c: int) -> TruncatedSeries:
    return TruncatedSeries(d, c, {(): 1})


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    c = a.c
    out: dict[tuple[int, ...], int] = {}
    for k1, v1 in a.coeffs.items():
        if v1 == 0:
            continue
        room = c - len(k1)
        for k2, v2 in b.coeffs.items():
            if v2 == 0 or len(k2) > room:
                continue
            key = k1 + k2
            out[key] = out.get(key, 0) + v1 * v2
    return TruncatedSeries(a.d, c, out)


def inverse(a: TruncatedSeries) -> TruncatedSeries:
    """(1 + u)^-1 = 1 - u + u^2 - ...; requires constant term 1."""
    if a.constant() != 1:
        raise ValueError("can only invert series with constant term 1")
    u = TruncatedSeries(a.d, a.c, {k: -v for k, v in a.coeffs.items() if k != ()})
    acc = one(a.d, a.c)
    result = one(a.d, a.c)
    for _ in range(a.c):
        acc = mul(acc, u)
        result = add(result, acc)
    return result


def add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    out = dict(a.coeffs)
    for k, v in b.coeffs.items():
        out[k] = out.get(k, 0) + v
    return TruncatedSeries(a.d, a.c, out)


def power(a: TruncatedSeries, e: int) -> TruncatedSeries:
    """a**e by binary squaring; negative e via inverse."""
    if e < 0:
        return power(inverse(a), -e)
    result = one(a.d, a.c)
    base = a
    while e:
        if e & 1:
            result = mul(result, base)
        base = mul(base, base)
        e >>= 1
    return result


def generator_power_series(i: int, e: int, d: int, c: int) -> TruncatedSeries:
    """Image of X_i^e, i.e. (1 + x_i)^e, for any integer exponent e."""
    letter = i - 1
    coeffs = {tuple([letter] * k): general_binomial(e, k) for k in range(c + 1)}
    return TruncatedSeries(d, c, coeffs)


def series_of_syllables(syllables: Sequence[tuple[int, int]],
                        d: int, c: int) -> TruncatedSeries:
    acc = one(d, c)
    for var, exp in syllables:
        acc = mul(acc, generator_power_series(var, exp, d, c))
    return acc


# -- homogeneous Lie elements and exact linear solving ------------------------


def concat_product(a: dict[tuple[int, ...], int],
                   b: dict[tuple[int, ...], int]) -> dict[tuple[int, ...], int]:
    out: dict[tuple[int, ...], int] = {}
    for k1, v1 in a.items():
        for k2, v2 in b.items():
            key = k1 + k2
            out[key] = out.get(key, 0) + v1 * v2
    return {k: v for k, v in out.items() if v != 0}


def bracket(a: dict[tuple[int, ...], int],
            b: dict[tuple[int, ...], int]) -> dict[tuple[int, ...], int]:
    ab = concat_product(a, b)
    ba = concat_product(b, a)
    out = dict(ab)
    for k, v in ba.items():
        out[k] = out.get(k, 0) - v
    return {k: v for k, v in out.items() if v != 0}


class HomogeneousSolver:
    """Solves sum_j x_j * L_j = h exactly over Z for fixed Lie elements L_j.

    The L_j are homogeneous of one degree and Z-linearly independent; the
    elimination is done once (over Fraction) and each solve verifies its
    result by exact recombination, so a wrong answer cannot escape.
    """

    def __init__(self, columns: Sequence[dict[tuple[int, ...], int]]):
        self.columns = list(columns)
        monos = sorted({m for col in columns for m in col})
        self.mono_index = {m: t for t, m in enumerate(monos)}
        rows, cols = len(monos), len(columns)
        matrix = [[Fraction(columns[j].get(m, 0)) for j in range(cols)]
                  for m in monos]
        transform = [[Fraction(int(i == j)) for j in range(rows)]
                     for i in range(rows)]
        pivots: list[tuple[int, int]] = []
        r = 0
        for col in range(cols):
            pivot = next((i for i in range(r, rows) if matrix[i][col] != 0), None)
            if pivot is None:
                continue
            matrix[r], matrix[pivot] = matrix[pivot], matrix[r]
            transform[r], transform[pivot] = transform[pivot], transform[r]
            scale = matrix[r][col]
            matrix[r] = [v / scale for v in matrix[r]]
            transform[r] = [v / scale for v in transform[r]]
            for i in range(rows):
                if i != r and matrix[i][col] != 0:
                    f = matrix[i][col]
                    matrix[i] = [v - f * w for v, w in zip(matrix[i], matrix[r])]
                    transform[i] = [v - f * w for v, w in zip(transform[i], transform[r])]
            pivots.append((r, col))
            r += 1
        if len(pivots) != cols:
            raise AssertionError("basic commutator Lie elements are dependent")
        self.transform = transform
        self.pivots = pivots
        self.rank = r

    def solve(self, h: dict[tuple[int, ...], int]) -> list[int]:
        h = {k: v for k, v in h.items() if v != 0}
        if not all(m in self.mono_index for m in h):
            raise AssertionError("target outside the basic-commutator span")
        rows = len(self.mono_index)
        hvec = [0] * rows
        for m, v in h.items():
            hvec[self.mono_index[m]] = v
        y = [sum(trow[s] * hvec[s] for s in range(rows) if hvec[s] != 0)
             for trow in self.transform]
        x = [0] * len(self.columns)
        for r, col in self.pivots:
            val = y[r]
            if val.denominator != 1:
                raise AssertionError("non-integral solution for Lie element")
            x[col] = int(val)
        for r in range(self.rank, rows):
            if y[r] != 0:
                raise AssertionError("inconsistent Lie element system")
        check: dict[tuple[int, ...], int] = {}
        for j, coeff in enumerate(x):
            if coeff == 0:
                continue
            for m, v in self.columns[j].items():
                check[m] = check.get(m, 0) + coeff * v
        if {k: v for k, v in check.items() if v != 0} != h:
            raise AssertionError("Lie element recombination mismatch")
        return x
