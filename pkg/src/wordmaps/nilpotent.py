"""Formal commutators, Hall bases, and free-nilpotent normal forms.

A formal d-commutator is a binary tree with leaves labeled 1..d; its weight
is the leaf count.  The Hall basis of basic commutators gives every element
of the free nilpotent group of class c a unique exponent vector, which is
what ``normal_form`` computes.

Exponent extraction works by substituting X_i -> 1 + x_i into the word in
the degree-truncated series ring and peeling one weight at a time: the
lowest surviving homogeneous part is a Z-combination of the Lie elements of
the weight-w basic commutators, the combination is solved exactly, and the
corresponding basis prefix is divided out.  This terminates in c rounds
whatever the exponents are, so huge collected exponents cost log, not
linear, time.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

from . import series
from .errors import ClassOutOfSupportedRange, EnumerationCapExceeded
from .groups import FiniteGroup
from .words import (
    Word,
    commutator_word,
    concat,
    evaluate,
    generator_word,
    identity_word,
    word_power,
)

DEFAULT_ENUMERATION_CAP = 1_000_000
DEFAULT_CLASS_LIMIT = 4


@dataclass(frozen=True)
class FormalCommutator:
    """leaf(i) or pair(left, right); equality and hashing are syntactic."""

    weight: int
    index: Optional[int] = None
    left: Optional["FormalCommutator"] = None
    right: Optional["FormalCommutator"] = None

    def is_leaf(self) -> bool:
        return self.index is not None

    def __str__(self) -> str:
        if self.is_leaf():
            return str(self.index)
        return f"[{self.left},{self.right}]"


def leaf(i: int) -> FormalCommutator:
    if i < 1:
        raise ValueError("leaf labels start at 1")
    return FormalCommutator(weight=1, index=i)


def pair(left: FormalCommutator, right: FormalCommutator) -> FormalCommutator:
    return FormalCommutator(weight=left.weight + right.weight,
                            left=left, right=right)


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def formal_commutator_count(d: int, c: int) -> int:
    """Closed form: weight-w trees are full binary trees with w labeled
    leaves, Cat(w-1) * d^w of them; summed over w = 1..c."""
    return sum(catalan(w - 1) * d ** w for w in range(1, c + 1))


def enumerate_formal_commutators(d: int, c: int,
                                 cap: int = DEFAULT_ENUMERATION_CAP
                                 ) -> list[FormalCommutator]:
    """All formal d-commutators of weight <= c, by weight then recursively."""
    if d < 0 or c < 1:
        raise ValueError("need d >= 0 and c >= 1")
    expected = formal_commutator_count(d, c)
    if expected > cap:
        raise EnumerationCapExceeded(
            f"{expected} formal commutators exceed cap {cap}")
    by_weight: list[list[FormalCommutator]] = [[]]
    by_weight.append([leaf(i) for i in range(1, d + 1)])
    for w in range(2, c + 1):
        level = []
        for a in range(1, w):
            for l in by_weight[a]:
                for r in by_weight[w - a]:
                    level.append(pair(l, r))
        by_weight.append(level)
    return [fc for w in range(1, c + 1) for fc in by_weight[w]]


def count_formal_commutators(d: int, c: int,
                             cap: int = DEFAULT_ENUMERATION_CAP) -> int:
    """Enumeration count, asserted against the closed-form oracle."""
    count = len(enumerate_formal_commutators(d, c, cap=cap))
    expected = formal_commutator_count(d, c)
    if count != expected:
        raise AssertionError(
            f"enumeration gives {count} but closed form gives {expected}")
    return count


# -- Witt / necklace counts ----------------------------------------------------


def _mobius(n: int) -> int:
    if n == 1:
        return 1
    result = 1
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


def witt_count(d: int, w: int) -> int:
    """(1/w) * sum_{e | w} mu(e) d^(w/e): the rank of the degree-w piece of
    the free Lie ring on d generators; the per-weight Hall basis size."""
    if w < 1:
        raise ValueError("weight must be >= 1")
    total = sum(_mobius(e) * d ** (w // e) for e in range(1, w + 1) if w % e == 0)
    assert total % w == 0
    return total // w


# -- Hall basis ----------------------------------------------------------------


class HallBasis:
    """The ordered tuple of basic commutators of weight <= c on d letters.

    A pair [a, b] is basic iff a and b are basic, b < a in basis order, and
    when a = [a1, a2] additionally a2 <= b.  Entries are ordered by weight,
    then by construction order, which pins the numbering N_{d,c} reproducibly.
    """

    def __init__(self, d: int, c: int, commutators: Sequence[FormalCommutator]):
        self.d = d
        self.c = c
        self.commutators = tuple(commutators)
        self._position = {fc: t for t, fc in enumerate(self.commutators)}

    @property
    def size(self) -> int:
        return len(self.commutators)

    def position(self, fc: FormalCommutator) -> int:
        return self._position[fc]

    def __contains__(self, fc: FormalCommutator) -> bool:
        return fc in self._position

    def entries_of_weight(self, w: int) -> list[FormalCommutator]:
        return [fc for fc in self.commutators if fc.weight == w]

    def __repr__(self) -> str:
        return f"HallBasis(d={self.d}, c={self.c}, size={self.size})"


def hall_basis(d: int, c: int, cap: int = DEFAULT_ENUMERATION_CAP) -> HallBasis:
    if d < 0 or c < 1:
        raise ValueError("need d >= 0 and c >= 1")
    basis: list[FormalCommutator] = [leaf(i) for i in range(1, d + 1)]
    position = {fc: t for t, fc in enumerate(basis)}
    for w in range(2, c + 1):
        new: list[FormalCommutator] = []
        for alpha in basis:
            for beta in basis:
                if alpha.weight + beta.weight != w:
                    continue
                if position[beta] >= position[alpha]:
                    continue
                if not alpha.is_leaf() and position[alpha.right] > position[beta]:
                    continue
                new.append(pair(alpha, beta))
                if len(basis) + len(new) > cap:
                    raise EnumerationCapExceeded(
                        f"Hall basis for (d={d}, c={c}) exceeds cap {cap}")
        for fc in new:
            position[fc] = len(basis)
            basis.append(fc)
    return HallBasis(d, c, basis)


def commutator_as_word(fc: FormalCommutator, d: Optional[int] = None) -> Word:
    """X_gamma: leaves map to generators, pairs expand to [X_a, X_b]."""
    if d is None:
        d = max_leaf(fc)
    if fc.is_leaf():
        return generator_word(fc.index, d)
    return commutator_word(commutator_as_word(fc.left, d),
                           commutator_as_word(fc.right, d))


def max_leaf(fc: FormalCommutator) -> int:
    if fc.is_leaf():
        return fc.index
    return max(max_leaf(fc.left), max_leaf(fc.right))


@dataclass(frozen=True)
class NormalForm:
    """Exponent vector over a Hall basis; the element is the ordered product
    of basis words raised to these exponents."""

    basis: HallBasis
    exponents: tuple[int, ...]

    def __post_init__(self):
        if len(self.exponents) != self.basis.size:
            raise ValueError("exponent vector length differs from basis size")

    def is_identity(self) -> bool:
        return all(e == 0 for e in self.exponents)


# -- normal-form engine --------------------------------------------------------


def _lie_element(fc: FormalCommutator) -> dict[tuple[int, ...], int]:
    if fc.is_leaf():
        return {(fc.index - 1,): 1}
    return series.bracket(_lie_element(fc.left), _lie_element(fc.right))


class _NormalFormEngine:
    def __init__(self, d: int, c: int):
        self.d = d
        self.c = c
        self.basis = hall_basis(d, c)
        self._base_series: dict[int, series.TruncatedSeries] = {}
        self._solvers: dict[int, series.HomogeneousSolver] = {}
        for w in range(1, c + 1):
            entries = self.basis.entries_of_weight(w)
            if entries:
                self._solvers[w] = series.HomogeneousSolver(
                    [_lie_element(fc) for fc in entries])

    def _series_of_basis_power(self, pos: int, e: int) -> series.TruncatedSeries:
        base = self._base_series.get(pos)
        if base is None:
            word = commutator_as_word(self.basis.commutators[pos], self.d)
            base = series.series_of_syllables(word.syllables, self.d, self.c)
            self._base_series[pos] = base
        return series.power(base, e)

    def exponents_of_word(self, w: Word) -> tuple[int, ...]:
        s = series.series_of_syllables(w.syllables, self.d, self.c)
        exponents = [0] * self.basis.size
        offset = 0
        for weight in range(1, self.c + 1):
            entries = self.basis.entries_of_weight(weight)
            if not entries:
                continue
            h = s.homogeneous(weight)
            if h:
                ks = self._solvers[weight].solve(h)
            else:
                ks = [0] * len(entries)
            prefix = series.one(self.d, self.c)
            for t, k in enumerate(ks):
                exponents[offset + t] = k
                if k:
                    prefix = series.mul(
                        prefix, self._series_of_basis_power(offset + t, k))
            if any(ks):
                s = series.mul(series.inverse(prefix), s)
            offset += len(entries)
        if not s.is_one():
            raise AssertionError("normal-form peeling left a nontrivial tail")
        return tuple(exponents)


_ENGINES: dict[tuple[int, int], _NormalFormEngine] = {}


def _engine(d: int, c: int) -> _NormalFormEngine:
    key = (d, c)
    engine = _ENGINES.get(key)
    if engine is None:
        engine = _NormalFormEngine(d, c)
        _ENGINES[key] = engine
    return engine


def normal_form(w: Word, d: int, c: int, *,
                class_limit: int = DEFAULT_CLASS_LIMIT) -> NormalForm:
    """Exponent vector of the image of w in the free nilpotent group of
    class c on d generators.

    Raises ClassOutOfSupportedRange for c beyond ``class_limit`` (default 4);
    raising the limit is supported but warns, since cost grows like d^c.
    """
    if c < 1:
        raise ValueError("class must be >= 1")
    if c > class_limit:
        raise ClassOutOfSupportedRange(
            f"class {c} exceeds the configured limit {class_limit}")
    if c > DEFAULT_CLASS_LIMIT:
        warnings.warn(f"normal forms at class {c} may be slow", stacklevel=2)
    w = w.with_arity(d)
    return NormalForm(basis=_engine(d, c).basis,
                      exponents=_engine(d, c).exponents_of_word(w))


def normal_form_to_word(nf: NormalForm) -> Word:
    """The concrete reduced word prod_j (X_{alpha_j})^{k_j} in basis order."""
    d = nf.basis.d
    acc = identity_word(d)
    for fc, k in zip(nf.basis.commutators, nf.exponents):
        if k:
            acc = concat(acc, word_power(commutator_as_word(fc, d), k))
    return acc


def evaluate_normal_form(nf: NormalForm, G: FiniteGroup,
                         args: Sequence[int]) -> int:
    """Evaluate prod_j (X_{alpha_j})^{k_j} at args without materializing the
    repeated word: each factor is evaluated once and powered in G."""
    d = nf.basis.d
    if len(args) != d:
        raise ValueError(f"need {d} arguments, got {len(args)}")
    acc = 0
    for fc, k in zip(nf.basis.commutators, nf.exponents):
        if k:
            val = evaluate(commutator_as_word(fc, d), G, args)
            acc = G.mul(acc, G.power(val, k))
    return acc
