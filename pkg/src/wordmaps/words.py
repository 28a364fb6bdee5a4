"""Reduced words in F(X_1,...,X_d) and their induced maps on finite groups.

A word is a sequence of syllables (variable, exponent) with nonzero
exponents and no two adjacent syllables on the same variable.  Word maps
G^d -> G are materialized as flat tables indexed mixed-radix with g_1 least
significant: index(g_1, ..., g_d) = sum_i g_i * |G|^(i-1).  That encoding is
fixed so tables are comparable byte-for-byte across runs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import TableCapExceeded, VariableOutOfRange, WordSyntaxError
from .groups import FiniteGroup

DEFAULT_TABLE_CAP = 10_000_000


@dataclass(frozen=True)
class Word:
    """A freely reduced word; d is the ambient number of variables."""

    d: int
    syllables: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prev = None
        for var, exp in self.syllables:
            if not 1 <= var <= self.d:
                raise VariableOutOfRange(f"variable x{var} outside 1..{self.d}")
            if exp == 0:
                raise ValueError("zero exponent in reduced word")
            if var == prev:
                raise ValueError("adjacent syllables share a variable")
            prev = var

    def is_identity(self) -> bool:
        return not self.syllables

    def syllable_count(self) -> int:
        return len(self.syllables)

    def with_arity(self, d: int) -> "Word":
        """The same word viewed in F(X_1,...,X_d) for a larger d."""
        if d < self.d:
            max_used = max((v for v, _ in self.syllables), default=0)
            if d < max_used:
                raise VariableOutOfRange(
                    f"cannot shrink arity below used variable x{max_used}")
        return Word(d=d, syllables=self.syllables) if d != self.d else self

    def __str__(self) -> str:
        if not self.syllables:
            return "1"
        return " ".join(f"x{v}" if e == 1 else f"x{v}^{e}"
                        for v, e in self.syllables)


def identity_word(d: int = 0) -> Word:
    return Word(d=d, syllables=())


def generator_word(i: int, d: Optional[int] = None) -> Word:
    return Word(d=d if d is not None else i, syllables=((i, 1),))


def reduce_word(raw: Iterable[tuple[int, int]], d: Optional[int] = None) -> Word:
    """Freely reduce a raw syllable sequence (zero exponents permitted).

    Reduction is confluent, so the merge order does not matter; a single
    left-to-right pass with a stack produces the canonical form.
    """
    items = list(raw)
    max_var = max((v for v, _ in items), default=0)
    if d is None:
        d = max_var
    stack: list[list[int]] = []
    for var, exp in items:
        if not 1 <= var <= d:
            raise VariableOutOfRange(f"variable x{var} outside 1..{d}")
        if exp == 0:
            continue
        if stack and stack[-1][0] == var:
            stack[-1][1] += exp
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([var, exp])
    return Word(d=d, syllables=tuple((v, e) for v, e in stack))


def concat(u: Word, v: Word) -> Word:
    d = max(u.d, v.d)
    return reduce_word(list(u.syllables) + list(v.syllables), d=d)


def invert(u: Word) -> Word:
    return Word(d=u.d, syllables=tuple((v, -e) for v, e in reversed(u.syllables)))


def word_power(u: Word, e: int) -> Word:
    """u**e by binary squaring over reduced concatenation."""
    if e < 0:
        return word_power(invert(u), -e)
    result = identity_word(u.d)
    base = u
    while e:
        if e & 1:
            result = concat(result, base)
        base = concat(base, base)
        e >>= 1
    return result


def commutator_word(u: Word, v: Word) -> Word:
    """[u, v] = u^-1 v^-1 u v, reduced."""
    return concat(concat(invert(u), invert(v)), concat(u, v))


def nested_commutator_word(indices: Sequence[int], d: Optional[int] = None) -> Word:
    """[X_{i_1}, ..., X_{i_r}], left-nested; r = 1 gives the single syllable."""
    if not indices:
        raise ValueError("need at least one variable index")
    if d is None:
        d = max(indices)
    acc = generator_word(indices[0], d)
    for i in indices[1:]:
        acc = commutator_word(acc, generator_word(i, d))
    return acc


def evaluate(w: Word, G: FiniteGroup, args: Sequence[int]) -> int:
    """Substitute args[i] for X_{i+1} and multiply out in G."""
    if len(args) != w.d:
        raise ValueError(f"word has arity {w.d}, got {len(args)} arguments")
    acc = 0
    for var, exp in w.syllables:
        acc = G.mul(acc, G.power(int(args[var - 1]), exp))
    return acc


@dataclass(frozen=True)
class WordMapTable:
    """The function G^d -> G induced by a word, as a flat value table."""

    group: FiniteGroup
    d: int
    values: np.ndarray

    def __post_init__(self):
        self.values.setflags(write=False)

    def key(self) -> bytes:
        return self.values.tobytes()

    def __eq__(self, other) -> bool:
        if not isinstance(other, WordMapTable):
            return NotImplemented
        return (self.group is other.group and self.d == other.d
                and np.array_equal(self.values, other.values))

    def __hash__(self) -> int:
        return hash((id(self.group), self.d, self.key()))

    def value_at(self, args: Sequence[int]) -> int:
        n = self.group.order
        idx = 0
        for g in reversed(args):
            idx = idx * n + int(g)
        return int(self.values[idx])


def argument_digits(n: int, d: int, size: Optional[int] = None) -> list[np.ndarray]:
    """Digit arrays D[i][idx] = i-th coordinate of the idx-th argument tuple."""
    if size is None:
        size = n ** d
    idx = np.arange(size, dtype=np.int64)
    return [(idx // n ** i) % n for i in range(d)]


def word_map_table(w: Word, G: FiniteGroup, d: Optional[int] = None,
                   table_cap: int = DEFAULT_TABLE_CAP) -> WordMapTable:
    """Materialize w_G over all |G|^d arguments in mixed-radix order."""
    if d is None:
        d = w.d
    w = w.with_arity(d)
    n = G.order
    size = n ** d
    if size > table_cap:
        raise TableCapExceeded(f"|G|^d = {size} exceeds table cap {table_cap}")
    digits = argument_digits(n, d, size)
    exp = G.exponent()
    powers = np.empty((exp + 1, n), dtype=np.int32)
    powers[0] = 0
    rng = np.arange(n)
    for k in range(exp):
        powers[k + 1] = G.mult[powers[k], rng]
    values = np.zeros(size, dtype=np.int32)
    for var, e in w.syllables:
        syl = powers[e % exp][digits[var - 1]] if exp else np.zeros(size, np.int32)
        values = G.mult[values, syl].astype(np.int32)
    return WordMapTable(group=G, d=d, values=values)


# -- word text syntax ---------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(x\d+|\^-?\d+|\[|\]|,)")


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise WordSyntaxError(f"unexpected input at {text[pos:]!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise WordSyntaxError("unexpected end of word expression")
        self.pos += 1
        return tok

    def parse_product(self, stop: tuple[str, ...]) -> list[tuple[int, int]]:
        out: list[tuple[int, int]] = []
        while self.peek() is not None and self.peek() not in stop:
            out.extend(self.parse_factor())
        return out

    def parse_factor(self) -> list[tuple[int, int]]:
        tok = self.take()
        if tok.startswith("x"):
            base = [(int(tok[1:]), 1)]
        elif tok == "[":
            left = self.parse_product((",",))
            if self.take() != ",":
                raise WordSyntaxError("expected ',' inside commutator brackets")
            right = self.parse_product(("]",))
            if self.take() != "]":
                raise WordSyntaxError("expected ']' closing commutator")
            lw = reduce_word(left, d=_max_var(left + right))
            rw = reduce_word(right, d=lw.d)
            base = list(commutator_word(lw, rw).syllables)
        else:
            raise WordSyntaxError(f"unexpected token {tok!r}")
        nxt = self.peek()
        if nxt is not None and nxt.startswith("^"):
            self.take()
            e = int(nxt[1:])
            base_word = reduce_word(base, d=_max_var(base))
            base = list(word_power(base_word, e).syllables)
        return base


def _max_var(syllables: list[tuple[int, int]]) -> int:
    return max((v for v, _ in syllables), default=0)


def parse_word(text: str, d: Optional[int] = None) -> Word:
    """Parse word syntax like ``x1^2 [x1, x2]^3`` into a reduced Word.

    Brackets denote commutators of subexpressions and may nest.
    """
    parser = _Parser(_tokenize(text))
    syllables = parser.parse_product(stop=())
    if parser.peek() is not None:
        raise WordSyntaxError(f"trailing tokens from {parser.peek()!r}")
    max_var = _max_var(syllables)
    if d is not None and max_var > d:
        raise VariableOutOfRange(f"word uses x{max_var} but arity is {d}")
    return reduce_word(syllables, d=d if d is not None else max_var)
