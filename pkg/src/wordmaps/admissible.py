"""Admissible functions and their product-of-commutators words.

An assignment f from nonempty subsets of {1..d} to non-negative integers is
admissible for G when f(M) < exp_r(G) for every r-element subset M.  Each
one yields the word

    w_f = prod over r = 1..d, then subsets {i_1 < ... < i_r} in
          lexicographic order, of [X_{i_1}, ..., X_{i_r}] ^ f({...}),

and distinct admissible functions yield distinct word maps; the witness
construction below produces an argument tuple on which two given word maps
disagree.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Iterator, Mapping, Optional

from .errors import NotDistinct, EnumerationCapExceeded, WordmapsError
from .groups import ExpProfile, FiniteGroup, exp_profile, nested_commutator
from .words import Word, concat, identity_word, nested_commutator_word, word_power

DEFAULT_ENUMERATION_CAP = 1_000_000


@lru_cache(maxsize=None)
def canonical_subsets(d: int) -> tuple[tuple[int, ...], ...]:
    """Nonempty subsets of {1..d}, ordered by size then lexicographically."""
    out: list[tuple[int, ...]] = []
    for r in range(1, d + 1):
        out.extend(combinations(range(1, d + 1), r))
    return tuple(out)


@dataclass(frozen=True)
class AdmissibleFunction:
    """Values aligned with canonical_subsets(d)."""

    d: int
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != len(canonical_subsets(self.d)):
            raise ValueError("value vector does not match subset count")
        if any(v < 0 for v in self.values):
            raise ValueError("admissible functions take non-negative values")

    @staticmethod
    def from_assignment(d: int, assignment: Mapping[Iterable[int], int]
                        ) -> "AdmissibleFunction":
        normalized = {tuple(sorted(k)): v for k, v in assignment.items()}
        subsets = canonical_subsets(d)
        missing = [s for s in subsets if s not in normalized]
        if missing:
            raise ValueError(f"assignment missing subsets {missing}")
        if len(normalized) != len(subsets):
            extra = set(normalized) - set(subsets)
            raise ValueError(f"assignment has extra subsets {sorted(extra)}")
        return AdmissibleFunction(d=d, values=tuple(normalized[s] for s in subsets))

    def value(self, subset: Iterable[int]) -> int:
        key = tuple(sorted(subset))
        return self.values[canonical_subsets(self.d).index(key)]

    def items(self) -> Iterator[tuple[tuple[int, ...], int]]:
        return zip(canonical_subsets(self.d), self.values)


def is_admissible(f: AdmissibleFunction, G: FiniteGroup,
                  profile: Optional[ExpProfile] = None) -> bool:
    """Strict bound f(M) < exp_{|M|}(G) on every subset."""
    if profile is None:
        profile = exp_profile(G, r_max=f.d if f.d else 1)
    return all(v < profile.value_at(len(s)) for s, v in f.items())


def admissible_count(G: FiniteGroup, d: int,
                     profile: Optional[ExpProfile] = None) -> int:
    """prod_{r=1}^d exp_r(G)^C(d,r): the number of admissible functions."""
    if profile is None:
        profile = exp_profile(G, r_max=d if d else 1)
    count = 1
    for s in canonical_subsets(d):
        count *= profile.value_at(len(s))
    return count


def enumerate_admissible(G: FiniteGroup, d: int,
                         cap: int = DEFAULT_ENUMERATION_CAP
                         ) -> Iterator[AdmissibleFunction]:
    """All admissible functions, odometer order over the canonical subsets."""
    profile = exp_profile(G, r_max=d if d else 1)
    total = admissible_count(G, d, profile)
    if total > cap:
        raise EnumerationCapExceeded(
            f"{total} admissible functions exceed cap {cap}")
    ranges = [range(profile.value_at(len(s))) for s in canonical_subsets(d)]
    for values in product(*ranges):
        yield AdmissibleFunction(d=d, values=values)


def build_admissible_word(f: AdmissibleFunction) -> Word:
    """w_f: factors ordered subsets-by-size then lexicographically, each a
    nested commutator word raised to f's value; zero exponents drop out."""
    acc = identity_word(f.d)
    for subset, value in f.items():
        if value:
            factor = word_power(nested_commutator_word(subset, d=f.d), value)
            acc = concat(acc, factor)
    return acc


@lru_cache(maxsize=32)
def _witness_levels(G: FiniteGroup, r: int) -> dict[int, tuple[int, ...]]:
    """One representative argument tuple per value in the level-r value set
    S_r = {[g_1, ..., g_r]}; built by the value-set recursion."""
    if r == 1:
        return {g: (g,) for g in range(G.order)}
    prev = _witness_levels(G, r - 1)
    out: dict[int, tuple[int, ...]] = {}
    for v, tup in prev.items():
        for g in range(G.order):
            val = G.commutator(v, g)
            if val not in out:
                out[val] = tup + (g,)
    return out


def distinctness_witness(f: AdmissibleFunction, g: AdmissibleFunction,
                         G: FiniteGroup) -> tuple[int, ...]:
    """An argument tuple where the word maps of w_f and w_g differ.

    Per the underlying construction: take the first subset M (smallest size,
    then lexicographic) where f and g disagree, pick elements whose nested
    commutator to the power f(M)-g(M) is nontrivial, and set all other
    coordinates to the identity.
    """
    if f.d != g.d:
        raise ValueError("functions have different arities")
    if f.values == g.values:
        raise NotDistinct("admissible functions are equal")
    subset, a = next((s, fv - gv) for (s, fv), (_, gv)
                     in zip(f.items(), g.items()) if fv != gv)
    r = len(subset)
    for v, tup in _witness_levels(G, r).items():
        if G.power(v, a) != 0:
            found = tup
            break
    else:
        found = _exhaustive_witness_scan(G, r, a)
    witness = [0] * f.d
    for var, element in zip(subset, found):
        witness[var - 1] = element
    return tuple(witness)


def _exhaustive_witness_scan(G: FiniteGroup, r: int, a: int) -> tuple[int, ...]:
    """Raw G^r fallback; only viable for small r, and only reachable if the
    value-set scan found nothing (the bound exp_r > |a| says it must exist)."""
    if r > 3:
        raise WordmapsError(f"no witness found by value-set scan at r={r}")
    for tup in product(range(G.order), repeat=r):
        if G.power(nested_commutator(G, tup), a) != 0:
            return tup
    raise WordmapsError(
        f"no witness exists: exponent {a} annihilates all level-{r} values")
