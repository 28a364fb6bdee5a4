"""Finite groups as indexed element sets with full multiplication tables.

Conventions used throughout the package:
  * elements of a group of order n are the indices 0..n-1,
  * index 0 is always the identity (constructors relabel if needed),
  * tables are numpy arrays and are frozen after construction,
  * commutators are [a, b] = a^-1 b^-1 a b and nested commutators are
    left-nested: [g1, ..., g_{r+1}] = [[g1, ..., g_r], g_{r+1}].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    MalformedTable,
    NoIdentity,
    NoInverse,
    NotAssociative,
    OrderLimitExceeded,
)

DEFAULT_ORDER_CAP = 2000

# Above this order, from_multiplication_table samples associativity triples
# instead of checking all n^3 of them (see _check_associativity).
EXHAUSTIVE_ASSOC_LIMIT = 256
ASSOC_SAMPLES_PER_PAIR = 10


def _table_dtype(n: int):
    return np.int16 if n <= np.iinfo(np.int16).max else np.int32


class FiniteGroup:
    """A finite group tabulated on element indices 0..order-1.

    Instances are immutable after construction; the arrays are marked
    read-only and may be shared freely across threads.
    """

    __slots__ = ("order", "mult", "inv", "element_order", "label",
                 "element_names", "_abelian")

    def __init__(self, mult: np.ndarray, label: Optional[str] = None,
                 element_names: Optional[Sequence[str]] = None):
        n = mult.shape[0]
        self.order = n
        self.mult = mult
        inv = np.asarray((mult == 0).argmax(axis=1), dtype=mult.dtype)
        self.inv = inv
        self.element_order = _element_orders(mult)
        self.label = label
        self.element_names = tuple(element_names) if element_names else None
        self._abelian: Optional[bool] = None
        for arr in (self.mult, self.inv, self.element_order):
            arr.setflags(write=False)

    # -- basic operations ------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return int(self.mult[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inv[a])

    def power(self, g: int, e: int) -> int:
        """g**e by square-and-multiply; e may be any integer."""
        e %= int(self.element_order[g])
        result, base = 0, g
        while e:
            if e & 1:
                result = int(self.mult[result, base])
            base = int(self.mult[base, base])
            e >>= 1
        return result

    def commutator(self, a: int, b: int) -> int:
        m = self.mult
        return int(m[m[int(self.inv[a]), int(self.inv[b])], m[a, b]])

    def elements(self) -> range:
        return range(self.order)

    def is_abelian(self) -> bool:
        if self._abelian is None:
            self._abelian = bool(np.array_equal(self.mult, self.mult.T))
        return self._abelian

    def exponent(self) -> int:
        """lcm of all element orders (= exp_1)."""
        return math.lcm(*(int(o) for o in np.unique(self.element_order)))

    def name_of(self, g: int) -> str:
        if self.element_names is not None:
            return self.element_names[g]
        return str(g)

    def __repr__(self) -> str:
        label = self.label or "group"
        return f"FiniteGroup({label}, order={self.order})"


@dataclass(frozen=True)
class Subgroup:
    """A subgroup given by its sorted member indices in the parent."""

    parent: FiniteGroup
    members: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.members)

    def is_trivial(self) -> bool:
        return self.members == (0,)

    def __repr__(self) -> str:
        return f"Subgroup(order={len(self.members)} of {self.parent!r})"


@dataclass(frozen=True)
class ExpProfile:
    """The sequence exp_1(G), exp_2(G), ... of commutator-value exponents.

    ``values[r-1]`` is exp_r(G).  When ``set_stable`` is true the underlying
    value sets stabilized, so exp_r equals ``values[-1]`` for every larger r.
    """

    group: FiniteGroup
    values: tuple[int, ...]
    set_stable: bool

    def value_at(self, r: int) -> int:
        if r < 1:
            raise ValueError("r must be >= 1")
        if r <= len(self.values):
            return self.values[r - 1]
        if self.set_stable:
            return self.values[-1]
        raise ValueError(f"profile only computed up to r={len(self.values)}")


# -- construction helpers ------------------------------------------------


def _element_orders(mult: np.ndarray) -> np.ndarray:
    n = mult.shape[0]
    orders = np.zeros(n, dtype=np.int32)
    orders[0] = 1
    cur = np.arange(n)
    k = 1
    while (orders == 0).any():
        k += 1
        cur = mult[cur, np.arange(n)]
        hit = (cur == 0) & (orders == 0)
        orders[hit] = k
        if k > n:
            raise AssertionError("order computation did not terminate")
    return orders


def _check_associativity(mult: np.ndarray, force_exhaustive: bool) -> None:
    n = mult.shape[0]
    if n <= EXHAUSTIVE_ASSOC_LIMIT or force_exhaustive:
        idx = np.arange(n)
        left = mult[mult[:, :, None], idx[None, None, :]]
        right = mult[idx[:, None, None], mult[None, :, :]]
        bad = np.argwhere(left != right)
        if len(bad):
            raise NotAssociative(tuple(int(x) for x in bad[0]))
        return
    rng = np.random.default_rng(0)
    remaining = ASSOC_SAMPLES_PER_PAIR * n * n
    chunk = 4_000_000
    while remaining > 0:
        m = min(chunk, remaining)
        i, j, k = (rng.integers(0, n, size=m) for _ in range(3))
        mismatch = mult[mult[i, j], k] != mult[i, mult[j, k]]
        if mismatch.any():
            t = int(np.argmax(mismatch))
            raise NotAssociative((int(i[t]), int(j[t]), int(k[t])))
        remaining -= m


def from_multiplication_table(table: Sequence[Sequence[int]],
                              label: Optional[str] = None,
                              element_names: Optional[Sequence[str]] = None,
                              order_cap: int = DEFAULT_ORDER_CAP,
                              force_exhaustive: bool = False) -> FiniteGroup:
    """Validate an untrusted multiplication table and wrap it as a group.

    The identity is relocated to index 0 by swapping labels if necessary.
    Raises MalformedTable / NoIdentity / NoInverse / NotAssociative with the
    offending witness, or OrderLimitExceeded past ``order_cap``.
    """
    arr = np.asarray(table)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise MalformedTable(f"expected a nonempty square table, got shape {arr.shape}")
    n = arr.shape[0]
    if n > order_cap:
        raise OrderLimitExceeded(f"order {n} exceeds cap {order_cap}")
    if not np.issubdtype(arr.dtype, np.integer):
        raise MalformedTable(f"entries must be integers, got dtype {arr.dtype}")
    if arr.min() < 0 or arr.max() >= n:
        bad = np.argwhere((arr < 0) | (arr >= n))[0]
        raise MalformedTable(f"entry at {tuple(int(x) for x in bad)} out of range 0..{n - 1}")
    mult = arr.astype(_table_dtype(n))

    idx = np.arange(n)
    ident_rows = np.nonzero((mult == idx[None, :]).all(axis=1)
                            & (mult.T == idx[None, :]).all(axis=1))[0]
    if len(ident_rows) == 0:
        raise NoIdentity("no two-sided identity element in table")
    e = int(ident_rows[0])
    names = list(element_names) if element_names is not None else None
    if e != 0:
        tau = idx.copy()
        tau[0], tau[e] = e, 0
        mult = tau[mult[tau[:, None], tau[None, :]]].astype(mult.dtype)
        if names is not None:
            names[0], names[e] = names[e], names[0]

    has_left = (mult == 0).any(axis=1)
    has_right = (mult == 0).any(axis=0)
    two_sided = has_left & has_right & ((mult == 0).argmax(axis=1) == (mult.T == 0).argmax(axis=1))
    if not two_sided.all():
        raise NoInverse(int(np.argmin(two_sided)))

    _check_associativity(mult, force_exhaustive)
    return FiniteGroup(mult, label=label, element_names=names)


def _trusted_group(mult: np.ndarray, label: Optional[str] = None,
                   element_names: Optional[Sequence[str]] = None) -> FiniteGroup:
    """Wrap a table built by a constructor whose correctness is structural."""
    return FiniteGroup(mult, label=label, element_names=element_names)


# -- permutation groups ---------------------------------------------------


def _perm_compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    # (p * q)(x) = p(q(x))
    return tuple(p[q[x]] for x in range(len(p)))


def perm_cycle_string(perm: tuple[int, ...]) -> str:
    """Cycle notation on points 1..m, identity printed as ``()``."""
    m = len(perm)
    seen = [False] * m
    parts = []
    for start in range(m):
        if seen[start] or perm[start] == start:
            seen[start] = True
            continue
        cycle = [start]
        seen[start] = True
        nxt = perm[start]
        while nxt != start:
            cycle.append(nxt)
            seen[nxt] = True
            nxt = perm[nxt]
        parts.append("(" + " ".join(str(x + 1) for x in cycle) + ")")
    return "".join(parts) if parts else "()"


def from_permutation_generators(generators: Sequence[Sequence[int]],
                                label: Optional[str] = None,
                                order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Tabulate the group generated by permutations of {1..m}.

    Each generator is the image sequence (g(1), ..., g(m)).  Elements are
    indexed by breadth-first closure from the identity, multiplying by the
    generators in the given order, which makes the indexing deterministic.
    """
    if not generators:
        return _trusted_group(np.zeros((1, 1), dtype=np.int16),
                              label=label or "trivial", element_names=["()"])
    m = len(generators[0])
    gens: list[tuple[int, ...]] = []
    for g in generators:
        if len(g) != m:
            raise ValueError("generators must permute the same point set")
        img = tuple(int(x) - 1 for x in g)
        if sorted(img) != list(range(m)):
            raise ValueError(f"not a permutation of 1..{m}: {tuple(g)}")
        gens.append(img)

    identity = tuple(range(m))
    index = {identity: 0}
    elements = [identity]
    frontier = [identity]
    while frontier:
        new_frontier = []
        for p in frontier:
            for s in gens:
                q = _perm_compose(p, s)
                if q not in index:
                    if len(elements) >= order_cap:
                        raise OrderLimitExceeded(
                            f"closure exceeds order cap {order_cap}")
                    index[q] = len(elements)
                    elements.append(q)
                    new_frontier.append(q)
        frontier = new_frontier

    n = len(elements)
    mult = np.empty((n, n), dtype=_table_dtype(n))
    for i, p in enumerate(elements):
        row = mult[i]
        for j, q in enumerate(elements):
            row[j] = index[_perm_compose(p, q)]
    names = [perm_cycle_string(p) for p in elements]
    return _trusted_group(mult, label=label, element_names=names)


# -- unitriangular groups --------------------------------------------------


def unitriangular_group(k: int, p: int,
                        order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Upper unitriangular k-by-k matrices over the field with p elements.

    Order p^(k(k-1)/2); nilpotent of class exactly k-1.  Used as the
    verification oracle group for normal-form soundness tests, so the
    construction is vectorized to stay usable up to order ~20000.
    """
    if k < 2:
        raise ValueError("matrix size k must be >= 2")
    if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"p must be prime, got {p}")
    positions = [(i, j) for i in range(k) for j in range(i + 1, k)]
    m = len(positions)
    n = p ** m
    if n > order_cap:
        raise OrderLimitExceeded(f"order {n} exceeds cap {order_cap}")
    pos_index = {pos: t for t, pos in enumerate(positions)}
    # Mixed-radix digits, first position most significant; identity -> 0.
    weights = [p ** (m - 1 - t) for t in range(m)]
    digits = np.empty((n, m), dtype=np.int8)
    rem = np.arange(n)
    for t in range(m):
        digits[:, t] = rem // weights[t]
        rem = rem % weights[t]

    dtype = _table_dtype(n)
    mult = np.empty((n, n), dtype=dtype)
    chunk = max(1, 4_000_000 // n)
    db = digits
    for start in range(0, n, chunk):
        da = digits[start:start + chunk]
        acc = np.zeros((da.shape[0], n), dtype=np.int64)
        for t, (i, j) in enumerate(positions):
            c = da[:, t, None].astype(np.int32) + db[None, :, t]
            for s in range(i + 1, j):
                c = c + da[:, pos_index[(i, s)], None].astype(np.int32) \
                      * db[None, :, pos_index[(s, j)]]
            acc = acc * p + (c % p)
        mult[start:start + chunk] = acc.astype(dtype)
    return _trusted_group(mult, label=f"unitriangular:{k}:{p}")


# -- invariants ------------------------------------------------------------


def nested_commutator(G: FiniteGroup, gs: Sequence[int]) -> int:
    """Left-nested commutator [g1, ..., gr]; r = 1 returns g1."""
    if not gs:
        raise ValueError("need at least one element")
    acc = int(gs[0])
    for g in gs[1:]:
        acc = G.commutator(acc, int(g))
    return acc


def _commutator_value_step(G: FiniteGroup, values: np.ndarray) -> np.ndarray:
    """{[s, g] : s in values, g in G} as a sorted unique index array."""
    n = G.order
    mult, inv = G.mult, G.inv
    everyone = np.arange(n)
    out = []
    chunk = max(1, 4_000_000 // n)
    for start in range(0, len(values), chunk):
        s = values[start:start + chunk]
        left = mult[inv[s][:, None], inv[everyone][None, :]]
        right = mult[s[:, None], everyone[None, :]]
        out.append(np.unique(mult[left, right]))
    return np.unique(np.concatenate(out)) if out else np.array([0])


def _value_set_levels(G: FiniteGroup, r_max: int) -> list[np.ndarray]:
    """Value sets S_1 = G, S_{r+1} = {[s, g]}, computed up to r_max levels."""
    levels = [np.arange(G.order)]
    while len(levels) < r_max:
        levels.append(_commutator_value_step(G, levels[-1]))
    return levels


def _lcm_of_orders(G: FiniteGroup, values: np.ndarray) -> int:
    return math.lcm(*(int(o) for o in np.unique(G.element_order[values])))


def exp_r(G: FiniteGroup, r: int) -> int:
    """lcm of the orders of all r-fold nested commutator values.

    Computed by iterating the value-set recursion, never by enumerating
    G^r: cost O(|G| * |S_r|) per level.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    return _lcm_of_orders(G, _value_set_levels(G, r)[-1])


def exp_profile(G: FiniteGroup, r_max: Optional[int] = None) -> ExpProfile:
    """exp_1..exp_r, extended until the value sets stabilize (or r_max)."""
    values = []
    level = np.arange(G.order)
    stable = False
    r = 0
    while True:
        r += 1
        values.append(_lcm_of_orders(G, level))
        if r_max is not None and r >= r_max:
            break
        nxt = _commutator_value_step(G, level)
        if len(nxt) == len(level) and bool((nxt == level).all()):
            stable = True
            break
        level = nxt
    return ExpProfile(group=G, values=tuple(values), set_stable=stable)


def subgroup_closure(G: FiniteGroup, generators: Iterable[int]) -> Subgroup:
    """The subgroup generated by ``generators`` (breadth-first closure)."""
    n = G.order
    mult = G.mult
    gens = np.unique(np.asarray(list(generators) + [0], dtype=np.int64))
    member = np.zeros(n, dtype=bool)
    member[gens] = True
    frontier = gens
    while len(frontier):
        prods = np.unique(mult[frontier[:, None], gens[None, :]])
        new = prods[~member[prods]]
        member[new] = True
        frontier = new
    return Subgroup(parent=G, members=tuple(int(x) for x in np.nonzero(member)[0]))


def lower_central_series(G: FiniteGroup) -> list[Subgroup]:
    """gamma_1 = G, gamma_{i+1} = <[x, y] : x in gamma_i, y in G>.

    The list stops at the first repeat, which is included once.
    """
    series = [Subgroup(parent=G, members=tuple(range(G.order)))]
    while True:
        current = np.asarray(series[-1].members, dtype=np.int64)
        values = _commutator_value_step(G, current)
        nxt = subgroup_closure(G, values)
        if nxt.members == series[-1].members:
            break
        series.append(nxt)
    return series


def nilpotency_class(G: FiniteGroup) -> tuple[bool, Optional[int]]:
    """(True, c) when the lower central series hits 1, else (False, None)."""
    series = lower_central_series(G)
    if series[-1].is_trivial():
        return True, len(series) - 1
    return False, None
