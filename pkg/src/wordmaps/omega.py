"""Exact word-map counts by subgroup closure, and every bound around them.

The set of word maps G^d -> G is exactly the subgroup of the group of all
functions G^d -> G (pointwise product) generated by the d coordinate
projections: a word map is precisely a pointwise product of projections and
their inverses.  So the count is the size of a breadth-first closure over
function tables, deduplicated by raw bytes.  Counts are exact Python
integers; logarithms are reported as bit lengths plus rounded floats,
because the bounds overflow machine words at tiny parameters.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NotAbelian, NotNilpotent, TableCapExceeded
from .groups import FiniteGroup, exp_profile, nilpotency_class
from .nilpotent import formal_commutator_count, hall_basis
from .words import DEFAULT_TABLE_CAP, argument_digits

DEFAULT_CLOSURE_CAP = 1_000_000


@dataclass(frozen=True)
class ClosureOutcome:
    """count is exact when cap_hit is false, otherwise a lower bound."""

    count: int
    cap_hit: bool


def _projection_tables(G: FiniteGroup, d: int, size: int) -> list[np.ndarray]:
    digits = argument_digits(G.order, d, size)
    tables = []
    for i in range(d):
        proj = digits[i].astype(np.int32)
        inv_proj = G.inv[proj].astype(np.int32)
        tables.append(proj)
        tables.append(inv_proj)
    unique = []
    seen = set()
    for t in tables:
        key = t.tobytes()
        if key not in seen:
            seen.add(key)
            unique.append(t)
    return unique


def omega_exact(G: FiniteGroup, d: int,
                table_cap: int = DEFAULT_TABLE_CAP,
                closure_cap: int = DEFAULT_CLOSURE_CAP,
                workers: int = 1) -> ClosureOutcome:
    """Count distinct word maps G^d -> G by projection closure.

    Deterministic regardless of ``workers``: parallel workers only split the
    pointwise products within one generation, and results are merged in the
    same order a single worker would produce.
    """
    size = G.order ** d
    if size > table_cap:
        raise TableCapExceeded(f"|G|^d = {size} exceeds table cap {table_cap}")
    generators = _projection_tables(G, d, size)
    identity = np.zeros(size, dtype=np.int32)
    seen = {identity.tobytes()}
    frontier = [identity]
    mult = G.mult

    def expand(chunk: list[np.ndarray]) -> list[np.ndarray]:
        return [mult[t, g].astype(np.int32) for t in chunk for g in generators]

    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while frontier:
            if pool is not None and len(frontier) > 1:
                chunks = np.array_split(np.arange(len(frontier)), workers)
                parts = pool.map(expand,
                                 [[frontier[i] for i in c] for c in chunks])
                products = [t for part in parts for t in part]
            else:
                products = expand(frontier)
            next_frontier = []
            for table in products:
                key = table.tobytes()
                if key not in seen:
                    if len(seen) >= closure_cap:
                        return ClosureOutcome(count=len(seen), cap_hit=True)
                    seen.add(key)
                    next_frontier.append(table)
            frontier = next_frontier
    finally:
        if pool is not None:
            pool.shutdown()
    return ClosureOutcome(count=len(seen), cap_hit=False)


def abelian_omega(G: FiniteGroup, d: int) -> int:
    """exp(G)^d: every word map on abelian G is a tuple of power maps."""
    if not G.is_abelian():
        raise NotAbelian(f"{G!r} is not abelian")
    return G.exponent() ** d


def omega_lower(G: FiniteGroup, d: int) -> int:
    """prod_{r=1}^d exp_r(G)^C(d,r), the admissible-function count."""
    profile = exp_profile(G, r_max=d if d else 1)
    result = 1
    for r in range(1, d + 1):
        result *= profile.value_at(r) ** math.comb(d, r)
    return result


def log2_lower_binomial(G: FiniteGroup, d: int) -> int:
    """sum_{r=1}^m C(d, r) with m = min(class, d) for nilpotent G, m = d
    otherwise (where the sum collapses to 2^d - 1)."""
    nilpotent, c = nilpotency_class(G)
    m = min(c, d) if nilpotent else d
    return sum(math.comb(d, r) for r in range(1, m + 1))


def omega_upper_nilpotent(G: FiniteGroup, d: int) -> int:
    """exp(G)^N_{d,c} for nilpotent G of class exactly c >= 1.

    For the trivial group (class 0) every word map is constant-identity, so
    the bound degenerates to 1.
    """
    nilpotent, c = nilpotency_class(G)
    if not nilpotent:
        raise NotNilpotent(f"{G!r} is not nilpotent")
    if c == 0:
        return 1
    n_dc = hall_basis(d, c).size if d else 0
    return G.exponent() ** n_dc


def omega_upper_formal_count(G: FiniteGroup, d: int) -> int:
    """The coarser bound exp(G)^{P_c(d)} through the formal-commutator count."""
    nilpotent, c = nilpotency_class(G)
    if not nilpotent:
        raise NotNilpotent(f"{G!r} is not nilpotent")
    if c == 0:
        return 1
    return G.exponent() ** formal_commutator_count(d, c)


def trivial_upper_log2(G: FiniteGroup, d: int) -> float:
    """log2 of |G|^(|G|^d), the count of all functions G^d -> G."""
    return float(G.order ** d) * math.log2(G.order)


def _log_fields(count: Optional[int]) -> dict:
    if count is None:
        return {"bits": None, "log2": None}
    return {"bits": count.bit_length(),
            "log2": round(math.log2(count), 6) if count > 0 else None}


@dataclass(frozen=True)
class OmegaReport:
    """Everything computed about Omega_d(G) for one d."""

    group_label: str
    d: int
    exact: Optional[int]
    lower: int
    log2_lower_binomial: int
    upper: Optional[int]
    trivial_upper_log2: float
    cap_hit: bool
    closure_lower: Optional[int] = None  # partial closure size when capped

    def to_dict(self) -> dict:
        return {
            "group": self.group_label,
            "d": self.d,
            "exact": self.exact,
            "exact_log": _log_fields(self.exact),
            "lower": self.lower,
            "lower_log": _log_fields(self.lower),
            "log2_lower_binomial": self.log2_lower_binomial,
            "upper": self.upper,
            "upper_log": _log_fields(self.upper),
            "trivial_upper_log2": round(self.trivial_upper_log2, 6),
            "cap_hit": self.cap_hit,
            "closure_lower": self.closure_lower,
        }


@dataclass(frozen=True)
class GrowthProfile:
    """Per-d reports plus a verdict restricted to what was actually computed."""

    group_label: str
    nilpotent: bool
    nilpotency_class: Optional[int]
    reports: tuple[OmegaReport, ...]
    verdict: dict

    def to_dict(self) -> dict:
        return {
            "group": self.group_label,
            "nilpotent": self.nilpotent,
            "nilpotency_class": self.nilpotency_class,
            "reports": [r.to_dict() for r in self.reports],
            "verdict": self.verdict,
        }


def omega_report(G: FiniteGroup, d: int,
                 table_cap: int = DEFAULT_TABLE_CAP,
                 closure_cap: int = DEFAULT_CLOSURE_CAP,
                 workers: int = 1) -> OmegaReport:
    label = G.label or f"order-{G.order}"
    nilpotent, _ = nilpotency_class(G)
    upper = omega_upper_nilpotent(G, d) if nilpotent else None
    exact: Optional[int] = None
    closure_lower: Optional[int] = None
    cap_hit = False
    try:
        outcome = omega_exact(G, d, table_cap=table_cap,
                              closure_cap=closure_cap, workers=workers)
        if outcome.cap_hit:
            cap_hit = True
            closure_lower = outcome.count
        else:
            exact = outcome.count
    except TableCapExceeded:
        cap_hit = True
    return OmegaReport(
        group_label=label,
        d=d,
        exact=exact,
        lower=omega_lower(G, d),
        log2_lower_binomial=log2_lower_binomial(G, d),
        upper=upper,
        trivial_upper_log2=trivial_upper_log2(G, d),
        cap_hit=cap_hit,
        closure_lower=closure_lower,
    )


def growth_profile(G: FiniteGroup, d_max: int,
                   table_cap: int = DEFAULT_TABLE_CAP,
                   closure_cap: int = DEFAULT_CLOSURE_CAP,
                   workers: int = 1) -> GrowthProfile:
    """OmegaReports for d = 0..d_max plus a computed-only consistency verdict.

    Cap errors become absent fields; the profile itself never aborts.
    """
    nilpotent, c = nilpotency_class(G)
    reports = [omega_report(G, d, table_cap=table_cap,
                            closure_cap=closure_cap, workers=workers)
               for d in range(d_max + 1)]
    checks = []
    for rep in reports:
        threshold = 1 << rep.log2_lower_binomial
        known = rep.exact if rep.exact is not None else rep.closure_lower
        # With only a partial closure the binomial bound is confirmed when the
        # partial already clears it, and inconclusive (None) otherwise.
        if rep.exact is not None:
            binomial_ok: Optional[bool] = rep.exact >= threshold
        elif known is not None and known >= threshold:
            binomial_ok = True
        else:
            binomial_ok = None
        entry = {
            "d": rep.d,
            "lower_le_exact": None if rep.exact is None else rep.lower <= rep.exact,
            "exact_le_upper": None if (rep.exact is None or rep.upper is None)
                              else rep.exact <= rep.upper,
            "lower_meets_binomial": rep.lower >= threshold,
            "log2_exact_ge_binomial": binomial_ok,
            "within_trivial_upper": None if rep.exact is None or rep.exact < 1
                                    else math.log2(rep.exact) <= rep.trivial_upper_log2 + 1e-9,
        }
        checks.append(entry)
    consistent = all(v for entry in checks for v in entry.values()
                     if isinstance(v, bool))
    verdict = {
        "branch": f"nilpotent of class {c}" if nilpotent else "non-nilpotent",
        "per_d": checks,
        "consistent_at_tested_d": consistent,
        "note": "inequalities checked only at the computed d; "
                "asymptotic claims are not decided here",
    }
    return GrowthProfile(
        group_label=G.label or f"order-{G.order}",
        nilpotent=nilpotent,
        nilpotency_class=c,
        reports=tuple(reports),
        verdict=verdict,
    )
