"""Built-in groups, group-spec strings, and the group file format.

Spec strings: ``cyclic:n``, ``dihedral:n`` (order 2n), ``symmetric:n``
(n <= 6), ``quaternion:8``, ``unitriangular:k:p``, and direct products of
the foregoing joined with ``x``, e.g. ``cyclic:2xcyclic:4``.

Group files are JSON documents with fields ``name``, ``kind`` in
{table, permutations, builtin} and a matching payload: ``table`` (row-major
integer matrix), ``generators`` (cycle-notation strings like
``"(1 2 3)(4 5)"``), or ``builtin`` (a spec string).
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import GroupSpecError, OrderLimitExceeded
from .groups import (
    DEFAULT_ORDER_CAP,
    FiniteGroup,
    _table_dtype,
    _trusted_group,
    from_multiplication_table,
    from_permutation_generators,
    unitriangular_group,
)


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic group order must be >= 1")
    idx = np.arange(n)
    mult = ((idx[:, None] + idx[None, :]) % n).astype(_table_dtype(n))
    return _trusted_group(mult, label=f"cyclic:{n}",
                          element_names=[str(i) for i in range(n)])


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the regular n-gon, order 2n; element r^a s^b -> 2a + b."""
    if n < 1:
        raise ValueError("dihedral parameter must be >= 1")
    size = 2 * n
    mult = np.empty((size, size), dtype=_table_dtype(size))
    names = []
    for a in range(n):
        for b in range(2):
            names.append(f"r{a}" if b == 0 else f"r{a}s")
    for i in range(size):
        a, b = divmod(i, 2)
        for j in range(size):
            c, d = divmod(j, 2)
            # s r^c = r^{-c} s
            e = (a + (c if b == 0 else -c)) % n
            mult[i, j] = 2 * e + (b ^ d)
    return _trusted_group(mult, label=f"dihedral:{n}", element_names=names)


def symmetric_group(n: int) -> FiniteGroup:
    if n < 1 or n > 6:
        raise ValueError("symmetric:n is supported for 1 <= n <= 6")
    if n == 1:
        return from_permutation_generators([], label="symmetric:1")
    gens = [(2, 1) + tuple(range(3, n + 1)),
            tuple(range(2, n + 1)) + (1,)]
    if n == 2:
        gens = gens[:1]
    return from_permutation_generators(gens, label=f"symmetric:{n}",
                                       order_cap=max(DEFAULT_ORDER_CAP, 720))


_QUATERNION_UNITS = ["1", "i", "j", "k"]


def quaternion_group() -> FiniteGroup:
    """Q8 with elements ordered 1, -1, i, -i, j, -j, k, -k."""
    prod = {("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
            ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
            ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")}
    elements = [(s, u) for u in _QUATERNION_UNITS for s in (1, -1)]
    index = {e: t for t, e in enumerate(elements)}

    def mul(x, y):
        sx, ux = x
        sy, uy = y
        if ux == "1":
            return (sx * sy, uy)
        if uy == "1":
            return (sx * sy, ux)
        s, u = prod[(ux, uy)]
        return (sx * sy * s, u)

    mult = np.empty((8, 8), dtype=np.int16)
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            mult[i, j] = index[mul(x, y)]
    names = [("" if s == 1 else "-") + u for (s, u) in elements]
    return _trusted_group(mult, label="quaternion:8", element_names=names)


def direct_product(A: FiniteGroup, B: FiniteGroup,
                   order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Componentwise product; element (a, b) gets index a*|B| + b."""
    n = A.order * B.order
    if n > order_cap:
        raise OrderLimitExceeded(f"product order {n} exceeds cap {order_cap}")
    nb = B.order
    mult = (A.mult.astype(np.int64)[:, None, :, None] * nb
            + B.mult[None, :, None, :]).reshape(n, n).astype(_table_dtype(n))
    label = f"{A.label or '?'}x{B.label or '?'}"
    names = None
    if A.element_names and B.element_names:
        names = [f"({x},{y})" for x in A.element_names for y in B.element_names]
    return _trusted_group(mult, label=label, element_names=names)


# -- spec strings -----------------------------------------------------------


def _parse_atom(spec: str, order_cap: int) -> FiniteGroup:
    parts = spec.split(":")
    kind = parts[0]
    try:
        if kind == "cyclic" and len(parts) == 2:
            g = cyclic_group(int(parts[1]))
        elif kind == "dihedral" and len(parts) == 2:
            g = dihedral_group(int(parts[1]))
        elif kind == "symmetric" and len(parts) == 2:
            g = symmetric_group(int(parts[1]))
        elif kind == "quaternion" and len(parts) == 2 and parts[1] == "8":
            g = quaternion_group()
        elif kind == "unitriangular" and len(parts) == 3:
            g = unitriangular_group(int(parts[1]), int(parts[2]), order_cap=order_cap)
        else:
            raise GroupSpecError(f"unknown group spec {spec!r}")
    except ValueError as exc:
        raise GroupSpecError(f"bad group spec {spec!r}: {exc}") from exc
    if g.order > order_cap:
        raise OrderLimitExceeded(f"order {g.order} exceeds cap {order_cap}")
    return g


def group_from_spec(spec: str, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Resolve a builtin spec string, with ``x`` denoting direct product."""
    atoms = [a.strip() for a in spec.strip().split("x")]
    if not atoms or any(not a for a in atoms):
        raise GroupSpecError(f"empty group spec in {spec!r}")
    group = _parse_atom(atoms[0], order_cap)
    for a in atoms[1:]:
        group = direct_product(group, _parse_atom(a, order_cap), order_cap=order_cap)
    return group


# -- cycle notation ----------------------------------------------------------

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, points: Optional[int] = None) -> tuple[int, ...]:
    """Parse cycle notation like ``(1 2 3)(4 5)`` into an image tuple.

    Returns the images (g(1), ..., g(m)) with m = ``points`` or the largest
    point mentioned.  ``()`` is the identity.
    """
    stripped = text.replace(",", " ").strip()
    if not re.fullmatch(r"(\s*\([\d\s]*\)\s*)*", stripped):
        raise GroupSpecError(f"bad cycle notation {text!r}")
    cycles = []
    maxpoint = points or 1
    for body in _CYCLE_RE.findall(stripped):
        pts = [int(tok) for tok in body.split()]
        if any(p < 1 for p in pts):
            raise GroupSpecError(f"cycle points must be >= 1 in {text!r}")
        if len(set(pts)) != len(pts):
            raise GroupSpecError(f"repeated point inside a cycle in {text!r}")
        if pts:
            maxpoint = max(maxpoint, max(pts))
            cycles.append(pts)
    image = list(range(1, maxpoint + 1))
    for pts in cycles:
        for a, b in zip(pts, pts[1:] + pts[:1]):
            if image[a - 1] != a:
                raise GroupSpecError(f"point {a} appears in two cycles in {text!r}")
            image[a - 1] = b
    return tuple(image)


# -- group files --------------------------------------------------------------


def load_group_file(path: str | Path,
                    order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise GroupSpecError(f"cannot read group file {path}: {exc}") from exc
    if not isinstance(doc, dict) or "kind" not in doc:
        raise GroupSpecError(f"group file {path} must be an object with a 'kind' field")
    name = doc.get("name")
    kind = doc["kind"]
    if kind == "table":
        if "table" not in doc:
            raise GroupSpecError(f"group file {path}: kind 'table' needs a 'table' field")
        return from_multiplication_table(doc["table"], label=name, order_cap=order_cap)
    if kind == "permutations":
        gens_text = doc.get("generators")
        if not isinstance(gens_text, list):
            raise GroupSpecError(f"group file {path}: kind 'permutations' needs a "
                                 "'generators' list")
        images = [parse_cycles(t) for t in gens_text]
        points = max((len(im) for im in images), default=1)
        padded = [im + tuple(range(len(im) + 1, points + 1)) for im in images]
        return from_permutation_generators(padded, label=name, order_cap=order_cap)
    if kind == "builtin":
        if "builtin" not in doc:
            raise GroupSpecError(f"group file {path}: kind 'builtin' needs a 'builtin' field")
        g = group_from_spec(doc["builtin"], order_cap=order_cap)
        if name:
            g.label = name  # type: ignore[misc]
        return g
    raise GroupSpecError(f"group file {path}: unknown kind {kind!r}")


def resolve_group(source: str, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """CLI group source: ``builtin:<spec>`` or a path to a group file."""
    if source.startswith("builtin:"):
        return group_from_spec(source[len("builtin:"):], order_cap=order_cap)
    return load_group_file(source, order_cap=order_cap)


# Groups every property-suite run exercises: all abelian shapes the bounds
# collapse on, the two smallest interesting nonabelian nilpotent groups, the
# unitriangular oracle family, and non-nilpotent controls.
BUILTIN_LIBRARY: tuple[str, ...] = (
    "cyclic:1",
    "cyclic:2",
    "cyclic:3",
    "cyclic:6",
    "cyclic:2xcyclic:4",
    "dihedral:4",
    "quaternion:8",
    "symmetric:3",
    "symmetric:4",
    "unitriangular:3:2",
    "unitriangular:3:3",
    "unitriangular:4:2",
)
