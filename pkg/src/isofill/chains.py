"""Cubical cells and integer chains on a rectangle and on the double of a rectangle.

A rectangle ``R = [0, R_1] x ... x [0, R_n]`` is cut into unit cubes.  Its
double is two copies of ``R`` (hemispheres ``"N"`` and ``"S"``) glued along
``R``'s boundary; a cell lying in that boundary is stored once, with the
canonical label ``"N"``.

Axes are indexed from 0 internally.  A cell's ``span`` is the sorted tuple of
axes along which it extends one unit; its ``base`` is its lowest corner.  On
the offset lattice a base entry ``b`` stands for the coordinate ``b + 1/2``;
the owning chain carries the lattice tag, cells do not.
"""

from __future__ import annotations

from bisect import bisect_left
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple

NORTH = "N"
SOUTH = "S"
PRIMAL = "primal"
OFFSET = "offset"


@dataclass(frozen=True)
class RectGeometry:
    axes: tuple[int, ...]

    def __post_init__(self):
        axes = tuple(int(a) for a in self.axes)
        object.__setattr__(self, "axes", axes)
        if not axes:
            raise ValueError("a rectangle needs at least one axis")
        if any(a < 1 for a in axes):
            raise ValueError(f"axis lengths must be >= 1, got {axes}")
        if list(axes) != sorted(axes):
            raise ValueError(f"axis lengths must be sorted ascending, got {axes}")

    @property
    def n(self) -> int:
        return len(self.axes)

    @property
    def is_double(self) -> bool:
        return False

    @property
    def rect(self) -> RectGeometry:
        return self

    def drop_axis(self, axis: int) -> RectGeometry:
        return RectGeometry(self.axes[:axis] + self.axes[axis + 1:])

    def to_json(self) -> dict:
        return {"axes": list(self.axes), "double": False}


@dataclass(frozen=True)
class DoubleGeometry:
    """Two copies of ``rect`` glued along its boundary (a sphere)."""

    rect: RectGeometry

    @property
    def axes(self) -> tuple[int, ...]:
        return self.rect.axes

    @property
    def n(self) -> int:
        return self.rect.n

    @property
    def is_double(self) -> bool:
        return True

    def to_json(self) -> dict:
        return {"axes": list(self.axes), "double": True}


Geometry = RectGeometry | DoubleGeometry


def rectangle(axes: Iterable[int]) -> RectGeometry:
    return RectGeometry(tuple(axes))


def double(axes: Iterable[int]) -> DoubleGeometry:
    return DoubleGeometry(RectGeometry(tuple(axes)))


def geometry_from_json(data: Mapping) -> Geometry:
    rect = RectGeometry(tuple(data["axes"]))
    return DoubleGeometry(rect) if data.get("double", False) else rect


class Cell(NamedTuple):
    hemi: str
    base: tuple[int, ...]
    span: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.span)


def leading_gap(span: Iterable[int], n: int) -> int:
    """Number of leading axes missing from ``span`` (the ``e(J)`` index).

    With 0-based axes this is ``min(span)``; for 1-based ``J = {3, 6, 8}`` one
    passes ``(2, 5, 7)`` and gets 2.  The empty span misses every axis, so it
    returns ``n``.
    """
    span = tuple(span)
    return min(span) if span else n


def cell_on_wall(axes: tuple[int, ...], cell: Cell) -> bool:
    """True if the (primal) cell lies in the boundary of the rectangle."""
    span = cell.span
    for i, b in enumerate(cell.base):
        if (b == 0 or b == axes[i]) and i not in span:
            return True
    return False


def check_cell(geometry: Geometry, cell: Cell, lattice: str = PRIMAL) -> None:
    axes = geometry.axes
    if len(cell.base) != len(axes):
        raise ValueError(f"cell {cell} has wrong number of coordinates for axes {axes}")
    if list(cell.span) != sorted(set(cell.span)) or any(not 0 <= a < len(axes) for a in cell.span):
        raise ValueError(f"cell span {cell.span} must be sorted distinct axis indices")
    if cell.hemi not in (NORTH, SOUTH):
        raise ValueError(f"unknown hemisphere {cell.hemi!r}")
    if cell.hemi == SOUTH and not geometry.is_double:
        raise ValueError("a plain rectangle has only the N hemisphere")
    for i, b in enumerate(cell.base):
        spanned = i in cell.span
        if lattice == PRIMAL:
            hi = axes[i] - 1 if spanned else axes[i]
        elif lattice == OFFSET:
            hi = axes[i] - 2 if spanned else axes[i] - 1
        else:
            raise ValueError(f"unknown lattice {lattice!r}")
        if not 0 <= b <= hi:
            raise ValueError(f"cell {cell} leaves the {lattice} grid of axes {axes} along axis {i}")


def _normalize(geometry: Geometry, terms, lattice: str) -> dict[Cell, int]:
    """Sum coefficients, drop zeros, relabel equator cells on a double as N."""
    out: dict[Cell, int] = defaultdict(int)
    glue = geometry.is_double and lattice == PRIMAL
    axes = geometry.axes
    items = terms.items() if isinstance(terms, Mapping) else terms
    for cell, k in items:
        if not k:
            continue
        if not isinstance(cell, Cell):
            cell = Cell(*cell)
        if glue and cell.hemi == SOUTH and cell_on_wall(axes, cell):
            cell = Cell(NORTH, cell.base, cell.span)
        out[cell] += k
    return {c: k for c, k in out.items() if k}


class Chain:
    """An immutable sparse integer combination of cells of one dimension.

    Construction always puts the chain in canonical form.  Chains on
    different lattices, geometries or dimensions cannot be added.
    """

    __slots__ = ("geometry", "dim", "lattice", "_terms", "_hash")

    def __init__(self, geometry: Geometry, dim: int, terms=(), lattice: str = PRIMAL,
                 check: bool = True):
        if lattice not in (PRIMAL, OFFSET):
            raise ValueError(f"unknown lattice {lattice!r}")
        if not 0 <= dim <= geometry.n:
            raise ValueError(f"dimension {dim} out of range for n={geometry.n}")
        terms = _normalize(geometry, terms, lattice)
        if check:
            for cell in terms:
                if len(cell.span) != dim:
                    raise ValueError(f"cell {cell} does not have dimension {dim}")
                check_cell(geometry, cell, lattice)
        self.geometry = geometry
        self.dim = dim
        self.lattice = lattice
        self._terms = terms
        self._hash = None

    @classmethod
    def zero(cls, geometry: Geometry, dim: int, lattice: str = PRIMAL) -> Chain:
        return cls(geometry, dim, (), lattice, check=False)

    @classmethod
    def _raw(cls, geometry, dim, terms, lattice) -> Chain:
        # terms already canonical with nonzero coefficients
        self = cls.__new__(cls)
        self.geometry, self.dim, self.lattice = geometry, dim, lattice
        self._terms = terms
        self._hash = None
        return self

    def _like(self, terms, dim: int | None = None) -> Chain:
        return Chain(self.geometry, self.dim if dim is None else dim, terms, self.lattice, check=False)

    # -- mapping-ish access ------------------------------------------------
    def items(self):
        return self._terms.items()

    def cells(self):
        return self._terms.keys()

    def coef(self, cell) -> int:
        return self._terms.get(Cell(*cell), 0)

    def __iter__(self) -> Iterator[Cell]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def mass(self) -> int:
        return sum(abs(k) for k in self._terms.values())

    # -- arithmetic --------------------------------------------------------
    def _compatible(self, other: Chain) -> None:
        if not isinstance(other, Chain):
            raise TypeError(f"cannot combine Chain with {type(other).__name__}")
        if other.lattice != self.lattice:
            raise ValueError("cross-lattice addition is rejected")
        if other.geometry != self.geometry:
            raise ValueError("chains live on different geometries")
        if other.dim != self.dim:
            raise ValueError(f"cannot add a {self.dim}-chain and a {other.dim}-chain")

    def __add__(self, other: Chain) -> Chain:
        self._compatible(other)
        out = dict(self._terms)
        for c, k in other._terms.items():
            v = out.get(c, 0) + k
            if v:
                out[c] = v
            else:
                out.pop(c, None)
        return Chain._raw(self.geometry, self.dim, out, self.lattice)

    def __neg__(self) -> Chain:
        return Chain._raw(self.geometry, self.dim, {c: -k for c, k in self._terms.items()}, self.lattice)

    def __sub__(self, other: Chain) -> Chain:
        return self + (-other)

    def __mul__(self, scalar: int) -> Chain:
        if not isinstance(scalar, int):
            return NotImplemented
        if scalar == 0:
            return Chain.zero(self.geometry, self.dim, self.lattice)
        return Chain._raw(self.geometry, self.dim, {c: scalar * k for c, k in self._terms.items()},
                          self.lattice)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return (self.geometry == other.geometry and self.dim == other.dim
                and self.lattice == other.lattice and self._terms == other._terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.geometry, self.dim, self.lattice, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return (f"Chain(dim={self.dim}, lattice={self.lattice}, axes={self.geometry.axes}, "
                f"double={self.geometry.is_double}, cells={len(self)}, mass={self.mass})")

    # -- selection ---------------------------------------------------------
    def restrict(self, predicate) -> Chain:
        return Chain._raw(self.geometry, self.dim,
                          {c: k for c, k in self._terms.items() if predicate(c)}, self.lattice)

    # -- serialization -----------------------------------------------------
    def to_json(self) -> dict:
        cells = []
        for cell in sorted(self._terms):
            entry = {"hemi": cell.hemi, "span": list(cell.span), "coef": self._terms[cell]}
            if self.lattice == OFFSET:
                entry["base"] = [2 * b + 1 for b in cell.base]
                entry["half"] = True
            else:
                entry["base"] = list(cell.base)
            cells.append(entry)
        return {"geometry": self.geometry.to_json(), "dimension": self.dim,
                "lattice": self.lattice, "cells": cells}

    @classmethod
    def from_json(cls, data: Mapping) -> Chain:
        geometry = geometry_from_json(data["geometry"])
        lattice = data.get("lattice", PRIMAL)
        terms = []
        for entry in data["cells"]:
            base = entry["base"]
            if entry.get("half", False):
                if any(b % 2 != 1 for b in base):
                    raise ValueError(f"half-integer base must be odd doubled integers, got {base}")
                base = [(b - 1) // 2 for b in base]
            elif lattice == OFFSET:
                raise ValueError("offset cells must be serialized with half=true")
            terms.append((Cell(entry.get("hemi", NORTH), tuple(base), tuple(entry["span"])),
                          int(entry["coef"])))
        return cls(geometry, int(data["dimension"]), terms, lattice)


def canonicalize(c: Chain) -> Chain:
    """Return ``c`` in canonical form (equator cells labelled N, no zeros)."""
    return Chain(c.geometry, c.dim, c.items(), c.lattice, check=False)


def canonical_terms(geometry: Geometry, terms, lattice: str = PRIMAL) -> dict[Cell, int]:
    """Canonicalize an arbitrary iterable of ``(cell, coef)`` pairs."""
    return _normalize(geometry, terms, lattice)


def cell_boundary(cell: Cell):
    """Yield ``(face, sign)`` pairs of the cubical boundary of a single cell.

    The face across the ``j``-th spanned axis carries ``(-1)**j``, top minus
    bottom.
    """
    hemi, base, span = cell
    for j, a in enumerate(span):
        sub = span[:j] + span[j + 1:]
        s = 1 if j % 2 == 0 else -1
        yield Cell(hemi, base[:a] + (base[a] + 1,) + base[a + 1:], sub), s
        yield Cell(hemi, base, sub), -s


def boundary(c: Chain) -> Chain:
    if c.dim == 0:
        return Chain.zero(c.geometry, 0, c.lattice)
    out: dict = defaultdict(int)
    for cell, k in c.items():
        hemi, base, span = cell
        for j, a in enumerate(span):
            sub = span[:j] + span[j + 1:]
            s = k if j % 2 == 0 else -k
            out[Cell(hemi, base[:a] + (base[a] + 1,) + base[a + 1:], sub)] += s
            out[Cell(hemi, base, sub)] -= s
    return c._like(out, c.dim - 1)


@dataclass(frozen=True)
class VolumeVector:
    """Directional volumes ``Vol_J`` keyed by span, plus total mass."""

    by_span: Mapping[tuple[int, ...], int] = field(default_factory=dict)
    mass: int = 0

    def __getitem__(self, span) -> int:
        return self.by_span.get(tuple(span), 0)

    def to_json(self) -> dict:
        return {"mass": self.mass,
                "by_span": [{"span": list(j), "volume": v} for j, v in sorted(self.by_span.items())]}


def volumes(c: Chain) -> VolumeVector:
    by_span: dict[tuple[int, ...], int] = defaultdict(int)
    for cell, k in c.items():
        by_span[cell.span] += abs(k)
    return VolumeVector(dict(by_span), sum(by_span.values()))


def hemisphere_split(z: Chain) -> tuple[Chain, Chain]:
    """Split a canonical chain into ``(z_N, z_S)``; equator cells go to ``z_N``."""
    north, south = {}, {}
    for cell, k in z.items():
        (south if cell.hemi == SOUTH else north)[cell] = k
    return (Chain._raw(z.geometry, z.dim, north, z.lattice),
            Chain._raw(z.geometry, z.dim, south, z.lattice))


def on_walls(c: Chain) -> bool:
    """True if every cell of the (primal) chain lies in the rectangle's boundary."""
    axes = c.geometry.axes
    return all(cell_on_wall(axes, cell) for cell in c.cells())


def to_rect(c: Chain) -> Chain:
    """Forget hemisphere labels, viewing the chain in a single rectangle."""
    rect = c.geometry.rect
    return Chain(rect, c.dim, ((Cell(NORTH, cell.base, cell.span), k) for cell, k in c.items()),
                 c.lattice, check=False)


def lift(c: Chain, geometry: DoubleGeometry, hemi: str) -> Chain:
    """Place a rectangle chain into one hemisphere of ``geometry``."""
    if c.geometry != geometry.rect:
        raise ValueError("chain does not live on the rectangle of this double")
    return Chain(geometry, c.dim, ((Cell(hemi, cell.base, cell.span), k) for cell, k in c.items()),
                 c.lattice, check=False)


def fundamental_class(geometry: DoubleGeometry) -> Chain:
    """All N top cells minus all S top cells."""
    from itertools import product

    n = geometry.n
    span = tuple(range(n))
    terms = []
    for base in product(*(range(r) for r in geometry.axes)):
        terms.append((Cell(NORTH, base, span), 1))
        terms.append((Cell(SOUTH, base, span), -1))
    return Chain(geometry, n, terms, check=False)


def interval_product(c: Chain, axis: int, lo: int, hi: int, geometry: RectGeometry | None = None) -> Chain:
    """The column ``[lo, hi] x c``, oriented with the interval first.

    If ``geometry`` is given, ``c`` lives on ``geometry.drop_axis(axis)`` and the
    new coordinate is inserted.  Otherwise ``c`` lives on the target rectangle
    itself, must not span ``axis``, and its ``axis`` coordinate is replaced.
    With this orientation ``boundary([lo,hi] x c) = {hi} x c - {lo} x c - [lo,hi] x boundary(c)``.
    """
    if geometry is None:
        target = c.geometry
        if target.is_double:
            raise ValueError("interval_product works on a single rectangle")
        for cell in c.cells():
            if axis in cell.span:
                raise ValueError(f"cell {cell} already spans axis {axis}")
        insert = False
    else:
        target = geometry
        if c.geometry != geometry.drop_axis(axis):
            raise ValueError(f"chain geometry {c.geometry.axes} is not {geometry.axes} without axis {axis}")
        insert = True
    if not 0 <= lo <= hi <= target.axes[axis]:
        raise ValueError(f"range [{lo}, {hi}] outside [0, {target.axes[axis]}]")
    out = {}
    for cell, k in c.items():
        if insert:
            span = tuple(s if s < axis else s + 1 for s in cell.span)
            base = cell.base[:axis] + (0,) + cell.base[axis:]
        else:
            span, base = cell.span, cell.base
        pos = bisect_left(span, axis)
        new_span = span[:pos] + (axis,) + span[pos:]
        coef = -k if pos % 2 else k
        for j in range(lo, hi):
            key = Cell(cell.hemi, base[:axis] + (j,) + base[axis + 1:], new_span)
            out[key] = out.get(key, 0) + coef
    return Chain(target, c.dim + 1, out, c.lattice, check=False)
