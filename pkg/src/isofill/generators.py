"""Cycles used throughout: equators, random boundaries, and linked tube cores."""

from __future__ import annotations

from itertools import combinations, product

import numpy as np

from .chains import (
    NORTH,
    OFFSET,
    PRIMAL,
    SOUTH,
    Cell,
    Chain,
    DoubleGeometry,
    Geometry,
    boundary,
    cell_on_wall,
    on_walls,
)
from .oracle import all_cells, linking_number

COEFFICIENTS = (-2, -1, 1, 2)


def doubled_box(g: DoubleGeometry, axes: tuple[int, ...], position: dict[int, int]) -> Chain:
    """The N copy minus the S copy of the full box over ``axes`` at ``position``.

    ``position`` fixes the (integer) coordinate of every other axis.  The
    result is a sphere of dimension ``len(axes)`` crossing the equator.
    """
    n = g.n
    for i in range(n):
        if i in axes:
            continue
        x = position[i]
        if not 0 < x < g.axes[i]:
            raise ValueError(f"position {x} on axis {i} is not strictly inside [0, {g.axes[i]}]")
    span = tuple(sorted(axes))
    terms = []
    for corner in product(*(range(g.axes[i]) for i in span)):
        base = [position.get(i, 0) for i in range(n)]
        for i, v in zip(span, corner):
            base[i] = v
        terms.append((Cell(NORTH, tuple(base), span), 1))
        terms.append((Cell(SOUTH, tuple(base), span), -1))
    return Chain(g, len(span), terms)


def box_chain(g: Geometry, lo: dict[int, int], hi: dict[int, int], fixed: dict[int, int],
              lattice: str = PRIMAL, hemi: str = NORTH) -> Chain:
    """The solid box ``prod [lo_i, hi_i]`` over the axes in ``lo``, at ``fixed`` elsewhere."""
    span = tuple(sorted(lo))
    n = g.n
    terms = []
    for corner in product(*(range(lo[i], hi[i]) for i in span)):
        base = [fixed.get(i, 0) for i in range(n)]
        for i, v in zip(span, corner):
            base[i] = v
        terms.append((Cell(hemi, tuple(base), span), 1))
    return Chain(g, len(span), terms, lattice)


def equator(g: DoubleGeometry, k: int, which: str = "smallest") -> Chain:
    """A k-dimensional coordinate equator of the double.

    ``smallest``: the doubled box over the k shortest axes, at the grid centre
    of the rest (mass ``2 R_1...R_k``).  ``largest``: the doubled box over the
    k longest axes (mass ``2 R_{n-k+1}...R_n``).  ``rim``: the boundary of the
    (k+1)-box over the k+1 longest axes at the centre of the rest; it lies
    entirely in the glued boundary.
    """
    n = g.n
    if not 1 <= k <= n - 1:
        raise ValueError(f"equator dimension must be in [1, {n - 1}], got {k}")
    centre = {i: g.axes[i] // 2 for i in range(n)}
    if which == "smallest":
        axes = tuple(range(k))
    elif which == "largest":
        axes = tuple(range(n - k, n))
    elif which == "rim":
        axes = tuple(range(n - k - 1, n))
        lo = {i: 0 for i in axes}
        hi = {i: g.axes[i] for i in axes}
        for i in range(n - k - 1):
            if not 0 < centre[i] < g.axes[i]:
                raise ValueError(f"axis {i} of length {g.axes[i]} has no interior centre")
        return boundary(box_chain(g, lo, hi, centre))
    else:
        raise ValueError(f"unknown equator {which!r}")
    return doubled_box(g, axes, {i: centre[i] for i in range(n) if i not in axes})


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_chain(g: Geometry, dim: int, seed, density: int, lattice: str = PRIMAL) -> Chain:
    """About ``density`` random cells with coefficients in {-2, -1, 1, 2}."""
    if density <= 0:
        return Chain.zero(g, dim, lattice)
    rng = _rng(seed)
    n = g.n
    hemis = (NORTH, SOUTH) if g.is_double else (NORTH,)
    spans = list(combinations(range(n), dim))
    terms = []
    for _ in range(density):
        span = spans[rng.integers(len(spans))]
        base = []
        for i, r in enumerate(g.axes):
            if lattice == PRIMAL:
                top = r - 1 if i in span else r
            else:
                top = r - 2 if i in span else r - 1
            if top < 0:
                break
            base.append(int(rng.integers(top + 1)))
        else:
            hemi = hemis[rng.integers(len(hemis))]
            terms.append((Cell(hemi, tuple(base), span), int(COEFFICIENTS[rng.integers(4)])))
    return Chain(g, dim, terms, lattice)


def random_cycle(g: Geometry, k: int, seed, density: int, lattice: str = PRIMAL) -> Chain:
    """``boundary(w)`` for a random (k+1)-chain ``w``; always a cycle, deterministic in ``seed``."""
    if not 0 <= k <= g.n - 1:
        raise ValueError(f"cycle dimension must be in [0, {g.n - 1}], got {k}")
    return boundary(random_chain(g, k + 1, seed, density, lattice))


def random_relative_cycle(g: Geometry, k: int, seed, density: int) -> Chain:
    """A random relative k-cycle of a rectangle: ``boundary(w)`` minus its part in the walls."""
    if g.is_double:
        raise ValueError("relative cycles live on a single rectangle")
    z = random_cycle(g, k, seed, density)
    axes = g.axes
    rel = z.restrict(lambda c: not cell_on_wall(axes, c))
    assert on_walls(boundary(rel))
    return rel


def sample_cells(g: Geometry, dim: int, count: int, seed, lattice: str = PRIMAL) -> list[Cell]:
    # uniform over every canonical cell; fine for the small grids used in tests
    cells = all_cells(g, dim, lattice)
    rng = _rng(seed)
    return [cells[i] for i in rng.integers(len(cells), size=count)]


# -- linked tube cores --------------------------------------------------------

MIN_LINK_AXIS = 4


def _check_linkable(g: DoubleGeometry, k1: int, k2: int) -> None:
    n = g.n
    if k1 + k2 != n + 1 or not 2 <= k1 <= k2:
        raise ValueError(f"need k1 + k2 = n + 1 = {n + 1} and 2 <= k1 <= k2, got k1={k1}, k2={k2}")
    small = [r for r in g.axes if r < MIN_LINK_AXIS]
    if small:
        raise ValueError(f"every axis must be at least {MIN_LINK_AXIS} to host the linked pair; "
                         f"got axes {g.axes}")


def core_u(g: DoubleGeometry, k2: int, shift: int = 0) -> Chain:
    """Doubled box over axes ``0..k2-2`` at the centre of the rest, moved ``shift`` along the last axis."""
    n = g.n
    position = {i: g.axes[i] // 2 for i in range(k2 - 1, n)}
    position[n - 1] += shift
    return doubled_box(g, tuple(range(k2 - 1)), position)


def _core_v_box(g: DoubleGeometry, k2: int, shift: int, lattice: str) -> Chain:
    n = g.n
    spanned = range(k2 - 1, n)
    lo = {i: g.axes[i] // 4 for i in spanned}
    hi = {i: (3 * g.axes[i]) // 4 for i in spanned}
    fixed = {i: g.axes[i] // 4 + (1 if lattice == PRIMAL else 0) for i in range(k2 - 1)}
    fixed[0] += shift
    return box_chain(g, lo, hi, fixed, lattice)


def core_v(g: DoubleGeometry, k2: int, shift: int = 0, lattice: str = OFFSET, sign: int = 1) -> Chain:
    """Boundary of a box over axes ``k2-1..n-1`` in the Northern interior.

    ``shift`` translates it along axis 0.  The offset version is what the
    linking engine intersects with; the primal version is used to compare
    two parallel copies.
    """
    return sign * boundary(_core_v_box(g, k2, shift, lattice))


def linked_pair(g: DoubleGeometry, k1: int, k2: int) -> tuple[Chain, Chain]:
    """``(core_U, core_V)`` with linking number +1.

    ``core_U`` is a primal (k2-1)-sphere crossing the equator, ``core_V`` an
    offset (k1-1)-sphere in the North threading it once.  Orientation of
    ``core_V`` is chosen so that the linking number is +1.
    """
    _check_linkable(g, k1, k2)
    u = core_u(g, k2)
    v = core_v(g, k2)
    lk = linking_number(u, v)
    if abs(lk) != 1:
        raise AssertionError(f"linked pair has linking number {lk}, expected +-1")
    return u, lk * v


def random_box_cycle(g: Geometry, k: int, seed) -> Chain:
    """Boundary of a random solid (k+1)-box in one hemisphere, with a random sign."""
    if not 0 <= k <= g.n - 1:
        raise ValueError(f"cycle dimension must be in [0, {g.n - 1}], got {k}")
    rng = _rng(seed)
    n = g.n
    spans = list(combinations(range(n), k + 1))
    span = spans[rng.integers(len(spans))]
    lo, hi, fixed = {}, {}, {}
    for i, r in enumerate(g.axes):
        if i in span:
            a, b = sorted(int(x) for x in rng.choice(r + 1, size=2, replace=False))
            lo[i], hi[i] = a, b
        else:
            fixed[i] = int(rng.integers(r + 1))
    hemi = SOUTH if g.is_double and rng.integers(2) else NORTH
    sign = int(COEFFICIENTS[rng.integers(4)])
    return sign * boundary(box_chain(g, lo, hi, fixed, hemi=hemi))
