"""Constructive fillings of cycles in a rectangle and in the double of a rectangle.

Three fillers, each returning a :class:`FillCertificate`:

* :func:`fill_absolute` -- cone a cycle down through successive wall
  projections along axes ``0, 1, ..., n-k-1``;
* :func:`fill_relative` -- push a relative cycle into the walls by slicing
  along the shortest axis and recursing on the slice;
* :func:`fill_double` -- fill the Southern part relatively, then fill what is
  left in the North absolutely.

Axis lengths are sorted, so axis 0 is the shortest.  All arithmetic is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .chains import (
    NORTH,
    PRIMAL,
    SOUTH,
    Cell,
    Chain,
    DoubleGeometry,
    RectGeometry,
    boundary,
    cell_on_wall,
    hemisphere_split,
    interval_product,
    leading_gap,
    lift,
    on_walls,
    to_rect,
    volumes,
)


class NotACycleError(ValueError):
    """Input is not a (relative) cycle; ``offending`` holds the bad boundary."""

    def __init__(self, message: str, offending: Chain):
        super().__init__(message)
        self.offending = offending


class FillerInvariantError(AssertionError):
    """A step of a filling construction broke an invariant it relies on (a bug)."""


# Frozen constants for the relative filler, with y the filling, B the residue,
# m_par / m_perp the mass of z in cells spanning / not spanning axis 0, and
# z_h the lightest slice (R_1 |z_h| <= m_par by pigeonhole):
#   y_+ + y_-: prisms of the non-spanning cells, each at most R_1 tall, so
#       |y_1| <= R_1 m_perp (spanning cells of z_1 sweep degenerately).
#   y_2 = [0,R_1] x y_h: |y_2| = R_1 |y_h| <= R_1 K1 R_{k+1} |z_h| <= K1 R_{k+1} m_par,
#       using the induction hypothesis in R' = (R_2..R_n), whose (k)-th axis is R_{k+1}.
#   base case k = 0: push to the low wall, |y| <= R_1 |z|.
#   => |y| <= R_{k+1} (m_perp + m_par), i.e. K1 = 1 for every k.
# Residue, J not containing axis 0: only the wall images pi(z_-), pi(z_+) and the
# caps {0} x y_h, {R_1} x y_h contribute.  The images have Vol_J <= Vol_J(z).  The
# caps span axis 1, so they only touch e(J) = 1, where they add 2|y_h| <=
# 2 (R_{k+1}/R_1) m_par.
#   => e(J) > 1: Vol_J(B) <= |z|                  (K2 = 1)
#   => e(J) = 1: Vol_J(B) <= 2 (R_{k+1}/R_1) |z|  (K3 = 2)
K1 = 1
K2 = 1
K3 = 2


def k4(n: int, k: int) -> int:
    """Constant of the double filler: ``|y| <= K4 (R_{k+1} + R_{n-k}) |z|``.

    Absolute filling cost of ``z_N - B`` is ``sum_{e(J)>=1} (R_1+..+R_e) Vol_J`` and
    ``R_1+..+R_e <= (n-k) R_{n-k}``.  There are ``C(n-2, k-1)`` spans with
    ``e(J) = 1`` (each carrying ``K3 (R_{k+1}/R_1)|z_S|`` of residue at weight
    ``R_1``) and ``C(n-2, k)`` spans with ``e(J) >= 2`` (each carrying
    ``K2 |z_S|``).  Adding ``|y_S| <= K1 R_{k+1} |z_S|`` gives the maximum below.
    """
    return max(K1 + math.comb(n - 2, k - 1) * K3, (n - k) * (1 + math.comb(n - 2, k) * K2))


@dataclass(frozen=True)
class FillCertificate:
    filling: Chain
    wall_residue: Chain
    method: str
    certified_bound: Fraction
    bound_formula: dict[str, Any]
    residue_bounds: dict[tuple[int, ...], Fraction] = field(default_factory=dict)

    @property
    def mass(self) -> int:
        return self.filling.mass

    def verify(self, z: Chain) -> None:
        """Re-check every certified property against the input cycle ``z``."""
        if boundary(self.filling) - self.wall_residue != z:
            raise FillerInvariantError(f"{self.method}: boundary(y) - B != z")
        if self.filling.mass > self.certified_bound:
            raise FillerInvariantError(
                f"{self.method}: mass {self.filling.mass} exceeds certified {self.certified_bound}")
        vol = volumes(self.wall_residue)
        for span, bound in self.residue_bounds.items():
            if vol[span] > bound:
                raise FillerInvariantError(f"{self.method}: Vol_{span}(B) = {vol[span]} > {bound}")

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "filling": self.filling.to_json(),
            "wall_residue": self.wall_residue.to_json(),
            "filling_mass": self.filling.mass,
            "certified_bound": str(self.certified_bound),
            "bound_formula": self.bound_formula,
            "residue_bounds": [{"span": list(j), "bound": str(b)}
                               for j, b in sorted(self.residue_bounds.items())],
        }


def _require_rect_primal(c: Chain, what: str) -> RectGeometry:
    if c.geometry.is_double:
        raise ValueError(f"{what} works on a single rectangle; use to_rect() first")
    if c.lattice != PRIMAL:
        raise ValueError(f"{what} needs a primal chain")
    return c.geometry


def prism_project(c: Chain, axis: int, wall: str = "low") -> tuple[Chain, Chain]:
    """Slide ``c`` straight onto the wall ``x_axis = 0`` (low) or ``= R_axis`` (high).

    Returns ``(prism, image)`` with ``boundary(prism) + prism(boundary(c)) = image - c``.
    Cells spanning ``axis`` sweep degenerately: no prism, zero image.
    """
    geometry = _require_rect_primal(c, "prism_project")
    if wall not in ("low", "high"):
        raise ValueError(f"wall must be 'low' or 'high', got {wall!r}")
    if c.dim >= geometry.n:
        raise ValueError("a top-dimensional chain has no prism")
    top = geometry.axes[axis]
    prism: dict[Cell, int] = {}
    image: dict[Cell, int] = {}
    for cell, k in c.items():
        hemi, base, span = cell
        if axis in span:
            continue
        t = base[axis]
        pos = sum(1 for s in span if s < axis)
        new_span = span[:pos] + (axis,) + span[pos:]
        # low wall: Q(s) = -[0, t] x s ; high wall: Q(s) = +[t, R] x s
        if wall == "low":
            levels, w, sign = range(0, t), 0, -1
        else:
            levels, w, sign = range(t, top), top, 1
        coef = sign * k * (-1 if pos % 2 else 1)
        for j in levels:
            key = Cell(hemi, base[:axis] + (j,) + base[axis + 1:], new_span)
            prism[key] = prism.get(key, 0) + coef
        key = Cell(hemi, base[:axis] + (w,) + base[axis + 1:], span)
        image[key] = image.get(key, 0) + k
    return (Chain(geometry, c.dim + 1, prism, check=False),
            Chain(geometry, c.dim, image, check=False))


def sweep_cost(c: Chain, axis: int, wall: str = "low") -> int:
    """Uncancelled size of the prism: sum of ``|coef| * distance to the wall``.

    Upper-bounds the prism mass; the two differ when swept columns cancel.
    """
    geometry = _require_rect_primal(c, "sweep_cost")
    top = geometry.axes[axis]
    total = 0
    for cell, k in c.items():
        if axis in cell.span:
            continue
        t = cell.base[axis]
        total += abs(k) * (t if wall == "low" else top - t)
    return total


def absolute_fill_bound(z: Chain) -> tuple[int, list[dict]]:
    """``sum_{J: e(J) >= 1} (R_1 + ... + R_{e(J)}) Vol_J(z)`` and its terms."""
    axes = z.geometry.axes
    n = len(axes)
    prefix = [0]
    for r in axes:
        prefix.append(prefix[-1] + r)
    total = 0
    terms = []
    for span, vol in sorted(volumes(z).by_span.items()):
        e = leading_gap(span, n)
        if e >= 1 and vol:
            weight = prefix[min(e, n)]
            total += weight * vol
            terms.append({"span": list(span), "e": e, "weight": weight, "volume": vol})
    return total, terms


def _nonzero_boundary(c: Chain, what: str) -> None:
    b = boundary(c)
    if b:
        raise NotACycleError(f"{what}: input has nonzero boundary ({len(b)} cells)", b)


def fill_absolute(z: Chain) -> FillCertificate:
    """Fill an absolute k-cycle of a rectangle by successive wall projections."""
    geometry = _require_rect_primal(z, "fill_absolute")
    n, k = geometry.n, z.dim
    if not 0 <= k <= n - 1:
        raise ValueError(f"cycle dimension must be in [0, {n - 1}], got {k}")
    _nonzero_boundary(z, "fill_absolute")
    if k == 0 and sum(coef for _, coef in z.items()) != 0:
        raise NotACycleError("fill_absolute: a 0-cycle must have coefficient sum 0 to bound", z)
    y = Chain.zero(geometry, k + 1)
    current = z
    for axis in range(n - k):
        prism, current = prism_project(current, axis, "low")
        y = y - prism
    if current:
        raise FillerInvariantError("fill_absolute: projected cycle did not vanish")
    bound, terms = absolute_fill_bound(z)
    cert = FillCertificate(
        filling=y,
        wall_residue=Chain.zero(geometry, k),
        method="absolute",
        certified_bound=Fraction(bound),
        bound_formula={"kind": "sum_{e(J)>=1} (R_1+...+R_e(J)) Vol_J(z)",
                       "axes": list(geometry.axes), "terms": terms},
    )
    if boundary(y) != z or y.mass > bound:
        raise FillerInvariantError("fill_absolute: certificate failed")
    return cert


def slice_select(z: Chain, axis: int = 0) -> tuple[int, Chain]:
    """Pick the level ``[h, h+1]`` of ``axis`` where ``z`` is lightest and slice there.

    The slice ``z_h`` lives in the rectangle without ``axis``; the cells of
    ``z`` spanning ``axis`` at that level are exactly ``[h, h+1] x z_h``.
    """
    geometry = _require_rect_primal(z, "slice_select")
    if z.dim == 0:
        raise ValueError("cannot slice a 0-chain")
    levels: list[dict[Cell, int]] = [dict() for _ in range(geometry.axes[axis])]
    for cell, coef in z.items():
        hemi, base, span = cell
        if axis not in span:
            continue
        pos = span.index(axis)
        sub = tuple(s if s < axis else s - 1 for s in span if s != axis)
        levels[base[axis]][Cell(hemi, base[:axis] + base[axis + 1:], sub)] = -coef if pos % 2 else coef
    masses = [sum(abs(v) for v in lvl.values()) for lvl in levels]
    h = min(range(len(levels)), key=lambda j: (masses[j], j))
    sub_geometry = geometry.drop_axis(axis)
    zh = Chain(sub_geometry, z.dim - 1, levels[h], check=False)
    if masses[h] * geometry.axes[axis] > z.mass:
        raise FillerInvariantError("slice_select: pigeonhole bound failed")
    if not on_walls(boundary(zh)):
        raise FillerInvariantError("slice_select: slice is not a relative cycle")
    return h, zh


def _fill_relative(z: Chain) -> tuple[Chain, Chain]:
    geometry = z.geometry
    k = z.dim
    if not z:
        return Chain.zero(geometry, k + 1), Chain.zero(geometry, k)
    if k == 0:
        prism, image = prism_project(z, 0, "low")
        return -prism, -image
    r1 = geometry.axes[0]
    h, zh = slice_select(z, 0)
    z2 = interval_product(zh, 0, 0, r1, geometry)
    z1 = z - z2
    below, above = {}, {}
    for cell, coef in z1.items():
        x = cell.base[0]
        if 0 in cell.span:
            if x == h:
                raise FillerInvariantError("fill_relative: a cell of z_1 straddles the slicing plane")
            (below if x < h else above)[cell] = coef
        else:
            (below if x <= h else above)[cell] = coef
    z_minus = Chain(geometry, k, below, check=False)
    z_plus = Chain(geometry, k, above, check=False)
    if not (on_walls(boundary(z_minus)) and on_walls(boundary(z_plus))):
        raise FillerInvariantError("fill_relative: z_+ / z_- are not relative cycles")
    prism_minus, _ = prism_project(z_minus, 0, "low")
    prism_plus, _ = prism_project(z_plus, 0, "high")
    y_h, _ = _fill_relative(zh)
    y = -(prism_minus + prism_plus) - interval_product(y_h, 0, 0, r1, geometry)
    residue = boundary(y) - z
    if not on_walls(residue):
        raise FillerInvariantError("fill_relative: residue left the walls")
    return y, residue


def fill_relative(z: Chain) -> FillCertificate:
    """Fill a relative k-cycle of a rectangle so that ``boundary(y) = z + B``, B in the walls.

    Certified: every cell of ``y`` spans axis 0; ``|y| <= K1 R_{k+1} |z|``;
    ``Vol_J(B) <= K2 |z|`` when ``e(J) > 1`` and ``<= K3 (R_{k+1}/R_1) |z|``
    when ``e(J) = 1``.
    """
    geometry = _require_rect_primal(z, "fill_relative")
    n, k = geometry.n, z.dim
    if not 0 <= k <= n - 1:
        raise ValueError(f"relative cycle dimension must be in [0, {n - 1}], got {k}")
    bz = boundary(z)
    if not on_walls(bz):
        raise NotACycleError("fill_relative: boundary is not contained in the walls",
                             bz.restrict(lambda c: not cell_on_wall(geometry.axes, c)))
    y, residue = _fill_relative(z)
    axes = geometry.axes
    m = z.mass
    mass_bound = Fraction(K1 * axes[k] * m)
    residue_bounds = {}
    for span in volumes(residue).by_span:
        e = leading_gap(span, n)
        if e > 1:
            residue_bounds[span] = Fraction(K2 * m)
        elif e == 1:
            residue_bounds[span] = Fraction(K3 * axes[k] * m, axes[0])
    cert = FillCertificate(
        filling=y,
        wall_residue=residue,
        method="relative",
        certified_bound=mass_bound,
        bound_formula={"kind": "K1 * R_{k+1} * |z|", "K1": K1, "K2": K2, "K3": K3,
                       "R_k+1": axes[k], "R_1": axes[0], "mass_z": m},
        residue_bounds=residue_bounds,
    )
    if any(0 not in cell.span for cell in y.cells()):
        raise FillerInvariantError("fill_relative: a filling cell does not span axis 0")
    cert.verify(z)
    return cert


def fill_double(z: Chain) -> FillCertificate:
    """Fill a k-cycle on the double: relative fill in S, absolute fill of ``z_N - B`` in N."""
    geometry = z.geometry
    if not isinstance(geometry, DoubleGeometry):
        raise ValueError("fill_double needs a chain on a DoubleGeometry")
    if z.lattice != PRIMAL:
        raise ValueError("fill_double needs a primal chain")
    n, k = geometry.n, z.dim
    if not 1 <= k <= n - 1:
        raise ValueError(f"cycle dimension must be in [1, {n - 1}], got {k}")
    _nonzero_boundary(z, "fill_double")
    z_north, z_south = hemisphere_split(z)
    south = fill_relative(to_rect(z_south))
    w = to_rect(z_north) - south.wall_residue
    if boundary(w):
        raise FillerInvariantError("fill_double: z_N - B is not a cycle")
    north = fill_absolute(w)
    y = lift(south.filling, geometry, SOUTH) + lift(north.filling, geometry, NORTH)
    axes = geometry.axes
    K4 = k4(n, k)
    bound = Fraction(K4 * (axes[k] + axes[n - k - 1]) * z.mass)
    cert = FillCertificate(
        filling=y,
        wall_residue=Chain.zero(geometry, k),
        method="double",
        certified_bound=bound,
        bound_formula={"kind": "K4 * (R_{k+1} + R_{n-k}) * |z|", "K4": K4,
                       "R_k+1": axes[k], "R_n-k": axes[n - k - 1], "mass_z": z.mass,
                       "south_mass": south.filling.mass, "north_mass": north.filling.mass},
    )
    cert.verify(z)
    return cert
