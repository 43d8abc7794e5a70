"""Blueprints of linked-tube maps from an ellipse to a wedge of two spheres.

A map is described by two families of parallel tubes: ``d1`` tubes around
the core U (a (k2-1)-sphere) and ``d2`` around the core V (a (k1-1)-sphere).
Each tube carries one degree-1 bump, so the fibers of the two sphere factors
are ``d1`` parallel copies of U and ``d2`` of V.  Each cross pair links once,
so the linking invariant is ``d1 * d2``.  :func:`blueprint_fibers` builds
explicit fiber chains so that this count can be checked with the oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import bounds
from .chains import NORTH, PRIMAL, SOUTH, Chain, DoubleGeometry, boundary, double
from .generators import _core_v_box, box_chain, core_u, core_v
from .oracle import linking_number, supports_disjoint

DEFAULT_C0 = 4


def degree_pack(sides: Sequence, L, C0=DEFAULT_C0) -> int:
    """Number of disjoint bumps of size ``C0/L`` in the box with the given sides."""
    L, C0 = Fraction(L), Fraction(C0)
    if L <= 0 or C0 <= 0:
        raise ValueError(f"L and C0 must be positive, got L={L}, C0={C0}")
    return math.prod(max(0, math.floor(Fraction(s) * L / C0)) for s in sides)


@dataclass(frozen=True)
class MapBlueprint:
    axes: tuple[Fraction, ...]     # E_0 <= ... <= E_n
    k1: int
    k2: int
    L: Fraction
    C0: Fraction
    d1: int
    d2: int
    tubes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.d1 < 0 or self.d2 < 0:
            raise ValueError("packing degrees are nonnegative")

    @property
    def n(self) -> int:
        return len(self.axes) - 1

    @property
    def invariant(self) -> int:
        return self.d1 * self.d2

    def to_json(self) -> dict:
        return {"axes": [str(a) for a in self.axes], "k1": self.k1, "k2": self.k2,
                "L": str(self.L), "C0": str(self.C0), "d1": self.d1, "d2": self.d2,
                "invariant": self.invariant, "tubes": self.tubes}


def build_linked_map(axes: Sequence, k1: int, k2: int | None = None, L=8,
                     C0=DEFAULT_C0) -> MapBlueprint:
    """Pack ``d1`` U-tubes over ``(E_{k2}..E_n)`` and ``d2`` V-tubes over ``(E_1..E_{k2})``.

    ``k1 = k2 = 2`` on a 3-dimensional ellipse is the Hopf case.
    """
    E = tuple(Fraction(a) for a in axes)
    if any(a <= 0 for a in E) or list(E) != sorted(E):
        raise ValueError(f"axes must be positive and sorted ascending, got {list(axes)}")
    n = len(E) - 1
    if k2 is None:
        k2 = n + 1 - k1
    if k1 + k2 != n + 1 or not 2 <= k1 <= k2:
        raise ValueError(f"need k1 + k2 = n + 1 = {n + 1} and 2 <= k1 <= k2, got {k1}, {k2}")
    L, C0 = Fraction(L), Fraction(C0)
    if C0 <= 0:
        raise ValueError("C0 must be positive")
    if L <= C0 / E[1]:
        raise ValueError(f"inadmissible: need L > C0/E_1 = {C0 / E[1]}, got L = {L}")
    u_sides = E[k2:]
    v_sides = E[1:k2 + 1]
    d1 = degree_pack(u_sides, L, C0)
    d2 = degree_pack(v_sides, L, C0)
    tubes = {
        "thickness": str(C0 / L),
        "U": {"core_dim": k2 - 1, "packing_axes": list(range(k2, n + 1)),
              "packing_sides": [str(s) for s in u_sides], "count": d1},
        "V": {"core_dim": k1 - 1, "packing_axes": list(range(1, k2 + 1)),
              "packing_sides": [str(s) for s in v_sides], "count": d2},
    }
    b = MapBlueprint(E, k1, k2, L, C0, d1, d2, tubes)
    upper = bounds.ellipse_bound(E, L, k1, k2).value
    if b.invariant * C0 ** (n + 1) > upper:
        raise AssertionError(f"invariant {b.invariant} exceeds upper bound {upper} / C0^{n + 1}")
    return b


def fiber_grid(n: int, copies: int) -> DoubleGeometry:
    side = max(4, 4 * copies)
    return double((side,) * n)


def _counts(copies) -> tuple[int, int]:
    c1, c2 = (copies, copies) if isinstance(copies, int) else tuple(copies)
    if c1 < 0 or c2 < 0:
        raise ValueError("copies must be nonnegative")
    return c1, c2


def blueprint_fibers(b: MapBlueprint, copies, grid: DoubleGeometry | None = None
                     ) -> tuple[list[Chain], list[Chain]]:
    """Explicit fiber chains: U copies (primal) and V copies (offset).

    ``copies`` is a count for both families or a pair ``(u_count, v_count)``.
    Copies are translates of the linked pair; U moves along the last axis and
    V along axis 0.
    """
    c1, c2 = _counts(copies)
    n = b.n
    if grid is None:
        grid = fiber_grid(n, max(c1, c2))
    if grid.n != n:
        raise ValueError(f"grid has dimension {grid.n}, blueprint {n}")
    side = min(grid.axes)
    if side < max(4, 4 * max(c1, c2)):
        raise ValueError(f"grid side {side} has no room for {max(c1, c2)} disjoint copies")
    if not c1 and not c2:
        return [], []
    u0 = core_u(grid, b.k2)
    v0 = core_v(grid, b.k2)
    sign = linking_number(u0, v0)
    if abs(sign) != 1:
        raise AssertionError(f"core pair has linking number {sign}")
    us = [core_u(grid, b.k2, shift=j) for j in range(c1)]
    vs = [core_v(grid, b.k2, shift=j, sign=sign) for j in range(c2)]
    return us, vs


def _u_cap(grid: DoubleGeometry, u: Chain, k2: int, shift: int) -> Chain:
    # doubled box over the core's axes plus the last axis from 0 up to the core
    n = grid.n
    last = grid.axes[n - 1] // 2 + shift
    lo = {i: 0 for i in range(k2 - 1)}
    hi = {i: grid.axes[i] for i in range(k2 - 1)}
    lo[n - 1], hi[n - 1] = 0, last
    fixed = {i: grid.axes[i] // 2 for i in range(k2 - 1, n - 1)}
    cap = box_chain(grid, lo, hi, fixed, hemi=NORTH) - box_chain(grid, lo, hi, fixed, hemi=SOUTH)
    bc = boundary(cap)
    if bc == u:
        return cap
    if bc == -u:
        return -cap
    raise AssertionError("cap does not bound the U core")


def cross_validate(b: MapBlueprint, copies=2) -> dict:
    """Sum oracle linking numbers over explicit fibers and compare with the blueprint.

    With ``c1 = min(d1, copies)`` U-fibers and ``c2 = min(d2, copies)``
    V-fibers, every cross pair must link +1 (total ``c1 * c2``) and, when
    ``k1 = k2``, every same-family pair must link 0.  If both degrees are
    within ``copies`` the total must equal the invariant exactly.
    """
    c1, c2 = min(b.d1, copies), min(b.d2, copies)
    grid = fiber_grid(b.n, max(c1, c2, 1))
    us, vs = blueprint_fibers(b, (c1, c2), grid)
    cross = [[linking_number(u, v) for v in vs] for u in us]
    total = sum(map(sum, cross))
    same_u, same_v = [], []
    if b.k1 == b.k2:
        for i in range(c1):
            cap = _u_cap(grid, us[i], b.k2, i)
            for j in range(i + 1, c1):
                if not supports_disjoint(cap, us[j]):
                    raise AssertionError("U cap meets a parallel copy")
                same_u.append(0)
        for i in range(c2):
            primal = boundary(_core_v_box(grid, b.k2, i, PRIMAL))
            for j in range(c2):
                if i != j:
                    same_v.append(linking_number(primal, vs[j]))
    exact = b.d1 <= copies and b.d2 <= copies
    ok = (all(x == 1 for row in cross for x in row) and total == c1 * c2
          and not any(same_u) and not any(same_v) and (not exact or total == b.invariant))
    return {"u_copies": c1, "v_copies": c2, "cross": cross, "total": total,
            "same_family_u": same_u, "same_family_v": same_v,
            "exact": exact, "invariant": b.invariant, "ok": ok}
