"""Closed-form bound evaluators.

All dimensional constants ``C(n)``, ``c(n)`` are set to 1, so values are
meaningful up to such factors; comparisons use ratios and scaling exponents.
Inputs are coerced to :class:`fractions.Fraction` so every value is exact.

Axis conventions: ``principal_axes`` means the full list ``E_0 <= ... <= E_n``
of an n-dimensional ellipse; ``rect_axes`` means ``E_1 ... E_n`` (the sides of
the rectangle whose double models the ellipse).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

Number = int | float | str | Fraction


def _q(x: Number) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x)) if isinstance(x, float) else Fraction(x)


@dataclass(frozen=True)
class BoundReport:
    proposition: str
    inputs: dict[str, Any]
    value: Fraction
    side: str
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.value < 0:
            raise ValueError(f"bound value must be nonnegative, got {self.value}")
        if self.side not in ("upper", "lower"):
            raise ValueError(f"side must be 'upper' or 'lower', got {self.side!r}")

    def to_json(self) -> dict:
        return {"proposition": self.proposition,
                "inputs": {k: _jsonable(v) for k, v in self.inputs.items()},
                "value": str(self.value), "value_float": float(self.value),
                "side": self.side, "meta": {k: _jsonable(v) for k, v in self.meta.items()}}

    def csv_row(self) -> dict:
        return {"proposition": self.proposition, "side": self.side, "value": str(self.value),
                "value_float": float(self.value),
                "inputs": ";".join(f"{k}={_jsonable(v)}" for k, v in self.inputs.items())}


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _positive(**named) -> dict[str, Fraction]:
    out = {}
    for name, v in named.items():
        q = _q(v)
        if q <= 0:
            raise ValueError(f"{name} must be positive, got {v}")
        out[name] = q
    return out


def _sorted_axes(axes: Sequence[Number], name: str) -> list[Fraction]:
    qs = [_q(a) for a in axes]
    if any(a <= 0 for a in qs):
        raise ValueError(f"{name} must be positive, got {list(axes)}")
    if qs != sorted(qs):
        raise ValueError(f"{name} must be sorted ascending, got {list(axes)}")
    return qs


def gromov_bound(iso: Number, vol: Number, areas: Number | Sequence[Number], L: Number,
                 n: int = 3) -> BoundReport:
    """Upper bound on the Hopf invariant (one target area) or linking invariant (two areas).

    One area: ``iso * vol * area^-2 * L^4``.  Two areas:
    ``iso * vol * a1^-1 * a2^-1 * L^(n+1)``.
    """
    if isinstance(areas, (list, tuple)):
        if len(areas) not in (1, 2):
            raise ValueError("give one area (Hopf) or two (linking)")
        areas = list(areas)
    else:
        areas = [areas]
    p = _positive(iso=iso, vol=vol, L=L, **{f"area{i + 1}": a for i, a in enumerate(areas)})
    if len(areas) == 1:
        value = p["iso"] * p["vol"] / p["area1"] ** 2 * p["L"] ** 4
        return BoundReport("hopf_gromov", p, value, "upper", {"L_exponent": 4})
    value = p["iso"] * p["vol"] / (p["area1"] * p["area2"]) * p["L"] ** (n + 1)
    return BoundReport("linking_gromov", {**p, "n": n}, value, "upper", {"L_exponent": n + 1})


def ellipse_bound(principal_axes: Sequence[Number], L: Number, k1: int | None = None,
                  k2: int | None = None) -> BoundReport:
    """Upper bound for maps from an ellipse to unit spheres.

    Without ``k1, k2`` (n = 3): the Hopf bound ``E_1 E_2^2 E_3 L^4``.  With
    them: the linking bound ``E_{k2} (E_1...E_n) L^(n+1)``, the ellipse
    volume replaced by the product of its axes.
    """
    E = _sorted_axes(principal_axes, "principal axes")
    n = len(E) - 1
    Lq = _positive(L=L)["L"]
    vol = math.prod(E[1:])
    if k1 is None and k2 is None:
        if n != 3:
            raise ValueError("the Hopf bound needs a 3-dimensional ellipse (four principal axes)")
        value = E[1] * E[2] ** 2 * E[3] * Lq ** 4
        return BoundReport("hopf_ellipse", {"axes": E, "L": Lq}, value, "upper", {"L_exponent": 4})
    if k2 is None:
        k2 = n + 1 - k1
    if k1 is None:
        k1 = n + 1 - k2
    if k1 + k2 != n + 1 or not 2 <= k1 <= k2:
        raise ValueError(f"need k1 + k2 = n + 1 and 2 <= k1 <= k2, got {k1}, {k2} for n={n}")
    value = E[k2] * vol * Lq ** (n + 1)
    return BoundReport("linking_ellipse", {"axes": E, "L": Lq, "k1": k1, "k2": k2}, value, "upper",
                       {"L_exponent": n + 1})


def iso_formula(rect_axes: Sequence[Number], k: int) -> BoundReport:
    """``E_{k+1} + E_{n-k}``, the two-sided estimate of the k-th isoperimetric constant."""
    E = _sorted_axes(rect_axes, "axes")
    n = len(E)
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must be in [1, {n - 1}], got {k}")
    value = E[k] + E[n - k - 1]
    return BoundReport("iso_ellipse", {"axes": E, "k": k}, value, "upper",
                       {"terms": [str(E[k]), str(E[n - k - 1])]})


def kdilation_bound(E_axes: Sequence[Number], E_prime_axes: Sequence[Number], k: int,
                    D: int) -> BoundReport:
    """Lower bound for ``Dil_k(F)^((n+1)/k)`` of a degree-D map between ellipses.

    ``|D| Q_{n+1-k} prod_{i=1..n} Q_i`` with ``Q_i = E'_i / E_i``.
    """
    E = _sorted_axes(E_axes, "E axes")
    Ep = _sorted_axes(E_prime_axes, "E' axes")
    if len(E) != len(Ep):
        raise ValueError("both ellipses need the same number of axes")
    n = len(E) - 1
    if not 1 <= k or 2 * k > n + 1:
        raise ValueError(f"need 1 <= k <= (n+1)/2 = {Fraction(n + 1, 2)}, got {k}")
    Q = [ep / e for e, ep in zip(E, Ep)]
    value = abs(int(D)) * Q[n + 1 - k] * math.prod(Q[1:])
    meta = {"exponent": str(Fraction(n + 1, k)),
            "dilation_lower_bound": float(value) ** (k / (n + 1)) if value else 0.0,
            "product_index_note": "displayed product reads prod Q_n; evaluated as prod_i Q_i"}
    return BoundReport("kdilation", {"E": E, "E_prime": Ep, "k": k, "D": int(D)}, value, "lower", meta)


def bad_example_bound(A: Number, w: Number, L: Number) -> tuple[BoundReport, BoundReport, Fraction]:
    """Naive ``A w^2 L^4`` against the improved ``(1 + A w^3) L^4`` for the thin-tube sphere."""
    p = _positive(A=A, w=w, L=L)
    A_, w_, L_ = p["A"], p["w"], p["L"]
    if not (A_ >= 1 >= w_ and A_ * w_ ** 2 > 1):
        warnings.warn(f"outside the thin long tube regime (A >= 1 >= w, A w^2 > 1): A={A}, w={w}",
                      stacklevel=2)
    naive = A_ * w_ ** 2 * L_ ** 4
    improved = (1 + A_ * w_ ** 3) * L_ ** 4
    inputs = {"A": A_, "w": w_, "L": L_}
    return (BoundReport("bad_example_naive", inputs, naive, "upper", {"L_exponent": 4}),
            BoundReport("bad_example_improved", inputs, improved, "upper", {"L_exponent": 4}),
            naive / improved)


def hopf_composition(L: Number, C0: Number = 4) -> tuple[int, int, Fraction]:
    """Degree ``D = floor(L/C0)^2`` sphere map precomposed before the Hopf map.

    Returns ``(D, D^2, c)`` where ``D^2 >= c L^4`` with ``c = C0^-4 (1 - C0/L)^4``.
    ``L <= C0`` gives ``D = 0``.
    """
    p = _positive(L=L, C0=C0)
    L_, C0_ = p["L"], p["C0"]
    if L_ <= C0_:
        return 0, 0, Fraction(0)
    D = math.floor(L_ / C0_) ** 2
    c = (1 - C0_ / L_) ** 4 / C0_ ** 4
    return D, D * D, c
