"""Seeded experiment runners producing deterministic JSON-ready reports."""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import bounds
from .chains import double
from .constructions import DEFAULT_C0, build_linked_map
from .filler import fill_double, k4
from .generators import equator, random_box_cycle, random_cycle
from .oracle import BudgetError, count_cells, min_filling

DEFAULT_LP_BUDGET = 200_000
MAX_GRID_CELLS = 2_000_000
FLOAT_DIGITS = 10


def _round(x: float) -> float:
    return float(round(x, FLOAT_DIGITS))


def config_hash(config: dict) -> str:
    return hashlib.sha256(json.dumps(config, sort_keys=True).encode()).hexdigest()[:16]


def dumps(report) -> str:
    """Canonical JSON text of a report (byte-stable for equal reports)."""
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def grid_axes(axes: Sequence, resolution: int) -> tuple[int, ...]:
    if resolution < 1:
        raise ValueError(f"resolution must be a positive integer, got {resolution}")
    out = tuple(int(round(Fraction(a) * resolution)) for a in axes)
    if any(r < 1 for r in out):
        raise ValueError(f"axes {list(axes)} at resolution {resolution} give an empty grid side")
    if list(out) != sorted(out):
        raise ValueError(f"axes must be sorted ascending, got {list(axes)}")
    return out


def _sample_cycle(g, k: int, seed: int, index: int, density: int):
    ss = np.random.SeedSequence((seed, index))
    rng = np.random.default_rng(ss)
    child = int(rng.integers(2 ** 63))
    if rng.random() < 0.5:
        return "random", random_cycle(g, k, child, int(rng.integers(1, density + 1)))
    return "box", random_box_cycle(g, k, child)


def run_iso_experiment(axes: Sequence, k: int, samples: int, seed: int = 0,
                       include_equators: bool = True, resolution: int = 1, density: int = 6,
                       lp_budget: int = DEFAULT_LP_BUDGET) -> dict:
    """Bracket the k-th isoperimetric constant of the double of ``axes``.

    For each cycle: its mass, the constructive filling with its certificate,
    and the LP lower bound on the filling volume.  Cycles are ``samples``
    random ones plus, optionally, the three equator families.  Volumes are
    reported in grid units and in physical units (divided by ``resolution^dim``).
    """
    if samples < 0:
        raise ValueError("samples must be nonnegative")
    if density < 1:
        raise ValueError("density must be at least 1")
    grid = grid_axes(axes, resolution)
    n = len(grid)
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must be in [1, {n - 1}], got {k}")
    config = {"axes": [str(Fraction(a)) for a in axes], "k": k, "samples": samples, "seed": seed,
              "include_equators": include_equators, "resolution": resolution,
              "density": density, "lp_budget": lp_budget}
    report = {"config": config, "config_hash": config_hash(config), "seed": seed,
              "grid_axes": list(grid), "samples": [], "summary": {}}
    if samples == 0 and not include_equators:
        return report
    g = double(grid)
    cells = count_cells(g, k + 1)
    if cells > MAX_GRID_CELLS:
        raise BudgetError(f"grid {grid} has ~{cells} cells of dimension {k + 1}, "
                          f"above the limit {MAX_GRID_CELLS}")
    lp_nonzeros = cells * 2 * (k + 1)
    run_lp = lp_nonzeros <= lp_budget
    cases = []
    if include_equators:
        for which in ("smallest", "largest", "rim"):
            try:
                cases.append((f"equator:{which}", equator(g, k, which)))
            except ValueError:
                continue
    for i in range(samples):
        cases.append(_sample_cycle(g, k, seed, i, density))
    scale_z = resolution ** k
    scale_y = resolution ** (k + 1)
    K4 = k4(n, k)
    iso = bounds.iso_formula(grid, k).value
    rows = []
    for index, (kind, z) in enumerate(cases):
        m = z.mass
        if not m:
            rows.append({"index": index, "kind": kind, "mass": 0, "skipped": "zero cycle"})
            continue
        cert = fill_double(z)
        row = {"index": index, "kind": kind, "mass": m, "fill_mass": cert.mass,
               "certified_bound": str(cert.certified_bound),
               "fill_ratio": _round(cert.mass / m),
               "physical_mass": _round(m / scale_z),
               "physical_fill_mass": _round(cert.mass / scale_y)}
        if run_lp:
            lp = min_filling(z, "lp")
            row["lp_lower"] = _round(lp.value)
            row["lp_ratio"] = _round(lp.value / m)
            if lp.value > cert.mass + 1e-7:
                raise AssertionError(f"LP value {lp.value} exceeds constructive mass {cert.mass}")
        else:
            row["lp_lower"] = None
            row["lp_skipped"] = f"~{lp_nonzeros} nonzeros over budget {lp_budget}"
        rows.append(row)
    report["samples"] = rows
    filled = [r for r in rows if "fill_mass" in r]
    upper = max((r["fill_mass"] / r["mass"] for r in filled), default=0.0)
    lowers = [r["lp_lower"] / r["mass"] for r in filled if r.get("lp_lower") is not None]
    lower = max(lowers) if lowers else None
    report["summary"] = {
        "cycles": len(filled),
        "iso_formula": str(iso),
        "K4": K4,
        "K4_iso_formula": str(K4 * iso),
        "iso_upper_estimate": _round(upper),
        "iso_lower_estimate": None if lower is None else _round(lower),
        "iso_upper_physical": _round(upper / resolution),
        "iso_lower_physical": None if lower is None else _round(lower / resolution),
        "upper_within_formula": upper <= K4 * iso,
        "sandwich_ok": lower is None or lower <= upper + 1e-9,
    }
    return report


def run_construction_sweep(axes: Sequence, k1: int, L_list: Sequence, C0=DEFAULT_C0) -> dict:
    """Invariant, upper bound and their ratio per L, plus the fitted log-log slope."""
    if not L_list:
        raise ValueError("L_list must be nonempty")
    n = len(axes) - 1
    k2 = n + 1 - k1
    rows = []
    for L in L_list:
        try:
            b = build_linked_map(axes, k1, k2, L, C0)
        except ValueError as exc:
            if "inadmissible" not in str(exc):
                raise
            rows.append({"L": str(Fraction(L)), "rejected": True, "reason": str(exc)})
            continue
        upper = bounds.ellipse_bound(b.axes, b.L, k1, k2).value
        rows.append({"L": str(b.L), "rejected": False, "d1": b.d1, "d2": b.d2,
                     "invariant": b.invariant, "upper_bound": str(upper),
                     "ratio": _round(float(upper / b.invariant)) if b.invariant else None})
    good = [r for r in rows if not r["rejected"] and r["invariant"] > 0]
    if not good:
        raise ValueError("every L in the sweep is inadmissible or gives a zero invariant")
    fit = {"slope": None, "intercept": None, "residuals": []}
    if len(good) >= 2:
        x = np.log([float(Fraction(r["L"])) for r in good])
        y = np.log([float(r["invariant"]) for r in good])
        slope, intercept = np.polyfit(x, y, 1)
        fit = {"slope": _round(slope), "intercept": _round(intercept),
               "residuals": [_round(v) for v in y - (slope * x + intercept)]}
    ratios = [r["ratio"] for r in good]
    return {"config": {"axes": [str(Fraction(a)) for a in axes], "k1": k1, "k2": k2,
                       "L_list": [str(Fraction(L)) for L in L_list], "C0": str(Fraction(C0))},
            "rows": rows, "fit": fit, "expected_slope": n + 1,
            "ratio_min": min(ratios), "ratio_max": max(ratios),
            "ratio_spread": _round(max(ratios) / min(ratios) - 1)}


def equator_slope(axes: Sequence, k: int, scales=(1, 2)) -> dict:
    """Log-log slope of the largest equator LP ratio against ``R_{k+1} + R_{n-k}`` under scaling."""
    pts = []
    for s in scales:
        grid = grid_axes(axes, s)
        g = double(grid)
        best = 0.0
        for which in ("smallest", "largest", "rim"):
            try:
                z = equator(g, k, which)
            except ValueError:
                continue
            best = max(best, min_filling(z, "lp").value / z.mass)
        pts.append((float(bounds.iso_formula(grid, k).value), best))
    x = np.log([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    slope = float(np.polyfit(x, y, 1)[0])
    return {"axes": list(axes), "k": k, "points": pts, "slope": slope}


__all__ = ["run_iso_experiment", "run_construction_sweep", "equator_slope", "dumps",
           "config_hash", "grid_axes"]
