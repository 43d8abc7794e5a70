"""Independent checks: minimal fillings by L1 optimization, intersection and linking numbers."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np
from scipy import optimize, sparse

from .chains import (
    NORTH,
    OFFSET,
    PRIMAL,
    SOUTH,
    Cell,
    Chain,
    Geometry,
    boundary,
    canonical_terms,
    cell_on_wall,
)

DEFAULT_ILP_MAX_NONZEROS = 400_000


class NotABoundaryError(ValueError):
    pass


class BudgetError(ValueError):
    pass


def all_cells(geometry: Geometry, dim: int, lattice: str = PRIMAL) -> list[Cell]:
    """Every canonical cell of dimension ``dim``, in a fixed order."""
    axes = geometry.axes
    n = len(axes)
    hemis = (NORTH, SOUTH) if geometry.is_double else (NORTH,)
    out = []
    for hemi in hemis:
        for span in combinations(range(n), dim):
            ranges = []
            for i, r in enumerate(axes):
                if lattice == PRIMAL:
                    ranges.append(range(r) if i in span else range(r + 1))
                else:
                    ranges.append(range(r - 1) if i in span else range(r))
            for base in product(*ranges):
                cell = Cell(hemi, base, span)
                if hemi == SOUTH and lattice == PRIMAL and cell_on_wall(axes, cell):
                    continue
                out.append(cell)
    return out


def count_cells(geometry: Geometry, dim: int) -> int:
    """Upper estimate of the number of primal cells of dimension ``dim`` (both hemispheres)."""
    axes = geometry.axes
    total = 0
    for span in combinations(range(len(axes)), dim):
        total += int(np.prod([r if i in span else r + 1 for i, r in enumerate(axes)]))
    return total * (2 if geometry.is_double else 1)


@dataclass(frozen=True)
class FillingLP:
    """The cubical boundary matrix from (k+1)-cells (columns) to k-cells (rows)."""

    geometry: Geometry
    k: int
    columns: tuple[Cell, ...]
    rows: tuple[Cell, ...]
    row_index: dict
    matrix: sparse.csc_matrix

    @property
    def nonzeros(self) -> int:
        return self.matrix.nnz

    def target(self, z: Chain) -> np.ndarray:
        rhs = np.zeros(len(self.rows))
        for cell, coef in z.items():
            rhs[self.row_index[cell]] = coef
        return rhs

    def dump(self, path) -> None:
        """Plain-text dump: column cells, then one ``row col +-1`` line per nonzero."""
        coo = self.matrix.tocoo()
        with open(path, "w") as fh:
            fh.write(f"# columns {len(self.columns)} rows {len(self.rows)} nonzeros {coo.nnz}\n")
            for j, cell in enumerate(self.columns):
                fh.write(f"col {j} {cell.hemi} {list(cell.base)} {list(cell.span)}\n")
            for i, j, v in sorted(zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist())):
                fh.write(f"{i} {j} {int(v):+d}\n")


@functools.lru_cache(maxsize=16)
def filling_lp(geometry: Geometry, k: int) -> FillingLP:
    rows = all_cells(geometry, k)
    row_index = {c: i for i, c in enumerate(rows)}
    columns = all_cells(geometry, k + 1)
    ri, ci, vals = [], [], []
    for j, cell in enumerate(columns):
        faces = boundary(Chain(geometry, k + 1, [(cell, 1)], check=False))
        for face, coef in faces.items():
            ri.append(row_index[face])
            ci.append(j)
            vals.append(coef)
    matrix = sparse.csc_matrix((vals, (ri, ci)), shape=(len(rows), len(columns)), dtype=float)
    return FillingLP(geometry, k, tuple(columns), tuple(rows), row_index, matrix)


@dataclass(frozen=True)
class MinFilling:
    value: float
    witness: dict          # cell -> coefficient (float for lp, int for ilp)
    mode: str

    def chain(self, geometry: Geometry, k: int) -> Chain:
        if self.mode != "ilp":
            raise ValueError("only the ilp witness is an integral chain")
        return Chain(geometry, k + 1, self.witness, check=False)


def min_filling(z: Chain, mode: str = "lp", max_nonzeros: int | None = None) -> MinFilling:
    """Minimize ``sum |y_c|`` subject to ``boundary(y) = z``.

    ``lp`` relaxes to real coefficients (a lower bound on the integral filling
    volume); ``ilp`` solves the integral problem exactly.
    """
    if mode not in ("lp", "ilp"):
        raise ValueError(f"mode must be 'lp' or 'ilp', got {mode!r}")
    if z.lattice != PRIMAL:
        raise ValueError("min_filling works on primal chains")
    geometry, k = z.geometry, z.dim
    if not 1 <= k <= geometry.n - 1:
        raise ValueError(f"cycle dimension must be in [1, {geometry.n - 1}], got {k}")
    if boundary(z):
        raise NotABoundaryError("input is not a cycle")
    if max_nonzeros is None and mode == "ilp":
        max_nonzeros = DEFAULT_ILP_MAX_NONZEROS
    if max_nonzeros is not None:
        estimate = count_cells(geometry, k + 1) * 2 * (k + 1)
        if estimate > max_nonzeros:
            raise BudgetError(f"{mode} instance ~{estimate} nonzeros exceeds threshold {max_nonzeros}")
    if not z:
        return MinFilling(0.0, {}, mode)
    lp = filling_lp(geometry, k)
    m = len(lp.columns)
    a_eq = sparse.hstack([lp.matrix, -lp.matrix], format="csc")
    b_eq = lp.target(z)
    cost = np.ones(2 * m)
    if mode == "lp":
        res = optimize.linprog(cost, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
        if res.status == 2:
            raise NotABoundaryError("cycle is not a boundary (LP infeasible)")
        if res.status != 0:
            raise RuntimeError(f"LP solve failed: {res.message}")
        x = res.x[:m] - res.x[m:]
        witness = {lp.columns[j]: float(x[j]) for j in np.flatnonzero(np.abs(x) > 1e-9)}
        return MinFilling(float(res.fun), witness, mode)
    res = optimize.milp(cost, constraints=optimize.LinearConstraint(a_eq, b_eq, b_eq),
                        integrality=np.ones(2 * m), bounds=optimize.Bounds(0, np.inf))
    if res.status == 2:
        raise NotABoundaryError("cycle is not a boundary (ILP infeasible)")
    if res.status != 0:
        raise RuntimeError(f"ILP solve failed: {res.message}")
    x = np.rint(res.x[:m] - res.x[m:]).astype(int)
    witness = {lp.columns[j]: int(x[j]) for j in np.flatnonzero(x)}
    value = int(np.abs(x).sum())
    return MinFilling(float(value), witness, mode)


def _frame_parity(frame: tuple[int, ...]) -> int:
    inversions = sum(1 for i in range(len(frame)) for j in range(i + 1, len(frame)) if frame[i] > frame[j])
    return -1 if inversions % 2 else 1


def intersection_number(a: Chain, b: Chain) -> int:
    """Signed transverse intersection count of a primal and an offset chain.

    Each meeting cell pair contributes the sign of the permutation taking the
    concatenated frames (``a``'s span, then ``b``'s) to ``0..n-1``, times the
    coefficients, times ``-1`` in the S hemisphere.
    """
    if a.geometry != b.geometry:
        raise ValueError("chains live on different geometries")
    if a.lattice == b.lattice:
        raise ValueError("intersection needs one primal and one offset chain")
    n = a.geometry.n
    if a.dim + b.dim != n:
        raise ValueError(f"dimensions {a.dim} + {b.dim} do not add up to {n}")
    primal, offset = (a, b) if a.lattice == PRIMAL else (b, a)
    total = 0
    for cell, coef in offset.items():
        hemi, q, bspan = cell
        aspan = tuple(i for i in range(n) if i not in bspan)
        # the primal cell meeting this offset cell: same base along its own span,
        # one step up along the offset cell's span
        p = tuple(q[i] + 1 if i in bspan else q[i] for i in range(n))
        other = primal.coef(Cell(hemi, p, aspan))
        if not other:
            continue
        frame = (aspan + bspan) if a is primal else (bspan + aspan)
        sign = _frame_parity(frame) * (1 if hemi == NORTH else -1)
        total += sign * coef * other
    return total


def linking_number(z1: Chain, z2: Chain, filling: Chain | None = None) -> int:
    """Linking number of a primal k-cycle with an offset (n-k-1)-cycle.

    Computed as the intersection of a filling of ``z1`` with ``z2``.  The
    filling defaults to the constructive one; any integral filling (e.g. an
    ILP witness) may be passed instead.  Primal and offset cells of total
    dimension below ``n`` can never meet, so the supports are disjoint by
    construction.
    """
    from .filler import fill_absolute, fill_double

    if z1.lattice != PRIMAL or z2.lattice != OFFSET:
        raise ValueError("linking_number needs a primal z1 and an offset z2")
    n = z1.geometry.n
    if z1.dim + z2.dim != n - 1:
        raise ValueError(f"dimensions {z1.dim} + {z2.dim} must add up to {n - 1}")
    if boundary(z1) or boundary(z2):
        raise ValueError("both arguments must be cycles")
    if z2.dim == 0 and sum(k for _, k in z2.items()) != 0:
        raise ValueError("a 0-dimensional z2 must have coefficient sum 0")
    hemis = {cell.hemi for cell in z2.cells()}
    if len(hemis) > 1:
        raise ValueError("z2 must lie in the interior of a single hemisphere")
    if filling is None:
        filling = (fill_double(z1) if z1.geometry.is_double else fill_absolute(z1)).filling
    elif boundary(filling) != z1:
        raise ValueError("the supplied filling does not bound z1")
    return intersection_number(filling, z2)


def closed_vertices(c: Chain) -> set:
    """Canonical vertices of the closure of a primal chain's support."""
    geometry = c.geometry
    out = set()
    for cell in c.cells():
        for offs in product(*((0, 1) if i in cell.span else (0,) for i in range(geometry.n))):
            base = tuple(b + o for b, o in zip(cell.base, offs))
            out.update(canonical_terms(geometry, [(Cell(cell.hemi, base, ()), 1)]).keys())
    return out


def supports_disjoint(a: Chain, b: Chain) -> bool:
    """True if the closed supports of two primal chains share no point."""
    if a.lattice != PRIMAL or b.lattice != PRIMAL:
        raise ValueError("supports_disjoint compares primal chains")
    return not (closed_vertices(a) & closed_vertices(b))
