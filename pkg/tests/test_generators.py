import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from isofill.chains import NORTH, OFFSET, SOUTH, boundary, double, on_walls, rectangle
from isofill.generators import (
    MIN_LINK_AXIS,
    core_u,
    core_v,
    doubled_box,
    equator,
    linked_pair,
    random_box_cycle,
    random_chain,
    random_cycle,
    random_relative_cycle,
    sample_cells,
)
from isofill.oracle import linking_number


class TestEquators:
    def test_small_and_large(self):
        g = double((2, 4, 4))
        assert equator(g, 1, "smallest").mass == 4
        assert equator(g, 1, "largest").mass == 8

    @pytest.mark.parametrize("axes", [(2, 4, 8), (2, 2, 4, 8), (3, 4, 5, 6, 7)])
    def test_closed_form_masses(self, axes):
        g = double(axes)
        n = g.n
        for k in range(1, n):
            small = equator(g, k, "smallest")
            large = equator(g, k, "largest")
            assert small.mass == 2 * math.prod(axes[:k])
            assert large.mass == 2 * math.prod(axes[n - k:])
            assert not boundary(small) and not boundary(large)

    def test_rim_lies_in_walls(self):
        g = double((2, 4, 4))
        z = equator(g, 1, "rim")
        assert not boundary(z) and on_walls(z)
        assert {c.hemi for c in z.cells()} == {NORTH}
        assert z.mass == 16

    def test_crosses_both_hemispheres(self):
        z = equator(double((2, 4, 4)), 2)
        assert {c.hemi for c in z.cells()} == {NORTH, SOUTH}

    @pytest.mark.parametrize("k", [0, 3])
    def test_dimension_range(self, k):
        with pytest.raises(ValueError, match="dimension"):
            equator(double((2, 4, 4)), k)

    def test_unknown_family(self):
        with pytest.raises(ValueError, match="unknown"):
            equator(double((2, 4, 4)), 1, "medium")

    def test_needs_interior_position(self):
        with pytest.raises(ValueError, match="strictly inside"):
            doubled_box(double((1, 2, 2)), (1,), {0: 0, 2: 1})


class TestRandom:
    def test_density_zero(self):
        assert not random_cycle(double((2, 3, 4)), 1, 0, 0)

    def test_replay(self):
        g = double((2, 3, 4))
        assert random_cycle(g, 1, 7, 6) == random_cycle(g, 1, 7, 6)
        assert random_cycle(g, 1, 7, 6) != random_cycle(g, 1, 8, 6)

    def test_many_cycles(self):
        for g in (double((2, 3, 4)), rectangle((2, 2, 3))):
            for seed in range(1000):
                k = 1 + seed % (g.n - 1)
                assert not boundary(random_cycle(g, k, seed, 3))

    def test_coefficients(self):
        c = random_chain(double((3, 3)), 1, 5, 1)
        assert all(abs(k) in (1, 2) for _, k in c.items())

    def test_offset_chain(self):
        c = random_chain(double((3, 3)), 1, 5, 6, OFFSET)
        assert c.lattice == OFFSET

    @given(st.integers(0, 10 ** 6), st.integers(0, 3))
    def test_relative_cycles(self, seed, k):
        r = rectangle((2, 3, 3, 4))
        z = random_relative_cycle(r, k, seed, 5)
        assert on_walls(boundary(z))
        assert not any(on_walls(z.restrict(lambda c, cell=cell: c == cell)) for cell in z.cells())

    def test_relative_needs_rectangle(self):
        with pytest.raises(ValueError, match="single rectangle"):
            random_relative_cycle(double((2, 3)), 1, 0, 3)

    @given(st.integers(0, 10 ** 6))
    def test_box_cycles(self, seed):
        g = double((2, 3, 4))
        z = random_box_cycle(g, 1, seed)
        assert z.dim == 1 and not boundary(z)

    def test_sample_cells(self):
        g = double((2, 2))
        cells = sample_cells(g, 1, 50, 3)
        assert len(cells) == 50 and all(c.dim == 1 for c in cells)
        assert cells == sample_cells(g, 1, 50, 3)


class TestLinkedPair:
    @pytest.mark.parametrize("n,k1", [(3, 2), (4, 2), (5, 2), (5, 3)])
    def test_linking_one(self, n, k1):
        g = double((4,) * n)
        u, v = linked_pair(g, k1, n + 1 - k1)
        assert u.dim == n - k1 and v.dim == k1 - 1
        assert u.lattice != v.lattice == OFFSET
        assert {c.hemi for c in v.cells()} == {NORTH}
        assert linking_number(u, v) == 1

    def test_too_small(self):
        with pytest.raises(ValueError, match=f"at least {MIN_LINK_AXIS}"):
            linked_pair(double((3, 4, 4)), 2, 2)

    @pytest.mark.parametrize("k1,k2", [(1, 3), (2, 3), (3, 1)])
    def test_inadmissible(self, k1, k2):
        with pytest.raises(ValueError, match="k1 \\+ k2"):
            linked_pair(double((4, 4, 4)), k1, k2)

    def test_translates_are_disjoint_cycles(self):
        g = double((8, 8, 8, 8))
        us = [core_u(g, 3, j) for j in range(2)]
        vs = [core_v(g, 3, j) for j in range(2)]
        assert not set(us[0].cells()) & set(us[1].cells())
        assert not set(vs[0].cells()) & set(vs[1].cells())
        assert all(not boundary(c) for c in us + vs)
