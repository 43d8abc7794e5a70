from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from isofill.chains import NORTH, Cell, Chain, boundary, double, on_walls, rectangle, volumes
from isofill.filler import (
    K1,
    K2,
    K3,
    FillerInvariantError,
    NotACycleError,
    fill_absolute,
    fill_double,
    fill_relative,
    k4,
    absolute_fill_bound,
    prism_project,
    slice_select,
    sweep_cost,
)
from isofill.generators import box_chain, equator, random_chain, random_cycle, random_relative_cycle
from strategies import axes_lists


def square_boundary():
    # boundary of [2,3] x [1,2] in R = (4, 4)
    r = rectangle((4, 4))
    return boundary(box_chain(r, {0: 2, 1: 1}, {0: 3, 1: 2}, {}))


def segment_three():
    # [0,3] x {1} in R = (3, 3)
    r = rectangle((3, 3))
    return Chain(r, 1, [(Cell(NORTH, (j, 1), (0,)), 1) for j in range(3)])


class TestConstants:
    def test_frozen_values(self):
        assert (K1, K2, K3) == (1, 1, 2)

    def test_k4_table(self):
        table = {(n, k): k4(n, k) for n in range(2, 6) for k in range(1, n)}
        assert table == {(2, 1): 3, (3, 1): 4, (3, 2): 3, (4, 1): 9, (4, 2): 5, (4, 3): 3,
                         (5, 1): 16, (5, 2): 12, (5, 3): 7, (5, 4): 3}

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_k4_within_safe_bound(self, n):
        for k in range(1, n):
            assert k4(n, k) <= 2 ** n * n * (K3 + K2 + 1)


class TestPrism:
    def test_square_columns_cancel(self):
        z = square_boundary()
        prism, image = prism_project(z, 0, "low")
        assert not image
        assert boundary(prism) == -z
        assert prism.mass == 1
        assert sweep_cost(z, 0, "low") == 5

    def test_high_wall(self):
        z = square_boundary()
        prism, image = prism_project(z, 0, "high")
        assert not image and boundary(prism) == -z
        assert sweep_cost(z, 0, "high") == 3

    def test_spanning_cell_is_degenerate(self):
        r = rectangle((3, 3))
        c = Chain(r, 1, [(Cell(NORTH, (1, 2), (0,)), 1)])
        prism, image = prism_project(c, 0)
        assert not prism and not image

    def test_rejects_double(self):
        with pytest.raises(ValueError, match="single rectangle"):
            prism_project(equator(double((2, 4, 4)), 1), 0)

    def test_rejects_top_dimension(self):
        r = rectangle((2, 2))
        with pytest.raises(ValueError, match="top-dimensional"):
            prism_project(Chain(r, 2, [(Cell(NORTH, (0, 0), (0, 1)), 1)]), 0)

    def test_bad_wall(self):
        with pytest.raises(ValueError, match="wall"):
            prism_project(square_boundary(), 0, "middle")

    @given(axes_lists(max_side=6), st.integers(0, 10 ** 6), st.integers(0, 8), st.data())
    def test_homotopy_identity(self, axes, seed, density, data):
        r = rectangle(axes)
        dim = data.draw(st.integers(0, r.n - 1))
        axis = data.draw(st.integers(0, r.n - 1))
        wall = data.draw(st.sampled_from(["low", "high"]))
        c = random_chain(r, dim, seed, density)
        prism, image = prism_project(c, axis, wall)
        q_of_boundary = prism_project(boundary(c), axis, wall)[0] if dim else Chain.zero(r, 0)
        assert boundary(prism) + q_of_boundary == image - c
        assert prism.mass <= sweep_cost(c, axis, wall)


class TestAbsoluteFill:
    def test_zero(self):
        cert = fill_absolute(Chain.zero(rectangle((2, 3)), 1))
        assert not cert.filling and cert.certified_bound == 0

    def test_square(self):
        z = square_boundary()
        cert = fill_absolute(z)
        assert boundary(cert.filling) == z
        assert cert.mass == 1
        assert cert.certified_bound == 8
        assert cert.bound_formula["terms"] == [{"span": [1], "e": 1, "weight": 4, "volume": 2}]

    def test_bound_weights(self):
        r = rectangle((2, 3, 4))
        z = boundary(box_chain(r, {1: 0, 2: 1}, {1: 2, 2: 3}, {0: 1}))
        total, terms = absolute_fill_bound(z)
        # spans (1,) and (2,) have e = 1 and e = 2 with weights R_1 = 2 and R_1+R_2 = 5
        assert {t["weight"] for t in terms} == {2, 5}
        assert total == 2 * 4 + 5 * 4

    def test_rejects_non_cycle(self):
        r = rectangle((3, 3))
        c = Chain(r, 1, [(Cell(NORTH, (1, 1), (0,)), 1)])
        with pytest.raises(NotACycleError) as info:
            fill_absolute(c)
        assert info.value.offending == boundary(c)

    def test_zero_cycle_needs_balance(self):
        r = rectangle((3, 3))
        with pytest.raises(NotACycleError, match="sum 0"):
            fill_absolute(Chain(r, 0, [(Cell(NORTH, (1, 1), ()), 1)]))

    def test_zero_cycle(self):
        r = rectangle((3, 3))
        z = Chain(r, 0, [(Cell(NORTH, (1, 1), ()), 1), (Cell(NORTH, (2, 3), ()), -1)])
        assert boundary(fill_absolute(z).filling) == z

    @pytest.mark.parametrize("axes", [(2, 3, 4), (2, 2, 4, 8)])
    def test_random_cycles(self, axes):
        r = rectangle(axes)
        for seed in range(40):
            for k in range(1, r.n):
                z = random_cycle(r, k, seed, 5)
                cert = fill_absolute(z)
                assert boundary(cert.filling) == z
                assert cert.mass <= cert.certified_bound == absolute_fill_bound(z)[0]


class TestSlice:
    def test_segment(self):
        h, zh = slice_select(segment_three())
        assert h == 0
        assert dict(zh.items()) == {Cell(NORTH, (1,), ()): 1}

    def test_no_spanning_cells(self):
        r = rectangle((3, 3))
        z = Chain(r, 1, [(Cell(NORTH, (1, 0), (1,)), 1)])
        h, zh = slice_select(z)
        assert h == 0 and not zh

    def test_rejects_points(self):
        with pytest.raises(ValueError, match="0-chain"):
            slice_select(Chain.zero(rectangle((3, 3)), 0))

    @given(st.integers(0, 10 ** 6), st.integers(1, 8))
    def test_pigeonhole(self, seed, density):
        r = rectangle((3, 3, 4))
        z = random_relative_cycle(r, 1, seed, density)
        if not z:
            return
        h, zh = slice_select(z)
        assert zh.mass * r.axes[0] <= z.mass
        assert on_walls(boundary(zh))


class TestRelativeFill:
    def test_zero(self):
        cert = fill_relative(Chain.zero(rectangle((2, 3)), 1))
        assert not cert.filling and not cert.wall_residue

    def test_segment(self):
        z = segment_three()
        cert = fill_relative(z)
        assert cert.mass == 3 and cert.certified_bound == 9
        assert boundary(cert.filling) == z + cert.wall_residue
        assert on_walls(cert.wall_residue)
        assert volumes(cert.wall_residue).by_span == {(0,): 3, (1,): 2}

    def test_point_base_case(self):
        r = rectangle((3, 3))
        p = Chain(r, 0, [(Cell(NORTH, (1, 2), ()), 1)])
        cert = fill_relative(p)
        assert cert.mass == 1
        assert all(0 in c.span for c in cert.filling.cells())

    def test_rejects_interior_boundary(self):
        r = rectangle((3, 3))
        c = Chain(r, 1, [(Cell(NORTH, (1, 1), (0,)), 1)])
        with pytest.raises(NotACycleError, match="walls"):
            fill_relative(c)

    @pytest.mark.parametrize("axes", [(2, 3, 4), (2, 2, 4, 8)])
    def test_random_relative_cycles(self, axes):
        r = rectangle(axes)
        for seed in range(25):
            for k in range(0, r.n):
                z = random_relative_cycle(r, k, seed, 6)
                cert = fill_relative(z)      # verifies every certified property itself
                assert all(0 in c.span for c in cert.filling.cells())
                assert cert.mass <= K1 * axes[k] * z.mass


class TestDouble:
    def test_zero(self):
        cert = fill_double(Chain.zero(double((2, 4, 4)), 1))
        assert not cert.filling

    def test_small_equator(self):
        z = equator(double((2, 4, 4)), 1)
        cert = fill_double(z)
        assert boundary(cert.filling) == z
        assert cert.mass == 8
        assert cert.certified_bound == Fraction(128)

    def test_rejects_rectangle(self):
        with pytest.raises(ValueError, match="DoubleGeometry"):
            fill_double(square_boundary())

    def test_rejects_non_cycle(self):
        g = double((2, 4, 4))
        with pytest.raises(NotACycleError):
            fill_double(Chain(g, 1, [(Cell(NORTH, (1, 1, 1), (0,)), 1)]))

    @pytest.mark.parametrize("axes", [(1, 2, 4), (1, 2, 4, 8), (2, 2, 3)])
    def test_random_cycles(self, axes):
        g = double(axes)
        n = g.n
        for seed in range(30):
            for k in range(1, n):
                z = random_cycle(g, k, seed, 5)
                cert = fill_double(z)
                assert boundary(cert.filling) == z
                assert cert.mass <= k4(n, k) * (axes[k] + axes[n - k - 1]) * z.mass

    def test_json(self):
        cert = fill_double(equator(double((2, 4, 4)), 1))
        data = cert.to_json()
        assert data["method"] == "double" and data["filling_mass"] == 8
        assert data["certified_bound"] == "128"
        assert data["bound_formula"]["K4"] == 4

    def test_verify_detects_tampering(self):
        z = equator(double((2, 4, 4)), 1)
        cert = fill_double(z)
        with pytest.raises(FillerInvariantError):
            cert.verify(2 * z)
