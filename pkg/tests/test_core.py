import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chordscope.core import (
    ComplexField,
    DualGridPair,
    GridError,
    PhaseVector,
    PlanckContext,
    PositionGrid,
    make_dual_grids,
    skew_product,
)

finite = st.floats(-1e3, 1e3, allow_nan=False)
vectors = st.tuples(finite, finite)


class TestSkewProduct:
    def test_unit_area(self):
        assert skew_product((1, 0), (0, 1)) == 1

    def test_self_product_vanishes(self):
        assert skew_product((2, 3), (2, 3)) == 0

    def test_direct_value(self):
        assert skew_product((1, 2), (3, 4)) == -2

    @given(vectors, vectors)
    def test_antisymmetric(self, a, b):
        assert skew_product(a, b) == -skew_product(b, a)

    @given(vectors, vectors, vectors)
    def test_bilinear(self, a, b, c):
        lhs = skew_product(PhaseVector(*a) + b, c)
        rhs = skew_product(a, c) + skew_product(b, c)
        assert lhs == pytest.approx(rhs, abs=1e-6 * (1 + abs(lhs)))

    def test_elementwise_on_arrays(self):
        a = (np.array([1.0, 2.0]), np.array([0.0, 1.0]))
        b = (np.array([0.0, 3.0]), np.array([1.0, 4.0]))
        np.testing.assert_array_equal(skew_product(a, b), [1.0, 5.0])


class TestPhaseVector:
    def test_arithmetic(self):
        v = PhaseVector(1.0, 2.0)
        assert v + (1, 1) == (2.0, 3.0)
        assert v - (1, 1) == (0.0, 1.0)
        assert -v == (-1.0, -2.0)
        assert 2 * v == v * 2 == (2.0, 4.0)

    def test_rotation_preserves_norm(self):
        v = PhaseVector(3.0, 4.0)
        assert v.norm == 5.0
        assert v.rotate90().norm == 5.0
        assert skew_product(v, v.rotate90()) == pytest.approx(25.0)


class TestPlanckContext:
    def test_cell(self):
        assert PlanckContext(0.5).cell == pytest.approx(math.pi)

    @pytest.mark.parametrize("kw", [{"hbar": 0.0}, {"hbar": -1.0}, {"dof": 2}])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            PlanckContext(**kw)


class TestDualGrids:
    def test_chord_spacing(self):
        g = make_dual_grids(256, 8.0, 1.0)
        assert g.chord_spacing == pytest.approx(2 * math.pi / 16)

    def test_unit_chord_spacing(self):
        g = make_dual_grids(8, math.pi, 1.0)
        assert g.centre_spacing == pytest.approx(2 * math.pi / 8)
        assert g.chord_spacing == pytest.approx(1.0)

    @pytest.mark.parametrize("n", [7, 6, 0, -8])
    def test_bad_n(self, n):
        with pytest.raises(GridError):
            make_dual_grids(n, 8.0)

    @pytest.mark.parametrize("extent,hbar", [(0.0, 1.0), (8.0, 0.0)])
    def test_bad_scales(self, extent, hbar):
        with pytest.raises(GridError):
            DualGridPair(16, extent, hbar)

    @given(st.integers(4, 256).map(lambda k: 2 * k), st.floats(0.5, 50), st.floats(0.01, 10))
    def test_duality(self, n, extent, hbar):
        g = DualGridPair(n, extent, hbar)
        assert g.duality_product == pytest.approx(2 * math.pi * hbar, rel=1e-12)

    def test_origin_sampled(self):
        g = DualGridPair(16, 3.0)
        for space in ("centre", "chord"):
            assert g.axis(space)[8] == 0.0
            assert g.index_of(space, 0.0) == 8

    def test_index_of_off_grid(self):
        g = DualGridPair(16, 3.0)
        assert g.index_of("centre", 0.1) is None
        assert g.index_of("centre", 100.0) is None

    def test_self_dual(self):
        g = DualGridPair.self_dual(64, 2.0)
        assert g.is_self_dual
        np.testing.assert_allclose(g.axis("centre"), g.axis("chord"))

    def test_mesh_indexing(self):
        g = DualGridPair(8, 2.0)
        P, Q = g.mesh("centre")
        assert P[3, 0] == g.axis("centre")[3]
        assert Q[0, 3] == g.axis("centre")[3]

    def test_position_grid_matches_centre_axis(self):
        g = DualGridPair(32, 4.0)
        np.testing.assert_array_equal(g.position_grid().q, g.axis("centre"))


class TestPositionGrid:
    def test_extent(self):
        assert PositionGrid(16, 0.5).extent == 4.0

    @pytest.mark.parametrize("n,dq", [(7, 1.0), (16, 0.0)])
    def test_invalid(self, n, dq):
        with pytest.raises(GridError):
            PositionGrid(n, dq)


class TestComplexField:
    def test_shape_checked(self):
        with pytest.raises(GridError):
            ComplexField(DualGridPair(8, 1.0), "centre", np.zeros((4, 4)))

    def test_non_finite_rejected(self):
        v = np.zeros((8, 8))
        v[0, 0] = np.nan
        with pytest.raises(ValueError):
            ComplexField(DualGridPair(8, 1.0), "centre", v)

    def test_unknown_space(self):
        with pytest.raises(GridError):
            ComplexField(DualGridPair(8, 1.0), "momentum", np.zeros((8, 8)))

    def test_immutable(self):
        f = ComplexField(DualGridPair(8, 1.0), "centre", np.zeros((8, 8)))
        with pytest.raises(ValueError):
            f.values[0, 0] = 1

    def test_value_at_and_reflected(self):
        g = DualGridPair(8, 2.0)
        P, Q = g.mesh("centre")
        f = ComplexField(g, "centre", P + 10 * Q)
        assert f.value_at((0.5, -1.0)) == pytest.approx(0.5 - 10.0)
        np.testing.assert_allclose(f.reflected()[1:, 1:], -f.values[1:, 1:])
        with pytest.raises(GridError):
            f.value_at((0.1, 0.0))

    def test_integral(self):
        g = DualGridPair(8, 2.0)
        f = ComplexField(g, "centre", np.ones((8, 8)))
        assert f.integral() == pytest.approx(16.0)
