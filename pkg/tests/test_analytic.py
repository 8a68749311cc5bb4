import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special

from chordscope.analytic import (
    FamilySpec,
    bessel_j0,
    damped_laguerre,
    exact_chord,
    exact_wigner,
    fock_small_chord_approx,
    j0_asymptotic,
    laguerre,
)

# frozen from the closed forms at hbar = 1, eta = (0, 2)
CAT_CHORD_AT_2ETA = 0.08100877745161886
CAT_WIGNER_AT_ORIGIN = (2 * math.exp(-4) + 2) / (2 * math.pi * (1 + math.exp(-4)))


class TestLaguerre:
    def test_low_orders(self):
        assert laguerre(0, 3.7) == 1.0
        assert laguerre(1, 1.0) == 0.0
        assert laguerre(2, 2.0) == pytest.approx(-1.0)

    @pytest.mark.parametrize("n", [3, 10, 50, 200])
    def test_against_scipy(self, n):
        x = np.linspace(0, 20, 41)
        np.testing.assert_allclose(laguerre(n, x), special.eval_laguerre(n, x), rtol=1e-9, atol=1e-9)

    @pytest.mark.parametrize("n", [5, 100, 400])
    def test_damped_against_scipy(self, n):
        x = np.linspace(0, 60, 61)
        expected = np.exp(-x / 2) * special.eval_laguerre(n, x)
        np.testing.assert_allclose(damped_laguerre(n, x), expected, atol=1e-10)

    def test_damped_large_argument_finite(self):
        assert math.isfinite(damped_laguerre(300, 5000.0))

    @pytest.mark.parametrize("n", [-1, 2.5, 501])
    def test_order_checked(self, n):
        with pytest.raises(ValueError):
            laguerre(n, 1.0)


class TestBessel:
    def test_origin(self):
        assert bessel_j0(0.0) == 1.0

    def test_first_zero(self):
        assert abs(bessel_j0(2.404826)) < 1e-5

    def test_asymptotic(self):
        assert abs(j0_asymptotic(20.0) - bessel_j0(20.0)) < 2e-3

    @given(st.floats(0, 300))
    def test_against_scipy(self, x):
        assert bessel_j0(x) == pytest.approx(special.j0(x), abs=1e-12)

    def test_vectorized_and_even(self):
        x = np.linspace(-30, 30, 101)
        np.testing.assert_allclose(bessel_j0(x), special.j0(x), atol=1e-12)


class TestExactWigner:
    @pytest.mark.parametrize("n", [0, 1, 2, 7])
    def test_fock_origin(self, n):
        assert exact_wigner(FamilySpec("fock", n_level=n), (0.0, 0.0)) == pytest.approx((-1) ** n / math.pi)

    def test_fock_one_negative(self):
        assert exact_wigner(FamilySpec("fock", n_level=1), (0.0, 0.0)) == pytest.approx(-1 / math.pi)

    def test_coherent_peak(self):
        spec = FamilySpec("coherent", eta=(0.5, -1.0), hbar=0.5)
        assert exact_wigner(spec, (0.5, -1.0)) == pytest.approx(1 / (0.5 * math.pi))

    def test_cat_origin(self):
        spec = FamilySpec("cat", eta=(0.0, 2.0), sign=1)
        assert exact_wigner(spec, (0.0, 0.0)) == pytest.approx(CAT_WIGNER_AT_ORIGIN, rel=1e-14)

    def test_cat_fringes(self):
        # cos(2 X ^ eta / hbar) with eta = (0, 2) is cos(4 P): period pi/2 across the fringes
        spec = FamilySpec("cat", eta=(0.0, 2.0), sign=1)
        P = np.linspace(-1.5, 1.5, 301)
        W = exact_wigner(spec, (P, np.zeros_like(P)))
        smooth = np.exp(-((P**2) + 4)) / (math.pi * (1 + math.exp(-4)))
        fringe = W - smooth
        np.testing.assert_allclose(fringe, np.exp(-(P**2)) * np.cos(4 * P) / (math.pi * (1 + math.exp(-4))), atol=1e-15)
        assert exact_wigner(spec, (math.pi / 4, 0.0)) < 0
        assert np.all(exact_wigner(spec, (0.0, np.linspace(-1, 1, 11))) > 0)

    @pytest.mark.parametrize(
        "spec",
        [
            FamilySpec("coherent", eta=(1.0, 0.5), omega=2.0),
            FamilySpec("cat", eta=(1.0, 1.0), sign=-1),
            FamilySpec("fock", n_level=3, hbar=0.5),
        ],
    )
    def test_normalized(self, spec):
        x = np.linspace(-9, 9, 361)
        P, Q = np.meshgrid(x, x, indexing="ij")
        assert np.sum(exact_wigner(spec, (P, Q))) * (x[1] - x[0]) ** 2 == pytest.approx(1.0, abs=1e-10)


class TestExactChord:
    @pytest.mark.parametrize("n", [0, 3, 12])
    def test_fock_origin(self, n):
        assert exact_chord(FamilySpec("fock", n_level=n, hbar=0.5), (0.0, 0.0)) == pytest.approx(1 / math.pi)

    def test_coherent_value(self):
        value = exact_chord(FamilySpec("coherent", eta=(0.0, 2.0)), (1.0, 0.0))
        assert value == pytest.approx(np.exp(-2j) * math.exp(-0.25) / (2 * math.pi), abs=1e-15)

    def test_cat_at_twice_eta(self):
        value = exact_chord(FamilySpec("cat", eta=(0.0, 2.0), sign=1), (0.0, 4.0))
        assert value.real == pytest.approx(CAT_CHORD_AT_2ETA, rel=1e-14)
        assert value.real == pytest.approx(0.0810, abs=1e-4)
        assert value.imag == 0

    def test_fock_one_zero(self):
        assert abs(exact_chord(FamilySpec("fock", n_level=1), (1.0, 1.0))) < 1e-15

    @pytest.mark.parametrize(
        "spec",
        [FamilySpec("coherent", eta=(1.0, -0.5)), FamilySpec("cat", eta=(0.5, 1.0), sign=-1), FamilySpec("fock", n_level=4)],
    )
    def test_fourier_pair(self, spec):
        # chi(xi) = (1/2 pi hbar) Int dX exp(-i xi ^ X / hbar) W(X)
        x = np.linspace(-9, 9, 181)
        P, Q = np.meshgrid(x, x, indexing="ij")
        W = exact_wigner(spec, (P, Q))
        for xi in [(0.3, -0.7), (1.1, 0.4)]:
            kern = np.exp(-1j * (xi[0] * Q - xi[1] * P) / spec.hbar)
            direct = np.sum(kern * W) * (x[1] - x[0]) ** 2 / (2 * math.pi * spec.hbar)
            assert exact_chord(spec, xi) == pytest.approx(direct, abs=1e-10)


class TestFamilySpec:
    @pytest.mark.parametrize(
        "kw",
        [
            {"family": "squeezed"},
            {"family": "cat", "sign": 2, "eta": (0, 1)},
            {"family": "cat", "sign": -1, "eta": (0, 0)},
            {"family": "fock", "n_level": -1},
            {"family": "fock", "omega": 2.0},
            {"family": "coherent", "hbar": 0.0},
        ],
    )
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            FamilySpec(**kw)


class TestBesselLaw:
    def test_origin(self):
        assert fock_small_chord_approx(10.5, (0.0, 0.0)) == pytest.approx(1 / (2 * math.pi))

    def test_fock_fifty(self):
        xi = (0.0, 0.1)
        exact = exact_chord(FamilySpec("fock", n_level=50), xi).real
        assert fock_small_chord_approx(50.5, xi) == pytest.approx(exact, rel=1e-2)

    def test_large_order_limit(self):
        n, z = 400, 2.0
        assert abs(laguerre(n, z**2 / (2 * n)) - special.j0(math.sqrt(2) * z)) < 1e-2

    def test_bad_action(self):
        with pytest.raises(ValueError):
            fock_small_chord_approx(0.0, (1.0, 0.0))
