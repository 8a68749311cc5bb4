import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chordscope.analytic import FamilySpec, exact_chord, exact_wigner
from chordscope.core import ComplexField, DualGridPair, GridError
from chordscope.states import make_cat, make_coherent, make_fock, mix
from chordscope.transforms import (
    ChordField,
    WignerField,
    chord_at,
    chord_of,
    chord_values,
    marginal_q,
    moments_from_chord,
    overlap_from_chord,
    read_field_csv,
    symplectic_fourier,
    wigner_at,
    wigner_of,
    write_field_csv,
)


@pytest.fixture(scope="module")
def ground(grids, pgrid):
    psi = make_coherent((0.0, 0.0), grid=pgrid)
    return psi, wigner_of(psi, grids), chord_of(psi, grids)


@pytest.fixture(scope="module")
def fock1(grids, pgrid):
    psi = make_fock(1, grid=pgrid)
    return psi, chord_of(psi, grids)


class TestWignerOf:
    def test_ground_origin(self, ground):
        assert ground[1].value_at((0.0, 0.0)).real == pytest.approx(1 / math.pi, abs=1e-12)

    def test_fock_one_origin(self, grids, pgrid):
        W = wigner_of(make_fock(1, grid=pgrid), grids)
        assert W.origin_value.real == pytest.approx(-1 / math.pi, abs=1e-12)

    def test_cat_matches_closed_form(self, grids, pgrid):
        W = wigner_of(make_cat((0.0, 2.0), 1, grid=pgrid), grids)
        P, Q = grids.mesh("centre")
        expected = exact_wigner(FamilySpec("cat", eta=(0.0, 2.0)), (P, Q))
        np.testing.assert_allclose(W.values.real, expected, atol=1e-9)

    def test_invariants(self, ground):
        ground[1].validate()
        assert ground[1].invariant_residuals()["normalization"] < 1e-12

    def test_marginal(self, ground, pgrid):
        psi = ground[0]
        np.testing.assert_allclose(marginal_q(ground[1]), np.abs(psi.amplitudes) ** 2, atol=1e-12)

    def test_incompatible_grid(self, pgrid):
        with pytest.raises(GridError):
            wigner_of(make_fock(0, grid=pgrid), DualGridPair(128, 8.0))

    def test_wrong_space(self, grids):
        with pytest.raises(GridError):
            WignerField(grids, np.zeros((grids.n, grids.n)), space="chord")


class TestChordOf:
    @pytest.mark.parametrize("make", [lambda g: make_fock(3, grid=g), lambda g: make_cat((1.0, 1.0), -1, grid=g)])
    def test_normalization(self, grids, pgrid, make):
        chi = chord_of(make(pgrid), grids)
        assert chi.origin_value.real == pytest.approx(1 / (2 * math.pi), abs=1e-12)
        chi.validate()

    def test_coherent_value(self, grids, pgrid):
        psi = make_coherent((0.0, 2.0), grid=pgrid)
        value = chord_values(psi, [1.0], [0.0])[0, 0]
        assert value == pytest.approx(np.exp(-2j) * math.exp(-0.25) / (2 * math.pi), abs=1e-10)

    @given(st.floats(-3, 3), st.floats(-3, 3))
    @settings(max_examples=10, deadline=None)
    def test_coherent_modulus_independent_of_centre(self, p, q):
        grids = DualGridPair(256, 10.0)
        psi = make_coherent((p, q), grid=grids.position_grid())
        xi = np.array([0.0, 0.7, 1.9])
        got = np.abs(chord_values(psi, xi, xi))
        X, Y = np.meshgrid(xi, xi, indexing="ij")
        np.testing.assert_allclose(got, np.exp(-(X**2 + Y**2) / 4) / (2 * math.pi), atol=1e-10)

    def test_fock_one_zero(self, fock1):
        psi = fock1[0]
        r = math.sqrt(2)
        value = chord_values(psi, [r / math.sqrt(2)], [r / math.sqrt(2)])[0, 0]
        assert abs(value) < 1e-8

    def test_matches_closed_form(self, grids, fock1):
        P, Q = grids.mesh("chord")
        np.testing.assert_allclose(fock1[1].values, exact_chord(FamilySpec("fock", n_level=1), (P, Q)), atol=1e-10)

    def test_mixture_is_linear(self, grids, pgrid):
        a, b = make_fock(0, grid=pgrid), make_fock(2, grid=pgrid)
        mixed = chord_of(mix([0.3, 0.7], [a, b]), grids).values
        np.testing.assert_allclose(mixed, 0.3 * chord_of(a, grids).values + 0.7 * chord_of(b, grids).values, atol=1e-13)


class TestSymplecticFourier:
    def test_chord_to_wigner(self, grids, ground):
        W = symplectic_fourier(ground[2])
        assert isinstance(W, WignerField)
        P, Q = grids.mesh("centre")
        np.testing.assert_allclose(W.values, exact_wigner(FamilySpec("coherent"), (P, Q)), atol=1e-8)

    def test_wigner_to_chord(self, ground):
        chi = symplectic_fourier(ground[1])
        assert isinstance(chi, ChordField)
        np.testing.assert_allclose(chi.values, ground[2].values, atol=1e-12)

    def test_delta_transforms_to_constant(self):
        g = DualGridPair(16, 3.0)
        v = np.zeros((16, 16))
        v[8, 8] = 1.0
        W = symplectic_fourier(ComplexField(g, "chord", v))
        np.testing.assert_allclose(W.values, g.chord_spacing**2 / (2 * math.pi), atol=1e-15)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=10, deadline=None)
    def test_round_trip(self, seed):
        g = DualGridPair(32, 4.0, 0.7)
        rng = np.random.default_rng(seed)
        v = rng.normal(size=(32, 32)) + 1j * rng.normal(size=(32, 32))
        f = ComplexField(g, "centre", v)
        back = symplectic_fourier(symplectic_fourier(f))
        assert back.space == "centre"
        np.testing.assert_allclose(back.values, v, atol=1e-10)

    def test_off_grid_evaluation(self, ground):
        xi = np.array([0.123, -1.7])
        got = chord_at(ground[1], xi, xi)
        X, Y = np.meshgrid(xi, xi, indexing="ij")
        np.testing.assert_allclose(got, exact_chord(FamilySpec("coherent"), (X, Y)), atol=1e-10)
        P = np.array([0.05, 0.8])
        got = wigner_at(ground[2], P, P)
        X, Y = np.meshgrid(P, P, indexing="ij")
        np.testing.assert_allclose(got, exact_wigner(FamilySpec("coherent"), (X, Y)), atol=1e-10)

    def test_wigner_at_outside_box(self, ground, grids):
        assert wigner_at(ground[2], [grids.centre_extent + 1.0], [0.0])[0, 0] == 0


class TestOverlap:
    def test_self_overlap(self, ground):
        assert overlap_from_chord(ground[2], (0.0, 0.0)) == pytest.approx(1.0, abs=1e-12)

    def test_coherent_modulus(self, ground):
        assert abs(overlap_from_chord(ground[2], (0.0, 2.0))) == pytest.approx(math.exp(-1), abs=1e-12)

    def test_fock_one_zero(self, fock1):
        assert abs(overlap_from_chord(fock1[1], (1.0, 1.0))) < 1e-7

    def test_matches_direct_inner_product(self, grids, pgrid):
        from chordscope.states import translate_state

        psi = make_cat((0.5, 1.0), 1, grid=pgrid)
        xi = (0.4, -0.9)
        direct = psi.inner(translate_state(psi, xi))
        assert overlap_from_chord(chord_of(psi, grids), xi) == pytest.approx(direct, abs=1e-10)

    def test_bilinear_is_close(self, ground):
        xi = (0.3, 0.2)
        exact = overlap_from_chord(ground[2], xi)
        assert overlap_from_chord(ground[2], xi, method="bilinear") == pytest.approx(exact, abs=3e-2)

    def test_errors(self, ground, grids):
        with pytest.raises(GridError):
            overlap_from_chord(ground[2], (grids.chord_extent + 1, 0.0))
        with pytest.raises(ValueError):
            overlap_from_chord(ground[2], (0.0, 0.0), method="cubic")


class TestMoments:
    def test_zeroth(self, fock1):
        assert moments_from_chord(fock1[1], 0) == pytest.approx(1.0, abs=1e-12)

    def test_coherent_mean(self, grids, pgrid):
        chi = chord_of(make_coherent((0.0, 2.0), grid=pgrid), grids)
        assert moments_from_chord(chi, 1) == pytest.approx(2.0, abs=1e-6)

    def test_fock_one_second(self, fock1):
        assert moments_from_chord(fock1[1], 2) == pytest.approx(1.5, abs=1e-6)

    def test_fourth(self, ground):
        # Gaussian with variance 1/2: <q^4> = 3/4
        assert moments_from_chord(ground[2], 4) == pytest.approx(0.75, abs=1e-6)

    @pytest.mark.parametrize("n", [-1, 5, 1.5])
    def test_order_checked(self, ground, n):
        with pytest.raises(ValueError):
            moments_from_chord(ground[2], n)


class TestCsv:
    def test_header_contract(self):
        g = DualGridPair(8, 2.0)
        buf = io.StringIO()
        write_field_csv(ComplexField(g, "centre", np.ones((8, 8))), buf)
        lines = buf.getvalue().splitlines()
        assert lines[:4] == ["# space=centre", "# hbar=1.0", "# n=8", "# extent=2.0"]
        assert len(lines) == 4 + 64
        assert lines[4].split(",")[:2] == ["0", "0"]

    def test_round_trip(self, tmp_path, fock1):
        path = tmp_path / "chi.csv"
        write_field_csv(fock1[1], path)
        back = read_field_csv(path)
        assert isinstance(back, ChordField)
        assert back.grids == fock1[1].grids
        np.testing.assert_array_equal(back.values, fock1[1].values)
