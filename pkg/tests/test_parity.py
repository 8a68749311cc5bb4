import math

import numpy as np
import pytest

from chordscope.core import GridError
from chordscope.parity import (
    SymmetryError,
    ZeroWeightError,
    commutator_norm,
    parity_project,
    parity_projector,
    parity_report,
    parity_rescaling_check,
    projected_chord,
    reality_criterion,
    reality_defect,
    reflection_matrix,
)
from chordscope.states import density_from_pure, make_cat, make_coherent, make_fock, mix
from chordscope.transforms import chord_of, wigner_of

EVEN_WEIGHT_COHERENT = (1 + math.exp(-4)) / 2


class TestReflection:
    def test_unitary_involution(self, pgrid):
        U = reflection_matrix(pgrid, (0.0, 0.5))
        np.testing.assert_allclose(U @ U.conj().T, np.eye(pgrid.n), atol=1e-14)
        np.testing.assert_allclose(U @ U, np.eye(pgrid.n), atol=1e-14)

    def test_fock_eigenstates(self, pgrid):
        U = reflection_matrix(pgrid)
        for n in range(4):
            psi = make_fock(n, grid=pgrid).amplitudes
            np.testing.assert_allclose((U @ psi)[1:], (-1) ** n * psi[1:], atol=1e-14)

    def test_unrepresentable_centre(self, pgrid):
        with pytest.raises(GridError):
            reflection_matrix(pgrid, (0.0, 0.01))

    def test_projectors(self, pgrid):
        even, odd = (parity_projector(pgrid, (0.0, 0.0), s) for s in (1, -1))
        np.testing.assert_allclose(even + odd, np.eye(pgrid.n), atol=1e-15)
        np.testing.assert_allclose(even @ even, even, atol=1e-14)
        with pytest.raises(ValueError):
            parity_projector(pgrid, (0.0, 0.0), 0)


class TestProjection:
    def test_even_state_unchanged(self, pgrid):
        psi = make_fock(2, grid=pgrid)
        rho, w = parity_project(psi, (0.0, 0.0), 1)
        assert w == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(rho.matrix, density_from_pure(psi).matrix, atol=1e-12)

    def test_odd_state_has_no_even_part(self, pgrid):
        with pytest.raises(ZeroWeightError):
            parity_project(make_fock(1, grid=pgrid), (0.0, 0.0), 1)

    def test_coherent_weights(self, pgrid):
        psi = make_coherent((0.0, 2.0), grid=pgrid)
        _, even = parity_project(psi, (0.0, 0.0), 1)
        _, odd = parity_project(psi, (0.0, 0.0), -1)
        assert even == pytest.approx(EVEN_WEIGHT_COHERENT, abs=1e-12)
        assert even + odd == pytest.approx(1.0, abs=1e-12)

    def test_projection_gives_cat(self, pgrid):
        rho, _ = parity_project(make_coherent((0.0, 2.0), grid=pgrid), (0.0, 0.0), -1)
        cat = density_from_pure(make_cat((0.0, 2.0), -1, grid=pgrid))
        # the unpaired -L sample has no mirror partner
        np.testing.assert_allclose(rho.matrix[1:, 1:], cat.matrix[1:, 1:], atol=1e-12)


class TestCommutator:
    @pytest.mark.parametrize("make", [lambda g: make_fock(3, grid=g), lambda g: make_cat((1.0, 2.0), -1, grid=g)])
    def test_symmetric_states(self, pgrid, make):
        assert commutator_norm(make(pgrid)) < 1e-12

    def test_off_centre(self, pgrid):
        assert commutator_norm(make_coherent((0.0, 2.0), grid=pgrid)) > 0.1

    def test_own_centre(self, pgrid):
        assert commutator_norm(make_coherent((0.0, 2.0), grid=pgrid), (0.0, 2.0)) < 1e-12


class TestRescaling:
    @pytest.mark.parametrize("n", range(6))
    def test_fock(self, pgrid, n):
        assert parity_rescaling_check(make_fock(n, grid=pgrid)) < 1e-7

    def test_even_cat(self, pgrid):
        assert parity_rescaling_check(make_cat((0.0, 2.0), 1, grid=pgrid)) < 1e-7

    def test_coherent_about_own_centre(self, pgrid):
        assert parity_rescaling_check(make_coherent((0.0, 2.0), grid=pgrid), (0.0, 2.0)) < 1e-7

    def test_asymmetric_state_rejected(self, pgrid):
        with pytest.raises(SymmetryError):
            parity_rescaling_check(make_coherent((0.0, 2.0), grid=pgrid))


class TestProjectedChord:
    def test_even_state_idempotent(self, grids, pgrid):
        psi = make_fock(2, grid=pgrid)
        chi, W = chord_of(psi, grids), wigner_of(psi, grids)
        np.testing.assert_allclose(projected_chord(chi, W, 1).values, chi.values, atol=1e-8)

    @pytest.mark.parametrize("sign", [1, -1])
    def test_coherent_matches_projection(self, grids, pgrid, sign):
        psi = make_coherent((0.0, 2.0), grid=pgrid)
        chi, W = chord_of(psi, grids), wigner_of(psi, grids)
        rho, _ = parity_project(psi, (0.0, 0.0), sign)
        np.testing.assert_allclose(projected_chord(chi, W, sign).values, chord_of(rho, grids).values, atol=1e-7)

    def test_fock_one_even_part(self, grids, pgrid):
        psi = make_fock(1, grid=pgrid)
        with pytest.raises(ZeroWeightError):
            projected_chord(chord_of(psi, grids), wigner_of(psi, grids), 1)


class TestReality:
    @pytest.mark.parametrize("n", [0, 1, 4])
    def test_fock(self, grids, pgrid, n):
        assert reality_defect(chord_of(make_fock(n, grid=pgrid), grids)) < 1e-9

    def test_displaced_coherent(self, grids, pgrid):
        assert reality_defect(chord_of(make_coherent((0.0, 2.0), grid=pgrid), grids)) > 0.5

    def test_parity_mixture(self, grids, pgrid):
        rho = mix([0.5, 0.5], [make_fock(0, grid=pgrid), make_fock(1, grid=pgrid)])
        assert reality_defect(chord_of(rho, grids)) < 1e-8

    def test_criterion(self, pgrid):
        assert reality_criterion(make_cat((0.0, 2.0), 1, grid=pgrid))
        assert not reality_criterion(make_coherent((0.0, 2.0), grid=pgrid))
        assert reality_criterion(make_coherent((0.0, 2.0), grid=pgrid), (0.0, 2.0))


class TestReport:
    def test_fock_one(self, pgrid):
        report = parity_report(make_fock(1, grid=pgrid)).as_dict()
        assert report["even_weight"] == pytest.approx(0.0, abs=1e-12)
        assert report["odd_weight"] == pytest.approx(1.0, abs=1e-12)
        assert report["centre"] == {"p": 0.0, "q": 0.0}

    def test_coherent(self, pgrid):
        report = parity_report(make_coherent((0.0, 2.0), grid=pgrid))
        assert report.even_weight == pytest.approx(EVEN_WEIGHT_COHERENT, abs=1e-12)
        assert report.reality_defect > 0.5
