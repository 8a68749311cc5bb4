"""Intrinsic phase-space correlations and the purity diagnostics built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from chordscope.core import DualGridPair, GridError
from chordscope.states import as_density, pure_components
from chordscope.transforms import ChordField, chord_at, chord_values, symplectic_fourier, wigner_of

ROUTE_TOL = 1e-6


class RouteDisagreementError(ArithmeticError):
    """The independent evaluations of a correlation disagree."""


def _operator(rho):
    """Density matrix as an operator on amplitude vectors (unit trace)."""
    return rho.matrix * rho.grid.dq


def state_correlation(rhoA, rhoB) -> float:
    """``tr(rhoA rhoB) / sqrt(tr rhoA^2 tr rhoB^2)``."""
    a, b = as_density(rhoA), as_density(rhoB)
    if a.grid != b.grid:
        raise GridError("states live on different grids")
    A, B = _operator(a), _operator(b)
    ab = np.sum(A * B.T).real
    return float(ab / math.sqrt(np.sum(A * A.T).real * np.sum(B * B.T).real))


@dataclass(frozen=True)
class CorrelationField:
    """``C_xi`` on the chord grid together with the state purity."""

    grids: DualGridPair
    values: np.ndarray
    purity: float

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grids.n, self.grids.n):
            raise ValueError("correlation samples do not match the chord grid")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def origin_value(self) -> float:
        h = self.grids.n // 2
        return float(self.values[h, h])

    def validate(self, tol=1e-9) -> None:
        if abs(self.origin_value - 1.0) > tol:
            raise ValueError(f"C_0 = {self.origin_value!r}, expected 1")
        if self.values.min() < -tol or self.values.max() > 1.0 + tol:
            raise ValueError("correlation field leaves [0, 1]")


def _grids_for(state) -> DualGridPair:
    return DualGridPair(state.grid.n, state.grid.extent, state.hbar)


def _fine_axis(grids: DualGridPair) -> np.ndarray:
    # Half the chord spacing: |chi|^2 has twice the bandwidth of chi, and the
    # coarse grid would alias its transform beyond the centre extent.
    n = 2 * grids.n
    return (np.arange(n) - n // 2) * (grids.chord_spacing / 2)


def _power_transform(power: np.ndarray, eta: np.ndarray, hbar: float, xp, xq, reach: float) -> np.ndarray:
    """``sum_eta |chi(eta)|^2 exp(i eta^xi / hbar) d eta`` on a product of ``xp, xq``.

    The sum is periodic in ``xi``; beyond ``reach`` (twice the centre extent)
    translated copies of the state no longer overlap and the result is 0.
    """
    d = eta[1] - eta[0]
    xp, xq = np.atleast_1d(xp), np.atleast_1d(xq)
    A = np.exp(-1j * np.outer(xp, eta) / hbar)  # -eta_q xi_p
    B = np.exp(1j * np.outer(eta, xq) / hbar)  # +eta_p xi_q
    # power is indexed [eta_p, eta_q]
    inside = np.outer(np.abs(xp) < reach, np.abs(xq) < reach)
    return (A @ power.T @ B) * d * d * inside


def _shift_matrix(n: int, pad: int, spacing: float, shift: float) -> np.ndarray:
    """Trigonometric-interpolation matrix ``f(x_i - shift)`` from samples ``f(x_j)``.

    Works on a zero-padded period of ``pad`` samples so that shifts up to the
    padding length do not wrap the support back onto itself.
    """
    k = 2 * np.pi * np.fft.fftfreq(pad, d=spacing)
    lo = (pad - n) // 2
    eye = np.zeros((pad, n))
    eye[lo + np.arange(n), np.arange(n)] = 1.0
    cols = np.fft.ifft(np.fft.fft(eye, axis=0) * np.exp(-1j * k * shift)[:, None], axis=0)
    return cols[lo : lo + n]


@dataclass(frozen=True)
class CorrelationRoutes:
    xis: np.ndarray
    direct: np.ndarray
    wigner: np.ndarray
    chord: np.ndarray

    @property
    def max_delta(self) -> float:
        r = np.stack([self.direct, self.wigner, self.chord])
        return float(np.max(r.max(axis=0) - r.min(axis=0))) if r.size else 0.0


def _direct_route(state, xis) -> np.ndarray:
    grid, hbar = state.grid, state.hbar
    comps = pure_components(state)
    n = grid.n
    N = 4 * n
    lo = (N - n) // 2
    k = 2 * np.pi * np.fft.fftfreq(N, d=grid.dq)
    qpad = (np.arange(N) - N // 2) * grid.dq
    vecs = np.zeros((N, len(comps)), dtype=complex)
    for c, (_, psi) in enumerate(comps):
        vecs[lo : lo + n, c] = psi
    probs = np.array([p for p, _ in comps])
    spec = np.fft.fft(vecs, axis=0)
    purity = float(np.sum(probs**2))
    out = []
    for xp, xq in xis:
        moved = np.fft.ifft(spec * np.exp(-1j * k * xq)[:, None], axis=0)
        moved *= np.exp(1j * (xp * qpad - xp * xq / 2) / hbar)[:, None]
        overlaps = vecs.conj().T @ moved * grid.dq
        out.append(float(probs @ np.abs(overlaps) ** 2 @ probs) / purity)
    return np.array(out)


def _wigner_route(W, xis) -> np.ndarray:
    g = W.grids
    vals = W.values
    norm = np.sum(vals * vals).real
    reach = 2 * g.centre_extent + max((max(abs(a), abs(b)) for a, b in xis), default=0.0)
    pad = 2 * math.ceil(g.n * reach / (2 * g.centre_extent) / 2)
    out = []
    for xp, xq in xis:
        Sp = _shift_matrix(g.n, pad, g.centre_spacing, xp)
        Sq = _shift_matrix(g.n, pad, g.centre_spacing, xq)
        moved = Sp @ vals @ Sq.T
        out.append(float(np.sum(vals * moved).real / norm))
    return np.array(out)


def _chord_route(state, grids, xis) -> np.ndarray:
    eta = _fine_axis(grids)
    power = np.abs(chord_values(state, eta, eta)) ** 2
    total = power.sum()
    d = eta[1] - eta[0]
    return np.array(
        [float(_power_transform(power, eta, grids.hbar, [xp], [xq], 2 * grids.centre_extent)[0, 0].real / (total * d * d)) for xp, xq in xis]
    )


def correlation_routes(rho, xis) -> CorrelationRoutes:
    """Evaluate ``C_xi`` by the trace, Wigner-autocorrelation and chord routes."""
    state = as_density(rho) if not hasattr(rho, "amplitudes") else rho
    grids = _grids_for(state)
    xis = [(float(a), float(b)) for a, b in xis]
    for xp, xq in xis:
        if abs(xp) > grids.chord_extent or abs(xq) > grids.chord_extent:
            raise GridError(f"chord ({xp}, {xq}) lies outside the chord grid")
    W = wigner_of(state, grids)
    return CorrelationRoutes(
        np.array(xis, dtype=float).reshape(-1, 2),
        _direct_route(state, xis),
        _wigner_route(W, xis),
        _chord_route(state, grids, xis),
    )


def translation_correlation(rho, xi, tol: float = ROUTE_TOL) -> float:
    """``C_xi = tr(rho T_xi rho T_xi^dag) / tr rho^2``, cross-checked three ways."""
    routes = correlation_routes(rho, [tuple(xi)])
    if routes.max_delta > tol:
        raise RouteDisagreementError(f"correlation routes disagree by {routes.max_delta:.2e}")
    return float(routes.direct[0])


def correlation_field(rho, grids: DualGridPair | None = None) -> CorrelationField:
    """``C_xi`` over the whole chord grid via the transform of ``|chi|^2``."""
    state = as_density(rho) if not hasattr(rho, "amplitudes") else rho
    grids = grids or _grids_for(state)
    if state.grid != grids.position_grid():
        raise GridError("state and grids are incompatible")
    eta = _fine_axis(grids)
    power = np.abs(chord_values(state, eta, eta)) ** 2
    d = eta[1] - eta[0]
    axis = grids.axis("chord")
    values = _power_transform(power, eta, grids.hbar, axis, axis, 2 * grids.centre_extent).real / (power.sum() * d * d)
    purity = float(power.sum() * d * d * 2 * math.pi * grids.hbar)
    return CorrelationField(grids, np.clip(values, 0.0, None) if values.min() > -1e-9 else values, purity)


def fourier_invariance_residual(chi: ChordField) -> float:
    """Distance between ``|chi|^2`` and its symplectic Fourier transform.

    Zero exactly for pure states. The result is normalized by ``max |chi|^2``.
    """
    g = chi.grids
    W = symplectic_fourier(chi)
    eta = _fine_axis(g)
    power = np.abs(chord_at(W, eta, eta)) ** 2
    axis = g.axis("chord")
    transformed = _power_transform(power, eta, g.hbar, axis, axis, 2 * g.centre_extent) / (2 * math.pi * g.hbar)
    own = np.abs(chi.values) ** 2
    return float(np.max(np.abs(transformed - own)) / np.max(own))


def purity_convolution_residual(chi: ChordField, sample_xis) -> float:
    """Twisted self-convolution of ``chi`` against ``chi`` at a few chords.

    ``Int d eta chi(eta) chi(xi - eta) exp(i xi^eta / 2 hbar) = chi(xi)`` holds
    for pure states; the maximum deviation is returned relative to ``chi(0)``.
    """
    g = chi.grids
    hbar = g.hbar
    W = symplectic_fourier(chi)
    eta = _fine_axis(g)
    d = eta[1] - eta[0]
    base = chord_at(W, eta, eta)
    worst = 0.0
    for xp, xq in sample_xis:
        other = chord_at(W, xp - eta, xq - eta)
        # xi ^ eta = xi_p eta_q - xi_q eta_p, rows are eta_p
        phase = np.exp(1j * (xp * eta[None, :] - xq * eta[:, None]) / (2 * hbar))
        lhs = np.sum(base * other * phase) * d * d
        rhs = chord_at(W, [xp], [xq])[0, 0]
        worst = max(worst, abs(lhs - rhs))
    return float(worst / abs(chi.origin_value))


@dataclass(frozen=True)
class GeneratorExpansion:
    alphas: np.ndarray
    correlations: np.ndarray
    c2: float
    c4: float
    c2_commutator: float
    c2_dispersion: float | None


GENERATOR_TOL = 0.02


def _close(fit, target, tol, scale):
    return abs(fit - target) <= tol * abs(target) if abs(target) > 1e-12 else abs(fit) <= tol * scale


def generator_expansion(rho, K, alphas, tol: float = GENERATOR_TOL) -> GeneratorExpansion:
    """Small-``alpha`` behaviour of ``C(alpha) = tr(rho rho_alpha) / tr rho^2``.

    ``rho_alpha = exp(-i alpha K / hbar) rho exp(i alpha K / hbar)`` is formed
    exactly from the eigendecomposition of ``K``. The quadratic coefficient
    of ``1 - C`` is fitted together with a quartic term, using only the
    ``alpha`` values where ``C > 0.9``, and checked against the commutator
    formula and, for pure states, the dispersion of ``K``.
    """
    K = np.asarray(K, dtype=complex)
    if np.max(np.abs(K - K.conj().T)) > 1e-10 * max(1.0, np.max(np.abs(K))):
        raise ValueError("generator is not Hermitian")
    d = as_density(rho)
    hbar = d.hbar
    R = _operator(d)
    purity = np.sum(R * R.T).real
    lam, V = eigh(K)
    Rk = V.conj().T @ R @ V
    alphas = np.asarray(alphas, dtype=float)
    corr = []
    for a in alphas:
        ph = np.exp(-1j * a * lam / hbar)
        Ra = ph[:, None] * Rk * ph.conj()[None, :]
        corr.append(np.sum(Rk * Ra.T).real / purity)
    corr = np.array(corr)
    keep = corr > 0.9
    if keep.sum() < 2:
        raise ValueError("need at least two alphas with C(alpha) > 0.9")
    a = alphas[keep]
    design = np.column_stack([a**2, a**4])
    (c2, c4), *_ = np.linalg.lstsq(design, 1.0 - corr[keep], rcond=None)
    comm = R @ K - K @ R
    c2_comm = float(-np.trace(comm @ comm).real / (2 * hbar**2 * purity))
    scale = float(np.max(np.abs(K))) ** 2 / hbar**2
    if not _close(c2, c2_comm, tol, 1e-9 * scale):
        raise ArithmeticError(f"fitted c2 {c2:.6g} disagrees with commutator value {c2_comm:.6g}")
    disp = None
    if abs(purity - 1.0) < 1e-9:
        mean = np.trace(R @ K).real
        disp = float((np.trace(R @ K @ K).real - mean**2) / hbar**2)
        if not _close(c2, disp, tol, 1e-9 * scale):
            raise ArithmeticError(f"fitted c2 {c2:.6g} disagrees with dispersion {disp:.6g}")
    return GeneratorExpansion(alphas, corr, float(c2), float(c4), c2_comm, disp)
