"""State families on a position grid and phase-space translations.

Translations follow the symmetric ordering of the operator
``T_xi = exp[i (xi_p q - xi_q p) / hbar]``::

    (T_xi psi)(q) = exp[i (xi_p q - xi_p xi_q / 2) / hbar] psi(q - xi_q)

The position shift is applied in the momentum representation, so it is
exact for band-limited states and needs no interpolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from chordscope.core import DualGridPair, PhaseVector, PlanckContext, PositionGrid

#: Largest |psi| tolerated on the two outermost samples of a grid.
EDGE_TOL = 1e-6


class GridTooNarrowError(ValueError):
    """The state does not decay inside the position grid."""


class DegenerateStateError(ValueError):
    """A superposition with (numerically) vanishing norm."""


def _as_position_grid(grid) -> PositionGrid:
    if isinstance(grid, DualGridPair):
        return grid.position_grid()
    if isinstance(grid, PositionGrid):
        return grid
    raise TypeError(f"expected a PositionGrid or DualGridPair, got {type(grid).__name__}")


def _hbar_of(ctx) -> float:
    if isinstance(ctx, PlanckContext):
        return ctx.hbar
    return float(ctx)


def edge_amplitude(psi: np.ndarray) -> float:
    return float(max(abs(psi[0]), abs(psi[1]), abs(psi[-1]), abs(psi[-2])))


@dataclass(frozen=True, eq=False)
class PositionWavefunction:
    grid: PositionGrid
    amplitudes: np.ndarray = field(repr=False)
    hbar: float = 1.0

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex)
        if a.shape != (self.grid.n,):
            raise ValueError(f"amplitudes must have shape ({self.grid.n},)")
        norm = np.sum(np.abs(a) ** 2) * self.grid.dq
        if abs(norm - 1) > 1e-10:
            raise ValueError(f"wavefunction not normalized (norm {norm:.3e})")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def q(self) -> np.ndarray:
        return self.grid.q

    def inner(self, other: "PositionWavefunction") -> complex:
        """``<self|other>``."""
        _check_same_grid(self.grid, other.grid)
        return complex(np.vdot(self.amplitudes, other.amplitudes) * self.grid.dq)

    def fidelity(self, other: "PositionWavefunction") -> float:
        return abs(self.inner(other))

    def density(self) -> "DensityMatrixRep":
        return density_from_pure(self)


@dataclass(frozen=True, eq=False)
class DensityMatrixRep:
    """Density matrix sampled as ``matrix[i, j] = rho(q_i, q_j)``."""

    grid: PositionGrid
    matrix: np.ndarray = field(repr=False)
    hbar: float = 1.0
    check_psd: bool = field(default=True, repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        n = self.grid.n
        if m.shape != (n, n):
            raise ValueError(f"matrix must have shape ({n}, {n})")
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(m).real * self.grid.dq
        if abs(tr - 1) > 1e-10:
            raise ValueError(f"density matrix trace is {tr!r}, not 1")
        if self.check_psd:
            lam = np.linalg.eigvalsh(m * self.grid.dq)
            if lam[0] < -1e-9:
                raise ValueError(f"density matrix has eigenvalue {lam[0]:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def purity(self) -> float:
        return float(np.sum(np.abs(self.matrix) ** 2).real * self.grid.dq**2)

    def expectation(self, op: np.ndarray) -> complex:
        """``tr(rho K)`` for an operator given as a matrix acting on samples."""
        return complex(np.trace(self.matrix @ op) * self.grid.dq)


State = Union[PositionWavefunction, DensityMatrixRep]


def _check_same_grid(a: PositionGrid, b: PositionGrid) -> None:
    if a != b:
        raise ValueError(f"grid mismatch: {a} vs {b}")


def _finish(grid: PositionGrid, psi: np.ndarray, hbar: float, normalize=False):
    if normalize:
        psi = psi / math.sqrt(np.sum(np.abs(psi) ** 2) * grid.dq)
    edge = edge_amplitude(psi)
    if edge > EDGE_TOL:
        raise GridTooNarrowError(
            f"|psi| = {edge:.2e} at the grid edge (limit {EDGE_TOL:.0e}); widen the grid"
        )
    return PositionWavefunction(grid, psi, hbar)


def _ground(q: np.ndarray, omega: float, hbar: float) -> np.ndarray:
    return (omega / (math.pi * hbar)) ** 0.25 * np.exp(-omega * q**2 / (2 * hbar))


def _shift_position(psi: np.ndarray, dq: float, shift: float) -> np.ndarray:
    """``psi(q - shift)`` along axis 0."""
    if shift == 0:
        return psi.astype(complex)
    k = 2 * np.pi * np.fft.fftfreq(psi.shape[0], d=dq)
    if psi.ndim == 2:
        k = k[:, None]
    return np.fft.ifft(np.fft.fft(psi, axis=0) * np.exp(-1j * k * shift), axis=0)


def _translate_samples(psi, grid: PositionGrid, shift, hbar: float) -> np.ndarray:
    xp, xq = float(shift[0]), float(shift[1])
    out = _shift_position(psi, grid.dq, xq)
    phase = np.exp(1j * (xp * grid.q - xp * xq / 2) / hbar)
    return out * (phase[:, None] if out.ndim == 2 else phase)


def make_coherent(center, omega: float = 1.0, ctx=PlanckContext(), grid=None) -> PositionWavefunction:
    """Ground state of frequency ``omega`` displaced by ``T_center``.

    The undisplaced packet is real and positive, which fixes the global
    phase of every coherent state.
    """
    if not omega > 0:
        raise ValueError("omega must be positive")
    hbar = _hbar_of(ctx)
    g = _as_position_grid(grid)
    return _finish(g, _coherent_samples(g, center, omega, hbar), hbar)


def _coherent_samples(g: PositionGrid, center, omega: float, hbar: float) -> np.ndarray:
    psi = _ground(g.q - center[1], omega, hbar).astype(complex)
    return psi * np.exp(1j * (center[0] * g.q - center[0] * center[1] / 2) / hbar)


def hermite_functions(n_max: int, q: np.ndarray, hbar: float = 1.0) -> np.ndarray:
    """Oscillator eigenfunctions 0..n_max (omega = 1) by stable recurrence."""
    x = q / math.sqrt(hbar)
    out = np.empty((n_max + 1, q.size))
    out[0] = (math.pi * hbar) ** -0.25 * np.exp(-(x**2) / 2)
    if n_max >= 1:
        out[1] = math.sqrt(2) * x * out[0]
    for k in range(1, n_max):
        out[k + 1] = math.sqrt(2 / (k + 1)) * x * out[k] - math.sqrt(k / (k + 1)) * out[k - 1]
    return out


def make_fock(n_level: int, ctx=PlanckContext(), grid=None) -> PositionWavefunction:
    if n_level < 0 or int(n_level) != n_level:
        raise ValueError("n_level must be a nonnegative integer")
    hbar = _hbar_of(ctx)
    g = _as_position_grid(grid)
    psi = hermite_functions(int(n_level), g.q, hbar)[-1].astype(complex)
    return _finish(g, psi, hbar)


def superpose_coherent(terms: Sequence[tuple[complex, Sequence[float]]], ctx=PlanckContext(), grid=None) -> PositionWavefunction:
    """Normalized ``sum_j a_j |eta_j>`` of unit-frequency coherent states."""
    if not terms:
        raise ValueError("superposition needs at least one term")
    hbar = _hbar_of(ctx)
    g = _as_position_grid(grid)
    psi = np.zeros(g.n, dtype=complex)
    for coef, center in terms:
        psi += complex(coef) * _coherent_samples(g, center, 1.0, hbar)
    norm = math.sqrt(np.sum(np.abs(psi) ** 2) * g.dq)
    if norm < 1e-8:
        raise DegenerateStateError(f"superposition norm {norm:.2e} is too small")
    return _finish(g, psi / norm, hbar)


def make_cat(center, sign: int = 1, ctx=PlanckContext(), grid=None) -> PositionWavefunction:
    """Normalized ``|eta> + sign |-eta>``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    c = PhaseVector(*center)
    return superpose_coherent([(1.0, c), (float(sign), -c)], ctx, grid)


def translate_state(psi: PositionWavefunction, shift) -> PositionWavefunction:
    out = _translate_samples(psi.amplitudes, psi.grid, shift, psi.hbar)
    return _finish(psi.grid, out, psi.hbar, normalize=True)


def density_from_pure(psi: PositionWavefunction) -> DensityMatrixRep:
    a = psi.amplitudes
    m = np.outer(a, a.conj())
    m = (m + m.conj().T) / 2
    return DensityMatrixRep(psi.grid, m, psi.hbar, check_psd=False)


def mix(weights: Iterable[float], states: Sequence[State]) -> DensityMatrixRep:
    w = np.asarray(list(weights), dtype=float)
    if len(w) != len(states) or not len(w):
        raise ValueError("need one weight per state")
    if np.any(w < 0) or abs(w.sum() - 1) > 1e-12:
        raise ValueError("weights must be nonnegative and sum to 1")
    reps = [as_density(s) for s in states]
    grid, hbar = reps[0].grid, reps[0].hbar
    for r in reps[1:]:
        _check_same_grid(grid, r.grid)
    m = sum(wi * r.matrix for wi, r in zip(w, reps))
    return DensityMatrixRep(grid, m, hbar)


def as_density(state: State) -> DensityMatrixRep:
    if isinstance(state, DensityMatrixRep):
        return state
    return density_from_pure(state)


def pure_components(state: State, cutoff: float = 1e-14) -> list[tuple[float, np.ndarray]]:
    """Decompose a state into ``(probability, amplitudes)`` pairs.

    Amplitudes are normalized to ``sum |psi|^2 dq == 1``.
    """
    if isinstance(state, PositionWavefunction):
        return [(1.0, state.amplitudes)]
    dq = state.grid.dq
    lam, vec = np.linalg.eigh(state.matrix * dq)
    keep = lam > cutoff * lam.max()
    return [(float(l), v / math.sqrt(dq)) for l, v in zip(lam[keep], vec.T[keep])]


def translate_density(rho: DensityMatrixRep, shift) -> DensityMatrixRep:
    """``T rho T^dagger`` applied column- and row-wise."""
    g = rho.grid
    left = _translate_samples(rho.matrix, g, shift, rho.hbar)
    both = _translate_samples(left.conj().T, g, shift, rho.hbar)
    both = (both + both.conj().T) / 2
    return DensityMatrixRep(g, both / (np.trace(both).real * g.dq), rho.hbar, check_psd=False)


def position_operator(grid: PositionGrid) -> np.ndarray:
    return np.diag(grid.q).astype(complex)


def momentum_operator(grid: PositionGrid, hbar: float = 1.0) -> np.ndarray:
    """Spectral representation of ``-i hbar d/dq`` on the periodic grid."""
    n = grid.n
    f = np.fft.fft(np.eye(n), axis=0)
    k = 2 * np.pi * np.fft.fftfreq(n, d=grid.dq)
    k[n // 2] = 0.0
    op = np.fft.ifft(hbar * k[:, None] * f, axis=0)
    return (op + op.conj().T) / 2
