"""Parity about a phase-space point: projectors, projected chord functions
and the reality criterion for chord functions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from chordscope.core import DualGridPair, GridError, PhaseVector, PositionGrid
from chordscope.states import DensityMatrixRep, as_density
from chordscope.transforms import ChordField, WignerField, chord_values, wigner_at, wigner_of

#: Samples at each grid end left out of the commutator test.
EDGE_BAND = 2


class ZeroWeightError(ArithmeticError):
    """A parity projection annihilates the state."""


class SymmetryError(ValueError):
    """The state does not commute with the requested reflection."""


def _as_centre(X) -> PhaseVector:
    return X if isinstance(X, PhaseVector) else PhaseVector(float(X[0]), float(X[1]))


def reflection_matrix(grid: PositionGrid, X=(0.0, 0.0), hbar: float = 1.0) -> np.ndarray:
    """Unitary parity about ``X``: ``psi(q) -> exp(2i P (q - Q)/hbar) psi(2Q - q)``.

    Only centres that map the periodic grid onto itself are accepted:
    ``2Q`` must be a whole number of spacings and ``P`` a multiple of
    ``pi hbar / (n dq)``.
    """
    X = _as_centre(X)
    n, dq = grid.n, grid.dq
    shift = 2 * X.q / dq
    mom = X.p * n * dq / (math.pi * hbar)
    if abs(shift - round(shift)) > 1e-9 or abs(mom - round(mom)) > 1e-9:
        raise GridError(f"reflection about {tuple(X)} is not representable on this grid")
    q = grid.q
    i = np.arange(n)
    target = (int(round(shift)) + n - i) % n
    U = np.zeros((n, n), dtype=complex)
    U[i, target] = np.exp(2j * X.p * (q - X.q) / hbar)
    return U


def parity_projector(grid: PositionGrid, X, sign: int, hbar: float = 1.0) -> np.ndarray:
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    U = reflection_matrix(grid, X, hbar)
    return (np.eye(grid.n) + sign * U) / 2


def parity_project(rho, X, sign: int, min_weight: float = 1e-10) -> tuple[DensityMatrixRep, float]:
    """Project onto the even (``sign=+1``) or odd part about ``X``.

    Returns the renormalized projected state and the weight ``tr(rho P)``.
    """
    d = as_density(rho)
    P = parity_projector(d.grid, X, sign, d.hbar)
    weight = float(np.sum(np.diag(d.matrix @ P)).real * d.grid.dq)
    if weight < min_weight:
        raise ZeroWeightError(f"parity {sign:+d} projection has weight {weight:.3e}")
    m = P @ d.matrix @ P / weight
    return DensityMatrixRep(d.grid, (m + m.conj().T) / 2, d.hbar), weight


def commutator_norm(rho, X=(0.0, 0.0)) -> float:
    """``max |[rho, R_X]|`` relative to ``max |rho|``.

    Samples whose mirror image wraps around the periodic grid carry only the
    negligible edge amplitude and are left out.
    """
    d = as_density(rho)
    U = reflection_matrix(d.grid, X, d.hbar)
    c = d.matrix @ U - U @ d.matrix
    mirror = np.argmax(np.abs(U), axis=1)
    q = d.grid.q
    wrapped = np.abs(q + q[mirror] - 2 * _as_centre(X).q) > d.grid.dq / 2
    band = np.zeros(d.grid.n, dtype=bool)
    band[:EDGE_BAND] = band[-EDGE_BAND:] = True
    keep = ~(wrapped | band | band[mirror])
    c = c[np.ix_(keep, keep)]
    return float(np.max(np.abs(c)) / np.max(np.abs(d.matrix)))


def _centred_chord(state, X: PhaseVector, xp, xq) -> np.ndarray:
    """Chord function of the state translated so that ``X`` sits at the origin."""
    chi = chord_values(state, xp, xq)
    XP, XQ = np.meshgrid(xp, xq, indexing="ij")
    return chi * np.exp(-1j * (X.p * XQ - X.q * XP) / state.hbar)


def parity_rescaling_check(state, X=(0.0, 0.0), tol: float = 1e-8) -> float:
    """Residual of ``W(X') = +-2 chi_X(-2(X' - X))`` for a parity eigenstate.

    ``chi_X`` is the chord function after moving ``X`` to the origin. The
    sign is the parity of the state; the residual is relative to ``max|W|``.
    """
    X = _as_centre(X)
    if commutator_norm(state, X) > tol:
        raise SymmetryError(f"state is not symmetric about {tuple(X)}")
    grids = DualGridPair(state.grid.n, state.grid.extent, state.hbar)
    W = wigner_of(state, grids).values
    U = reflection_matrix(state.grid, X, state.hbar)
    d = as_density(state)
    parity = np.sign(np.sum(np.diag(d.matrix @ U)).real)
    axis = grids.axis("centre")
    chi = _centred_chord(state, X, -2 * (axis - X.p), -2 * (axis - X.q))
    return float(np.max(np.abs(W - parity * 2 * chi)) / np.max(np.abs(W)))


def projected_chord(chi: ChordField, W: WignerField, sign: int, min_denominator: float = 1e-8) -> ChordField:
    """Chord function of the parity projection about the origin.

    Built from the chord function and the Wigner function of the unprojected
    state: the reflected cross terms of ``P rho P`` contribute ``W(+-xi/2)``.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if chi.grids != W.grids:
        raise GridError("chord and Wigner fields come from different grids")
    g = chi.grids
    denom = 1 + sign * math.pi * g.hbar * W.origin_value.real
    if abs(denom) < min_denominator:
        raise ZeroWeightError(f"parity {sign:+d} projection has vanishing weight")
    half = g.axis("chord") / 2
    w_half = wigner_at(chi, half, half)
    w_minus = wigner_at(chi, -half, -half)
    values = (2 * chi.values + 2 * chi.reflected() + sign * (w_half + w_minus)) / (4 * denom)
    return ChordField(g, values)


def reality_defect(chi: ChordField) -> float:
    return float(np.max(np.abs(chi.values.imag)) / np.max(np.abs(chi.values)))


def reality_criterion(state, X=(0.0, 0.0), defect_tol: float = 1e-7, comm_tol: float = 1e-8) -> bool:
    """Whether the chord function about ``X`` is real, cross-checked against the
    commutator of the state with the reflection."""
    X = _as_centre(X)
    grids = DualGridPair(state.grid.n, state.grid.extent, state.hbar)
    axis = grids.axis("chord")
    chi = _centred_chord(state, X, axis, axis)
    real = float(np.max(np.abs(chi.imag)) / np.max(np.abs(chi))) < defect_tol
    symmetric = commutator_norm(state, X) < comm_tol
    if real != symmetric:
        raise ArithmeticError("reality of the chord function and reflection symmetry disagree")
    return real


@dataclass(frozen=True)
class ParityReport:
    centre: PhaseVector
    even_weight: float
    odd_weight: float
    reality_defect: float

    def __post_init__(self):
        if abs(self.even_weight + self.odd_weight - 1.0) > 1e-10:
            raise ValueError("parity weights do not sum to one")

    def as_dict(self) -> dict:
        return {
            "centre": {"p": self.centre.p, "q": self.centre.q},
            "even_weight": self.even_weight,
            "odd_weight": self.odd_weight,
            "reality_defect": self.reality_defect,
        }


def parity_report(state, X=(0.0, 0.0)) -> ParityReport:
    X = _as_centre(X)
    d = as_density(state)
    U = reflection_matrix(d.grid, X, d.hbar)
    even = float((1 + np.sum(np.diag(d.matrix @ U)).real * d.grid.dq) / 2)
    grids = DualGridPair(d.grid.n, d.grid.extent, d.hbar)
    axis = grids.axis("chord")
    chi = _centred_chord(state, X, axis, axis)
    defect = float(np.max(np.abs(chi.imag)) / np.max(np.abs(chi)))
    return ParityReport(X, even, 1.0 - even, defect)
