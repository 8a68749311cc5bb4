"""Phase-space primitives: points, chords, skew products and dual grids.

Every coordinate pair is ordered ``(p, q)``. Grids are uniform, origin
centred and carry an even number of samples per axis so that the origin is
always sampled; sample ``i`` sits at ``(i - n/2) * spacing``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, NamedTuple

import numpy as np

Space = Literal["centre", "chord"]


class GridError(ValueError):
    """Raised for inconsistent or invalid grids."""


@dataclass(frozen=True)
class PlanckContext:
    hbar: float = 1.0
    dof: int = 1

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if self.dof != 1:
            raise ValueError("only one degree of freedom is supported")

    @property
    def cell(self) -> float:
        """Phase-space area of one quantum cell, (2 pi hbar)^L."""
        return (2 * math.pi * self.hbar) ** self.dof


class PhaseVector(NamedTuple):
    """A point or chord ``(p, q)`` of the phase plane."""

    p: float
    q: float

    def __add__(self, other):  # type: ignore[override]
        return PhaseVector(self.p + other[0], self.q + other[1])

    def __sub__(self, other):
        return PhaseVector(self.p - other[0], self.q - other[1])

    def __neg__(self):
        return PhaseVector(-self.p, -self.q)

    def __mul__(self, s):  # type: ignore[override]
        return PhaseVector(self.p * s, self.q * s)

    __rmul__ = __mul__

    @property
    def norm(self) -> float:
        return math.hypot(self.p, self.q)

    def rotate90(self) -> "PhaseVector":
        return PhaseVector(-self.q, self.p)


def skew_product(a, b) -> float:
    """Symplectic area ``a ^ b = a_p b_q - a_q b_p``.

    Works elementwise on array-valued components as well.
    """
    return a[0] * b[1] - a[1] * b[0]


def grid_coords(n: int, spacing: float) -> np.ndarray:
    return (np.arange(n) - n // 2) * spacing


@dataclass(frozen=True)
class PositionGrid:
    """Uniform origin-centred position samples used by wavefunctions."""

    n: int
    dq: float

    def __post_init__(self):
        if self.n < 8 or self.n % 2:
            raise GridError(f"position grid needs an even n >= 8, got {self.n}")
        if not self.dq > 0:
            raise GridError("position spacing must be positive")

    @property
    def q(self) -> np.ndarray:
        return grid_coords(self.n, self.dq)

    @property
    def extent(self) -> float:
        return self.n * self.dq / 2

    def momenta(self, n_fft: int | None = None) -> np.ndarray:
        """Angular wavenumbers (in units of 1/length) in FFT order."""
        m = self.n if n_fft is None else n_fft
        return 2 * np.pi * np.fft.fftfreq(m, d=self.dq)


@dataclass(frozen=True)
class DualGridPair:
    """Matched centre-space and chord-space grids.

    Both spaces use square ``n x n`` grids with a common spacing on the two
    axes. The spacings satisfy ``d_centre * d_chord * n == 2 pi hbar``, which
    makes the discrete symplectic Fourier transform an exact DFT.
    """

    n: int
    centre_extent: float
    hbar: float = 1.0

    def __post_init__(self):
        if self.n < 8 or self.n % 2:
            raise GridError(f"grids need an even n >= 8, got {self.n}")
        if not self.centre_extent > 0:
            raise GridError("centre_extent must be positive")
        if not self.hbar > 0:
            raise GridError("hbar must be positive")

    @property
    def centre_spacing(self) -> float:
        return 2 * self.centre_extent / self.n

    @property
    def chord_extent(self) -> float:
        return self.n * math.pi * self.hbar / (2 * self.centre_extent)

    @property
    def chord_spacing(self) -> float:
        return 2 * self.chord_extent / self.n

    @property
    def duality_product(self) -> float:
        return self.centre_spacing * self.chord_spacing * self.n

    def spacing(self, space: Space) -> float:
        return self.centre_spacing if space == "centre" else self.chord_spacing

    def extent(self, space: Space) -> float:
        return self.centre_extent if space == "centre" else self.chord_extent

    def axis(self, space: Space) -> np.ndarray:
        return grid_coords(self.n, self.spacing(space))

    def mesh(self, space: Space) -> tuple[np.ndarray, np.ndarray]:
        """Coordinate arrays ``(p, q)`` indexed ``[i_p, i_q]``."""
        a = self.axis(space)
        return np.meshgrid(a, a, indexing="ij")

    def position_grid(self) -> PositionGrid:
        """State grid whose samples coincide with the centre-grid Q axis."""
        return PositionGrid(self.n, self.centre_spacing)

    @property
    def is_self_dual(self) -> bool:
        return math.isclose(self.centre_spacing, self.chord_spacing, rel_tol=1e-12)

    @classmethod
    def self_dual(cls, n: int, hbar: float = 1.0) -> "DualGridPair":
        """Grid pair whose centre and chord samples coincide."""
        return cls(n, math.sqrt(math.pi * hbar * n / 2), hbar)

    def index_of(self, space: Space, value: float, tol: float = 1e-9) -> int | None:
        """Grid index of ``value`` on the given axis, or None if off-grid."""
        h = self.spacing(space)
        x = value / h + self.n // 2
        i = round(x)
        if abs(x - i) > tol or not 0 <= i < self.n:
            return None
        return int(i)


def make_dual_grids(n: int, centre_extent: float, hbar: float = 1.0) -> DualGridPair:
    return DualGridPair(n, centre_extent, hbar)


@dataclass(frozen=True, eq=False)
class ComplexField:
    """Complex samples on one member of a :class:`DualGridPair`.

    ``values[i, j]`` is the sample at ``(p_i, q_j)``.
    """

    grids: DualGridPair
    space: Space
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grids.n, self.grids.n):
            raise GridError(f"values shape {v.shape} does not match n={self.grids.n}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field contains non-finite values")
        if self.space not in ("centre", "chord"):
            raise GridError(f"unknown space {self.space!r}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def hbar(self) -> float:
        return self.grids.hbar

    @property
    def spacing(self) -> float:
        return self.grids.spacing(self.space)

    @property
    def axis(self) -> np.ndarray:
        return self.grids.axis(self.space)

    @property
    def origin_value(self) -> complex:
        h = self.grids.n // 2
        return complex(self.values[h, h])

    def value_at(self, x) -> complex:
        """Sample at an exact grid point ``x = (p, q)``."""
        i = self.grids.index_of(self.space, x[0])
        j = self.grids.index_of(self.space, x[1])
        if i is None or j is None:
            raise GridError(f"{tuple(x)} is not a {self.space} grid point")
        return complex(self.values[i, j])

    def integral(self) -> complex:
        return complex(self.values.sum() * self.spacing**2)

    def reflected(self) -> np.ndarray:
        """Values at ``-x`` for every grid point ``x``.

        The unpaired ``-n/2`` row/column maps to itself periodically; fields
        are assumed negligible there.
        """
        idx = (-np.arange(self.grids.n)) % self.grids.n
        return self.values[np.ix_(idx, idx)]

    def with_values(self, values: np.ndarray) -> "ComplexField":
        return ComplexField(self.grids, self.space, values)
