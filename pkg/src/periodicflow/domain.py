"""Discrete space-time domain: a periodic box crossed with a time circle.

The domain is sampled on a uniform grid with even resolutions.  Spatial
wavenumbers are xi_j = 2*pi*n_j/L_j with integer n_j in [-N_j/2, N_j/2),
temporal frequencies are omega = (2*pi/T)*k with integer k in [-M/2, M/2).
Arrays are laid out time-major, then x3, x2, x1, so a scalar field has shape
(M, N3, N2, N1) and component arrays carry a leading axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

__all__ = ["Params", "Grid", "FreqIndex", "make_grid", "frequencies"]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Params:
    """Physical constants: drift speed along x1 and the time period (unit viscosity).

    A zero drift speed is legal and degrades to the purely periodic,
    driftless regime; reports flag that case.
    """

    lam: float
    period: float

    def __post_init__(self):
        if not math.isfinite(self.lam):
            raise ValueError(f"drift speed must be finite, got {self.lam!r}")
        if not (math.isfinite(self.period) and self.period > 0.0):
            raise ValueError(f"period must be a positive finite number, got {self.period!r}")

    @property
    def driftless(self) -> bool:
        return self.lam == 0.0


@dataclass(frozen=True)
class FreqIndex:
    """One point of the dual lattice: integer spatial modes and temporal mode."""

    n: tuple[int, int, int]
    k: int

    def xi(self, box: tuple[float, float, float]) -> tuple[float, float, float]:
        """Spatial frequency vector xi_j = 2*pi*n_j / L_j."""
        return tuple(TWO_PI * nj / lj for nj, lj in zip(self.n, box))

    def omega(self, period: float) -> float:
        """Temporal frequency omega = (2*pi/T) * k."""
        return TWO_PI * self.k / period


def _int_modes(n: int) -> np.ndarray:
    """Integer mode numbers in FFT storage order, Nyquist stored as -n/2."""
    modes = np.arange(n, dtype=np.int64)
    modes[modes >= n // 2] -= n
    return modes


@dataclass(frozen=True)
class Grid:
    """Uniform space-time grid with precomputed frequency lattices.

    Parameters
    ----------
    box : tuple of three positive floats
        Spatial side lengths (L1, L2, L3).
    n_space : tuple of three even ints >= 4
        Spatial resolutions (N1, N2, N3).
    n_time : even int >= 4
        Temporal resolution M.
    period : positive float
        Time period T.

    Derived arrays (set once, treated as immutable):
    ``k_modes`` and ``n_modes`` hold integer mode numbers in FFT order;
    ``omega``, ``xi1``, ``xi2``, ``xi3`` and ``xi_sq`` are broadcastable
    against coefficient arrays of shape (M, N3, N2, N1); ``nyquist_mask``
    marks rows where any direction sits on its Nyquist mode and
    ``dealias_mask`` marks modes kept by the 2/3 rule in all four
    frequency directions.
    """

    box: tuple[float, float, float]
    n_space: tuple[int, int, int]
    n_time: int
    period: float

    def __post_init__(self):
        box = tuple(float(b) for b in self.box)
        n_space = tuple(int(n) for n in self.n_space)
        if len(box) != 3 or len(n_space) != 3:
            raise ValueError("box and n_space must have three entries")
        object.__setattr__(self, "box", box)
        object.__setattr__(self, "n_space", n_space)
        object.__setattr__(self, "n_time", int(self.n_time))
        object.__setattr__(self, "period", float(self.period))

        for lj in self.box:
            if not (math.isfinite(lj) and lj > 0.0):
                raise ValueError(f"box lengths must be positive, got {self.box}")
        if not (math.isfinite(self.period) and self.period > 0.0):
            raise ValueError(f"period must be positive, got {self.period}")
        for nj in (*self.n_space, self.n_time):
            if nj < 4 or nj % 2 != 0:
                raise ValueError(
                    f"resolutions must be even and at least 4, got {self.n_space} x {self.n_time}"
                )

        n1, n2, n3 = self.n_space
        m = self.n_time
        k_modes = _int_modes(m)
        n_modes = (_int_modes(n1), _int_modes(n2), _int_modes(n3))
        object.__setattr__(self, "k_modes", k_modes)
        object.__setattr__(self, "n_modes", n_modes)

        omega = (TWO_PI / self.period) * k_modes.astype(np.float64)
        object.__setattr__(self, "omega", omega.reshape(m, 1, 1, 1))
        xi1 = (TWO_PI / box[0]) * n_modes[0].astype(np.float64)
        xi2 = (TWO_PI / box[1]) * n_modes[1].astype(np.float64)
        xi3 = (TWO_PI / box[2]) * n_modes[2].astype(np.float64)
        object.__setattr__(self, "xi1", xi1.reshape(1, 1, 1, n1))
        object.__setattr__(self, "xi2", xi2.reshape(1, 1, n2, 1))
        object.__setattr__(self, "xi3", xi3.reshape(1, n3, 1, 1))
        object.__setattr__(self, "xi_sq", self.xi1**2 + self.xi2**2 + self.xi3**2)

        nyq = (
            (np.abs(k_modes).reshape(m, 1, 1, 1) == m // 2)
            | (np.abs(n_modes[2]).reshape(1, n3, 1, 1) == n3 // 2)
            | (np.abs(n_modes[1]).reshape(1, 1, n2, 1) == n2 // 2)
            | (np.abs(n_modes[0]).reshape(1, 1, 1, n1) == n1 // 2)
        )
        object.__setattr__(self, "nyquist_mask", nyq)

        keep = (
            (np.abs(k_modes).reshape(m, 1, 1, 1) * 3 <= m)
            & (np.abs(n_modes[2]).reshape(1, n3, 1, 1) * 3 <= n3)
            & (np.abs(n_modes[1]).reshape(1, 1, n2, 1) * 3 <= n2)
            & (np.abs(n_modes[0]).reshape(1, 1, 1, n1) * 3 <= n1)
        )
        object.__setattr__(self, "dealias_mask", keep)

        radius_sq = (
            k_modes.reshape(m, 1, 1, 1) ** 2
            + n_modes[2].reshape(1, n3, 1, 1) ** 2
            + n_modes[1].reshape(1, 1, n2, 1) ** 2
            + n_modes[0].reshape(1, 1, 1, n1) ** 2
        )
        object.__setattr__(self, "mode_radius_sq", radius_sq)

    @property
    def shape(self) -> tuple[int, int, int, int]:
        """(M, N3, N2, N1): the storage shape of one scalar field."""
        n1, n2, n3 = self.n_space
        return (self.n_time, n3, n2, n1)

    @property
    def size(self) -> int:
        n1, n2, n3 = self.n_space
        return self.n_time * n1 * n2 * n3

    @property
    def volume(self) -> float:
        """Measure of the box; the time circle carries normalized measure."""
        return self.box[0] * self.box[1] * self.box[2]

    @property
    def xi(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.xi1, self.xi2, self.xi3)

    def node_coords(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """1-d node coordinates (x1, x2, x3, t)."""
        n1, n2, n3 = self.n_space
        x1 = np.arange(n1) * (self.box[0] / n1)
        x2 = np.arange(n2) * (self.box[1] / n2)
        x3 = np.arange(n3) * (self.box[2] / n3)
        t = np.arange(self.n_time) * (self.period / self.n_time)
        return x1, x2, x3, t

    def coordinate_fields(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Full-shape coordinate arrays (X1, X2, X3, T) for sampling callables."""
        x1, x2, x3, t = self.node_coords()
        m = self.n_time
        n1, n2, n3 = self.n_space
        shape = self.shape
        return (
            np.broadcast_to(x1.reshape(1, 1, 1, n1), shape),
            np.broadcast_to(x2.reshape(1, 1, n2, 1), shape),
            np.broadcast_to(x3.reshape(1, n3, 1, 1), shape),
            np.broadcast_to(t.reshape(m, 1, 1, 1), shape),
        )


def make_grid(
    box: tuple[float, float, float],
    n_space: tuple[int, int, int],
    n_time: int,
    params: Params,
) -> Grid:
    """Build the grid for the given box, resolutions and time period."""
    return Grid(box=tuple(box), n_space=tuple(n_space), n_time=n_time, period=params.period)


def frequencies(grid: Grid) -> Iterator[FreqIndex]:
    """Enumerate all modes once, in canonical order.

    Canonical order is time-major, then x3, x2, x1, each index ascending
    from its lattice minimum, so the first entry of an
    N=(4,4,4), M=4 grid is n=(-2,-2,-2), k=-2.
    """
    n1, n2, n3 = grid.n_space
    m = grid.n_time
    for k in range(-m // 2, m // 2):
        for i3 in range(-n3 // 2, n3 // 2):
            for i2 in range(-n2 // 2, n2 // 2):
                for i1 in range(-n1 // 2, n1 // 2):
                    yield FreqIndex(n=(i1, i2, i3), k=k)
