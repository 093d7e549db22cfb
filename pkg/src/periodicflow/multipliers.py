"""Diagonal Fourier multipliers: projections, the drift resolvent, fractional time derivatives.

Every operator here acts mode-by-mode on spectral coefficients.  All symbols
satisfy m(-xi, -k) = conj(m(xi, k)), so real fields stay real.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Callable

import numpy as np

from .domain import Grid, Params
from .errors import MeanModeNonzero
from .fourier import SpectralField

__all__ = [
    "helmholtz",
    "oseen_symbol",
    "oseen_apply",
    "oseen_inverse",
    "half_time_derivative",
    "regularity_multiplier",
    "regularity_multiplier_bound",
    "MultiplierReport",
    "marcinkiewicz_probe",
    "PROBE_SYMBOLS",
]

_FLOOR = 1e-300


def helmholtz(spec: SpectralField) -> SpectralField:
    """Project a velocity field onto its divergence-free part.

    Mode-wise this applies I - xi (x) xi / |xi|^2; the xi = 0 plane is left
    unchanged, so spatially constant modes count as divergence-free.
    """
    if spec.components != 3:
        raise ValueError("helmholtz projection expects a 3-component field")
    g = spec.grid
    c = spec.coeffs
    dot = c[0] * g.xi1 + c[1] * g.xi2 + c[2] * g.xi3
    safe = np.where(g.xi_sq > 0.0, g.xi_sq, 1.0)
    scale = np.where(g.xi_sq > 0.0, dot / safe, 0.0)
    out = np.stack([c[0] - g.xi1 * scale, c[1] - g.xi2 * scale, c[2] - g.xi3 * scale])
    return SpectralField(g, out)


def oseen_symbol(grid: Grid, params: Params) -> np.ndarray:
    """Symbol |xi|^2 + i(omega - lam*xi1) of d/dt - Lap - lam*d/dx1.

    Vanishes only at the joint zero mode (xi, k) = (0, 0); on the periodic
    lattice every other mode is bounded away from zero.
    """
    return grid.xi_sq + 1j * (grid.omega - params.lam * grid.xi1)


def oseen_apply(spec: SpectralField, params: Params) -> SpectralField:
    """Apply the forward operator d/dt - Lap - lam*d/dx1 spectrally."""
    return SpectralField(spec.grid, spec.coeffs * oseen_symbol(spec.grid, params))


def oseen_inverse(spec: SpectralField, params: Params, tol_mean: float = 1e-12) -> SpectralField:
    """Invert d/dt - Lap - lam*d/dx1 on fields with no space-time mean.

    The (0,0) mode is annihilated by the operator, so it must be absent from
    the input; the output's (0,0) mode is set to zero.

    Raises
    ------
    MeanModeNonzero
        If the magnitude of the input's (0,0) mode exceeds ``tol_mean`` times
        the largest coefficient magnitude.
    """
    c = spec.coeffs
    scale = float(np.abs(c).max(initial=0.0))
    mean_mode = float(np.abs(c[:, 0, 0, 0, 0]).max(initial=0.0))
    if mean_mode > tol_mean * scale:
        raise MeanModeNonzero(
            f"space-time mean mode magnitude {mean_mode:.3e} exceeds "
            f"{tol_mean:.1e} x field scale {scale:.3e}; the periodic box cannot "
            "absorb a mean solenoidal forcing"
        )
    sym = oseen_symbol(spec.grid, params)
    sym = sym.copy()
    sym[0, 0, 0, 0] = 1.0
    out = c / sym
    out[:, 0, 0, 0, 0] = 0.0
    return SpectralField(spec.grid, out)


def _half_derivative_factor(grid: Grid, branch: str) -> np.ndarray:
    if branch == "principal":
        return np.sqrt(1j * grid.omega)
    if branch == "upper":
        # Deliberately wrong branch, kept for negative controls: always the
        # root in the upper half plane, which breaks conjugate symmetry.
        return np.exp(1j * math.pi / 4.0) * np.sqrt(np.abs(grid.omega))
    raise ValueError(f"branch must be 'principal' or 'upper', got {branch!r}")


def half_time_derivative(spec: SpectralField, branch: str = "principal") -> SpectralField:
    """Half-order time derivative: multiply by the principal root of (i*omega).

    The k = 0 plane maps to zero.  Applying the operator twice reproduces the
    full time derivative.  The principal branch pairs e^{+i pi/4} with k > 0
    and e^{-i pi/4} with k < 0, preserving conjugate symmetry.
    """
    return SpectralField(spec.grid, spec.coeffs * _half_derivative_factor(spec.grid, branch))


def _regularity_factor(grid: Grid, axis: int) -> np.ndarray:
    if axis not in (1, 2, 3):
        raise ValueError(f"axis must be 1, 2 or 3, got {axis}")
    osc = (grid.k_modes != 0).reshape(grid.n_time, 1, 1, 1)
    denom = grid.xi_sq + 1j * grid.omega
    safe = np.where(osc, denom, 1.0)
    numer = np.sqrt(1j * grid.omega) * (1j * grid.xi[axis - 1])
    return np.where(osc, numer / safe, 0.0)


def regularity_multiplier(spec: SpectralField, axis: int, params: Params) -> SpectralField:
    """Multiplier carrying (d/dt - Lap)g to the half time derivative of d/dx_axis g.

    Mode-wise the factor is (i*omega)^(1/2) * (i*xi_axis) / (|xi|^2 + i*omega)
    on oscillatory modes (k != 0) and zero on the whole k = 0 plane, where the
    joint zero mode would otherwise divide zero by zero.
    """
    del params  # frequencies come precomputed on the grid
    return SpectralField(spec.grid, spec.coeffs * _regularity_factor(spec.grid, axis))


def regularity_multiplier_bound(grid: Grid, axis: int, params: Params) -> float:
    """Sup over the lattice of the multiplier magnitude; finite by construction."""
    del params
    return float(np.abs(_regularity_factor(grid, axis)).max())


# ---------------------------------------------------------------------------
# Marcinkiewicz-style probe of the continuous symbols
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MultiplierReport:
    """Sampled boundedness evidence for one continuous symbol."""

    name: str
    max_abs: float
    marcinkiewicz_sup: float
    sample_count: int

    def __post_init__(self):
        for label, value in (("max_abs", self.max_abs), ("marcinkiewicz_sup", self.marcinkiewicz_sup)):
            if not (math.isfinite(value) and value >= 0.0):
                raise ValueError(f"{label} must be finite and nonnegative, got {value!r}")

    @staticmethod
    def csv_header() -> str:
        return "symbol,max_abs,marcinkiewicz_sup,sample_count"

    def csv_row(self) -> str:
        return f"{self.name},{self.max_abs:.12e},{self.marcinkiewicz_sup:.12e},{self.sample_count}"


def _smooth_cutoff(s: np.ndarray) -> np.ndarray:
    """One on [-1/2, 1/2], zero outside [-1, 1], order-5 polynomial smoothstep between."""
    t = np.clip(2.0 * np.abs(s) - 1.0, 0.0, 1.0)
    return 1.0 - t * t * t * (t * (6.0 * t - 15.0) + 10.0)


def _make_m(axis: int, params: Params) -> Callable[..., np.ndarray]:
    scale = params.period / (2.0 * math.pi)

    def m(x1, x2, x3, eta):
        xi = (x1, x2, x3)
        return (1.0 - _smooth_cutoff(eta * scale)) * np.sqrt(1j * eta) * xi[axis - 1] / (
            x1 * x1 + x2 * x2 + x3 * x3 + 1j * eta
        )

    return m


def _make_oseen_bounded(params: Params) -> Callable[..., np.ndarray]:
    lam = params.lam

    def m(x1, x2, x3, eta):
        xi_sq = x1 * x1 + x2 * x2 + x3 * x3
        return xi_sq / (xi_sq + 1j * (eta - lam * x1))

    return m


def _make_helmholtz_entry(i: int, j: int) -> Callable[..., np.ndarray]:
    def m(x1, x2, x3, eta):
        xi = (x1, x2, x3)
        xi_sq = x1 * x1 + x2 * x2 + x3 * x3
        diag = 1.0 if i == j else 0.0
        return (diag - xi[i - 1] * xi[j - 1] / xi_sq) + 0.0 * eta

    return m


def _make_one() -> Callable[..., np.ndarray]:
    def m(x1, x2, x3, eta):
        return np.ones(np.broadcast(x1, x2, x3, eta).shape, dtype=np.complex128)

    return m


PROBE_SYMBOLS = ("one", "helmholtz", "helmholtz_offdiag", "m_1", "m_2", "m_3", "oseen_tp")


def _symbol_function(name: str, params: Params) -> Callable[..., np.ndarray]:
    if name == "one":
        return _make_one()
    if name == "helmholtz":
        return _make_helmholtz_entry(1, 1)
    if name == "helmholtz_offdiag":
        return _make_helmholtz_entry(1, 2)
    if name in ("m_1", "m_2", "m_3"):
        return _make_m(int(name[-1]), params)
    if name == "oseen_tp":
        return _make_oseen_bounded(params)
    raise ValueError(f"unknown probe symbol {name!r}; choose from {PROBE_SYMBOLS}")


def _mixed_central_difference(m, coords, active, rel_step):
    """Nested central differences along the axes listed in ``active``."""
    steps = [rel_step * np.abs(coords[ax]) for ax in active]
    total = np.zeros(np.broadcast(*coords).shape, dtype=np.complex128)
    for signs in product((-1.0, 1.0), repeat=len(active)):
        shifted = list(coords)
        parity = 1.0
        for ax, s, h in zip(active, signs, steps):
            shifted[ax] = coords[ax] + s * h
            parity *= s
        total += parity * m(*shifted)
    denom = np.ones_like(steps[0])
    for h in steps:
        denom = denom * (2.0 * h)
    return total / denom


def marcinkiewicz_probe(
    symbol: str,
    params: Params,
    resolution: int = 8,
    span: tuple[float, float] = (1e-2, 1e2),
    rel_step: float = 1e-4,
) -> MultiplierReport:
    """Sample the mixed-derivative boundedness quantity for a continuous symbol.

    For every subset of the four frequency axes, central finite differences
    approximate the mixed first derivative of the symbol and the report
    records the sampled sup of |xi1^e1 xi2^e2 xi3^e3 eta^e4 d^e m| together
    with the plain sup of |m|.  Sample points are log-spaced over ``span``
    on both sign branches of each axis, which keeps clear of the origin.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    m = _symbol_function(symbol, params)
    half = np.logspace(math.log10(span[0]), math.log10(span[1]), resolution)
    pts = np.concatenate([-half[::-1], half])
    coords = np.meshgrid(pts, pts, pts, pts, indexing="ij")
    base = m(*coords)
    max_abs = float(np.abs(base).max())
    sup = max_abs
    for eps in product((0, 1), repeat=4):
        active = [ax for ax, e in enumerate(eps) if e]
        if not active:
            continue
        deriv = _mixed_central_difference(m, coords, active, rel_step)
        weight = np.ones_like(coords[0])
        for ax in active:
            weight = weight * np.abs(coords[ax])
        sup = max(sup, float(np.abs(weight * deriv).max()))
    return MultiplierReport(
        name=symbol, max_abs=max_abs, marcinkiewicz_sup=sup, sample_count=int(base.size)
    )
