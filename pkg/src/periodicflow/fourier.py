"""Fields on the space-time grid and the transform between node values and modes.

The forward transform divides by the total node count, so the (0,0) mode
coefficient is the plain space-time grid mean and the inverse transform is an
unweighted exponential sum.  With that normalization the sum over modes of
|coeffs|^2 equals the grid average of |u|^2.  Nyquist rows are zeroed on every
forward transform so that each surviving mode has an exact conjugate partner
on the lattice.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import fft as _fft

from .domain import Grid
from .errors import NotHermitian

__all__ = [
    "PhysicalField",
    "SpectralField",
    "forward",
    "inverse",
    "time_mean_part",
    "oscillatory_part",
    "spatial_derivative",
    "time_derivative",
    "gradient",
    "divergence",
    "laplacian",
    "hermitian_defect",
    "coeff_norm",
]

_AXES = (-4, -3, -2, -1)
_FLOOR = 1e-300


def _with_component_axis(values: np.ndarray) -> np.ndarray:
    if values.ndim == 4:
        return values[np.newaxis]
    if values.ndim == 5:
        return values
    raise ValueError(f"field arrays must have 4 or 5 axes, got {values.ndim}")


@dataclass(frozen=True)
class PhysicalField:
    """Real samples on the space-time grid, shape (components, M, N3, N2, N1)."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = _with_component_axis(np.asarray(self.values, dtype=np.float64))
        if values.shape[1:] != self.grid.shape:
            raise ValueError(f"values shape {values.shape} does not match grid {self.grid.shape}")
        if values.shape[0] not in (1, 3):
            raise ValueError(f"fields carry 1 or 3 components, got {values.shape[0]}")
        if not np.isfinite(values).all():
            raise ValueError("field values must be finite")
        object.__setattr__(self, "values", values)

    @property
    def components(self) -> int:
        return self.values.shape[0]

    def __add__(self, other: "PhysicalField") -> "PhysicalField":
        _check_same_grid(self, other)
        return PhysicalField(self.grid, self.values + other.values)

    def __sub__(self, other: "PhysicalField") -> "PhysicalField":
        _check_same_grid(self, other)
        return PhysicalField(self.grid, self.values - other.values)

    def __mul__(self, scalar: float) -> "PhysicalField":
        return PhysicalField(self.grid, self.values * float(scalar))

    __rmul__ = __mul__


@dataclass(frozen=True)
class SpectralField:
    """Fourier coefficients on the dual lattice, same storage layout as samples."""

    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = _with_component_axis(np.asarray(self.coeffs, dtype=np.complex128))
        if coeffs.shape[1:] != self.grid.shape:
            raise ValueError(f"coeffs shape {coeffs.shape} does not match grid {self.grid.shape}")
        if coeffs.shape[0] not in (1, 3):
            raise ValueError(f"fields carry 1 or 3 components, got {coeffs.shape[0]}")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def components(self) -> int:
        return self.coeffs.shape[0]

    def __add__(self, other: "SpectralField") -> "SpectralField":
        _check_same_grid(self, other)
        return SpectralField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        _check_same_grid(self, other)
        return SpectralField(self.grid, self.coeffs - other.coeffs)

    def __mul__(self, scalar: complex) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs * scalar)

    __rmul__ = __mul__


def _check_same_grid(a, b) -> None:
    if a.grid != b.grid:
        raise ValueError("fields live on different grids")


def forward(field: PhysicalField) -> SpectralField:
    """Transform node values to mode coefficients; Nyquist rows are zeroed."""
    coeffs = _fft.fftn(field.values, axes=_AXES, workers=-1) / field.grid.size
    coeffs[:, field.grid.nyquist_mask] = 0.0
    return SpectralField(field.grid, coeffs)


def inverse(spec: SpectralField, imag_tol: float = 1e-10) -> PhysicalField:
    """Transform coefficients back to real node values.

    Raises
    ------
    NotHermitian
        If the imaginary residue of the reconstruction exceeds ``imag_tol``
        times the field magnitude, which means the coefficients were not
        conjugate-symmetric.
    """
    u = _fft.ifftn(spec.coeffs, axes=_AXES, workers=-1) * spec.grid.size
    scale = np.abs(u).max(initial=0.0)
    resid = np.abs(u.imag).max(initial=0.0)
    if resid > imag_tol * max(scale, _FLOOR):
        raise NotHermitian(
            f"imaginary residue {resid:.3e} exceeds {imag_tol:.1e} of field magnitude {scale:.3e}"
        )
    return PhysicalField(spec.grid, np.ascontiguousarray(u.real))


def _time_mean_mask(grid: Grid) -> np.ndarray:
    return (grid.k_modes == 0).reshape(grid.n_time, 1, 1, 1)


def time_mean_part(spec: SpectralField) -> SpectralField:
    """Projection onto the k = 0 plane: the time-averaged (steady) part."""
    keep = _time_mean_mask(spec.grid)
    return SpectralField(spec.grid, np.where(keep, spec.coeffs, 0.0))


def oscillatory_part(spec: SpectralField) -> SpectralField:
    """Complementary projection onto k != 0: the zero-time-mean part."""
    keep = _time_mean_mask(spec.grid)
    return SpectralField(spec.grid, np.where(keep, 0.0, spec.coeffs))


def spatial_derivative(spec: SpectralField, axis: int, order: int = 1) -> SpectralField:
    """d^order/dx_axis^order for axis in {1, 2, 3}, applied mode-wise."""
    if axis not in (1, 2, 3):
        raise ValueError(f"axis must be 1, 2 or 3, got {axis}")
    factor = (1j * spec.grid.xi[axis - 1]) ** order
    return SpectralField(spec.grid, spec.coeffs * factor)


def time_derivative(spec: SpectralField) -> SpectralField:
    return SpectralField(spec.grid, spec.coeffs * (1j * spec.grid.omega))


def gradient(spec: SpectralField) -> SpectralField:
    """Spatial gradient of a scalar field, returned as a 3-component field."""
    if spec.components != 1:
        raise ValueError("gradient expects a scalar field")
    c = spec.coeffs[0]
    g = spec.grid
    out = np.stack([c * (1j * g.xi1), c * (1j * g.xi2), c * (1j * g.xi3)])
    return SpectralField(g, out)


def divergence(spec: SpectralField) -> SpectralField:
    """Spatial divergence of a 3-component field, returned as a scalar field."""
    if spec.components != 3:
        raise ValueError("divergence expects a 3-component field")
    c = spec.coeffs
    g = spec.grid
    out = c[0] * (1j * g.xi1) + c[1] * (1j * g.xi2) + c[2] * (1j * g.xi3)
    return SpectralField(g, out[np.newaxis])


def laplacian(spec: SpectralField) -> SpectralField:
    return SpectralField(spec.grid, spec.coeffs * (-spec.grid.xi_sq))


def _negate_modes(coeffs: np.ndarray) -> np.ndarray:
    """Index map m -> -m (mod lattice) on the four frequency axes."""
    out = coeffs
    for ax in _AXES:
        out = np.roll(np.flip(out, axis=ax), 1, axis=ax)
    return out


def hermitian_defect(spec: SpectralField) -> float:
    """Largest absolute deviation from conjugate symmetry coeffs(-m) = conj(coeffs(m))."""
    return float(np.abs(spec.coeffs - np.conj(_negate_modes(spec.coeffs))).max(initial=0.0))


def coeff_norm(spec: SpectralField) -> float:
    """Plain 2-norm of the coefficient array (grid-mean normalized by Parseval)."""
    return float(np.linalg.norm(spec.coeffs.ravel()))
