"""Convective nonlinearity with 2/3-rule dealiasing.

Products are formed pointwise in physical space and transformed back, then
truncated in all four frequency directions.  For inputs supported inside the
kept band the truncated result is the exact convolution, because every
aliased image of a product of kept modes lands outside the kept band.
"""

from __future__ import annotations

import numpy as np

from .errors import NotSolenoidal
from .fourier import (
    PhysicalField,
    SpectralField,
    divergence,
    forward,
    inverse,
    spatial_derivative,
)

__all__ = [
    "dealias",
    "convective",
    "convective_bilinear",
    "divergence_form",
    "dealiased_tensor_product",
    "energy_neutrality_defect",
]

_FLOOR = 1e-300


def dealias(spec: SpectralField) -> SpectralField:
    """Zero every mode with |n_j| > N_j/3 or |k| > M/3 (2/3 rule, idempotent)."""
    keep = spec.grid.dealias_mask
    return SpectralField(spec.grid, np.where(keep, spec.coeffs, 0.0))


def convective_bilinear(u: SpectralField, v: SpectralField) -> SpectralField:
    """Dealiased transport term (u . grad) v in convective form."""
    if u.components != 3 or v.components != 3:
        raise ValueError("convective term expects 3-component fields")
    if u.grid != v.grid:
        raise ValueError("fields live on different grids")
    g = u.grid
    u_phys = inverse(u).values
    out = np.zeros((3,) + g.shape, dtype=np.float64)
    for j in range(3):
        dv_j = inverse(spatial_derivative(v, axis=j + 1)).values
        out += u_phys[j] * dv_j
    return dealias(forward(PhysicalField(g, out)))


def convective(u: SpectralField) -> SpectralField:
    """Dealiased self-transport (u . grad) u."""
    return convective_bilinear(u, u)


def _solenoidal_defect(w: SpectralField) -> float:
    scale = float(np.abs(w.coeffs).max(initial=0.0))
    div_max = float(np.abs(divergence(w).coeffs).max(initial=0.0))
    return div_max / max(scale, _FLOOR)


def dealiased_tensor_product(w: SpectralField) -> np.ndarray:
    """Coefficients of the dealiased outer product w_i w_j, shape (3, 3) + grid.shape."""
    g = w.grid
    w_phys = inverse(w).values
    out = np.empty((3, 3) + g.shape, dtype=np.complex128)
    for i in range(3):
        for j in range(i, 3):
            prod = forward(PhysicalField(g, w_phys[i] * w_phys[j]))
            coeffs = dealias(prod).coeffs[0]
            out[i, j] = coeffs
            out[j, i] = coeffs
    return out


def divergence_form(w: SpectralField, tol: float = 1e-10) -> SpectralField:
    """Transport term written as the divergence of w (x) w.

    Valid only for divergence-free fields; for those it agrees with the
    convective form up to aliasing of unresolved tails.

    Raises
    ------
    NotSolenoidal
        If the spectral divergence of ``w`` exceeds ``tol`` relative to the
        largest coefficient.
    """
    if w.components != 3:
        raise ValueError("divergence form expects a 3-component field")
    defect = _solenoidal_defect(w)
    if defect > tol:
        raise NotSolenoidal(
            f"relative spectral divergence {defect:.3e} exceeds {tol:.1e}; "
            "the divergence form of the transport term requires a solenoidal field"
        )
    g = w.grid
    tensor = dealiased_tensor_product(w)
    ixi = (1j * g.xi1, 1j * g.xi2, 1j * g.xi3)
    out = np.stack([sum(ixi[j] * tensor[i, j] for j in range(3)) for i in range(3)])
    return SpectralField(g, out)


def energy_neutrality_defect(u: SpectralField) -> float:
    """Normalized energy injection of the dealiased transport term.

    Returns |<convective(u), u>| / (|u| |convective(u)| + floor) with plain
    coefficient 2-norms; exactly zero transport orthogonality gives zero.
    """
    conv = convective(u)
    ip = float(np.real(np.vdot(u.coeffs.ravel(), conv.coeffs.ravel())))
    nu = float(np.linalg.norm(u.coeffs.ravel()))
    nc = float(np.linalg.norm(conv.coeffs.ravel()))
    return abs(ip) / (nu * nc + _FLOOR)
