"""Fixed-point solution of the time-periodic flow problem with drift.

One diagonal resolvent application covers the steady (k = 0) and oscillatory
(k != 0) frequency planes at once, so each iteration is

    u_next = R[ P_H f - P_H (u . grad) u ]

with P_H the divergence-free projection and R the inverse of
d/dt - Lap - lam d/dx1 on mean-free fields.  The pressure is recovered
afterwards from the gradient part of f - (u . grad) u.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .domain import Grid, Params
from .errors import Diverging, NoConvergence, NotAGradient
from .fourier import (
    PhysicalField,
    SpectralField,
    forward,
    gradient,
    oscillatory_part,
    time_mean_part,
)
from .multipliers import helmholtz, oseen_inverse
from .nonlinear import convective

__all__ = [
    "SolverConfig",
    "Solution",
    "split",
    "picard_step",
    "solve",
    "recover_pressure",
    "pde_residual",
]

_FLOOR = 1e-300
_GUARD_STREAK = 3
_BLOWUP = 1e120


@dataclass(frozen=True)
class SolverConfig:
    """Iteration controls.

    ``initial_guess`` of None starts from rest; a field starts from there.
    The divergence guard aborts once the ratio of consecutive update norms
    exceeds ``divergence_guard`` for three steps in a row.
    """

    tol: float = 1e-10
    max_iter: int = 200
    divergence_guard: float = 10.0
    initial_guess: SpectralField | PhysicalField | None = None

    def __post_init__(self):
        if not (math.isfinite(self.tol) and self.tol > 0.0):
            raise ValueError(f"tol must be positive, got {self.tol!r}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be at least 1, got {self.max_iter!r}")
        if not (math.isfinite(self.divergence_guard) and self.divergence_guard > 1.0):
            raise ValueError(f"divergence_guard must exceed 1, got {self.divergence_guard!r}")


@dataclass(frozen=True)
class Solution:
    """Converged steady part, oscillatory part, pressure and iteration record."""

    v: SpectralField
    w: SpectralField
    p: SpectralField
    iterations: int
    update_history: tuple[float, ...] = field(repr=False)
    contraction_estimate: float

    @property
    def u(self) -> SpectralField:
        return self.v + self.w


def split(u: SpectralField) -> tuple[SpectralField, SpectralField]:
    """Steady / oscillatory decomposition; the parts recombine exactly."""
    return time_mean_part(u), oscillatory_part(u)


def picard_step(u: SpectralField, f_hat: SpectralField, params: Params) -> SpectralField:
    """One fixed-point update: resolvent of the projected forcing minus transport."""
    rhs = helmholtz(f_hat) - helmholtz(convective(u))
    return oseen_inverse(rhs, params)


def _as_spectral(f: SpectralField | PhysicalField) -> SpectralField:
    return f if isinstance(f, SpectralField) else forward(f)


def _update_ratios(history: tuple[float, ...]) -> list[float]:
    return [
        history[i] / history[i - 1]
        for i in range(1, len(history))
        if history[i - 1] > 0.0
    ]


def solve(
    f: SpectralField | PhysicalField,
    params: Params,
    grid: Grid,
    config: SolverConfig = SolverConfig(),
) -> Solution:
    """Iterate to the time-periodic solution driven by ``f``.

    Raises
    ------
    MeanModeNonzero
        If the solenoidal part of the forcing carries a space-time mean.
    Diverging
        If update norms grow persistently or stop being finite.
    NoConvergence
        If ``config.max_iter`` iterations pass without meeting ``config.tol``.
    """
    f_hat = _as_spectral(f)
    if f_hat.grid != grid:
        raise ValueError("forcing grid does not match the requested grid")

    if config.initial_guess is None:
        u = SpectralField(grid, np.zeros((3,) + grid.shape, dtype=np.complex128))
    else:
        u = _as_spectral(config.initial_guess)
        if u.grid != grid:
            raise ValueError("initial guess grid does not match the requested grid")

    history: list[float] = []
    growth_streak = 0
    converged = False
    prev_diff = 0.0
    for _ in range(config.max_iter):
        u_next = picard_step(u, f_hat, params)
        diff = float(np.linalg.norm((u_next.coeffs - u.coeffs).ravel()))
        norm = float(np.linalg.norm(u_next.coeffs.ravel()))
        if not (math.isfinite(diff) and math.isfinite(norm)):
            raise Diverging("iterates stopped being finite", tuple(history))
        delta = diff / max(norm, _FLOOR)
        # The guard watches absolute update norms: during blow-up the relative
        # update saturates near 1 while the absolute one keeps multiplying.
        if prev_diff > 0.0 and diff / prev_diff > config.divergence_guard:
            growth_streak += 1
        else:
            growth_streak = 0
        prev_diff = diff
        history.append(delta)
        u = u_next
        if growth_streak >= _GUARD_STREAK:
            raise Diverging(
                f"update norm grew by more than x{config.divergence_guard:g} for "
                f"{_GUARD_STREAK} consecutive steps; forcing is outside the contraction regime",
                tuple(history),
            )
        if norm > _BLOWUP:
            raise Diverging(
                f"iterate norm passed {_BLOWUP:.0e}; stopping before overflow",
                tuple(history),
            )
        if delta < config.tol:
            converged = True
            break
    if not converged:
        raise NoConvergence(
            f"no convergence to {config.tol:.1e} within {config.max_iter} iterations",
            tuple(history),
        )

    ratios = _update_ratios(tuple(history))
    contraction = max(ratios[-3:]) if ratios else 0.0
    p = recover_pressure(u, f_hat)
    v, w = split(u)
    return Solution(
        v=v,
        w=w,
        p=p,
        iterations=len(history),
        update_history=tuple(history),
        contraction_estimate=contraction,
    )


def recover_pressure(
    u: SpectralField, f_hat: SpectralField, gradient_tol: float = 1e-9
) -> SpectralField:
    """Pressure from the gradient part of f - (u . grad) u.

    The complementary projection I - P_H maps every mode onto the span of
    i xi, so g = (I - P_H)(f - transport) is a spectral gradient and
    p_hat = -i xi . g_hat / |xi|^2 inverts it; the spatial-mean plane of the
    pressure is fixed to zero at every temporal frequency.

    Raises
    ------
    NotAGradient
        If the transverse residue of g exceeds ``gradient_tol`` relative to
        the magnitude of f - transport (numerical corruption; cannot happen
        for finite input).  The residue is measured against the full data,
        not against g: for solenoidal data g itself is rounding noise.
    """
    g_grid = u.grid
    rhs = f_hat - convective(u)
    grad_part = rhs - helmholtz(rhs)
    c = grad_part.coeffs
    dot = c[0] * g_grid.xi1 + c[1] * g_grid.xi2 + c[2] * g_grid.xi3
    safe = np.where(g_grid.xi_sq > 0.0, g_grid.xi_sq, 1.0)
    p_hat = np.where(g_grid.xi_sq > 0.0, -1j * dot / safe, 0.0)

    p_field = SpectralField(g_grid, p_hat[np.newaxis])
    regenerated = gradient(p_field)
    scale = float(np.abs(rhs.coeffs).max(initial=0.0))
    residue = float(np.abs(regenerated.coeffs - c).max(initial=0.0))
    if residue > gradient_tol * max(scale, _FLOOR):
        raise NotAGradient(
            f"transverse residue {residue:.3e} exceeds {gradient_tol:.1e} "
            f"of data scale {scale:.3e}"
        )
    return p_field


def pde_residual(
    u: SpectralField,
    p: SpectralField,
    f: SpectralField | PhysicalField,
    params: Params,
) -> float:
    """Relative space-time 2-norm of the momentum equation residual.

    All derivative terms are spectral and the transport term is the solver's
    dealiased convective form, so a converged solution certifies the discrete
    system it actually solved.  The residual is normalized by the largest
    term magnitude; identically zero data gives zero.
    """
    grid = u.grid
    f_hat = _as_spectral(f)
    terms = [
        u.coeffs * (1j * grid.omega),
        u.coeffs * grid.xi_sq,
        -params.lam * (1j * grid.xi1) * u.coeffs,
        gradient(p).coeffs,
        convective(u).coeffs,
        -f_hat.coeffs,
    ]
    residual = sum(terms)
    denom = max(float(np.linalg.norm(t.ravel())) for t in terms)
    return float(np.linalg.norm(residual.ravel())) / max(denom, _FLOOR)
