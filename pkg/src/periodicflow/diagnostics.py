"""Verification diagnostics: norms, energy bookkeeping, decay and identity checks.

Space-time integrals use the uniform-grid rectangle rule, which is spectrally
accurate for smooth periodic fields.  The underlying measure is dx dt/T, so
the total measure of the domain equals the box volume and time averages carry
no extra factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domain import Grid, Params
from .fourier import (
    PhysicalField,
    SpectralField,
    forward,
    gradient,
    inverse,
    oscillatory_part,
    time_mean_part,
)
from .multipliers import (
    _regularity_factor,
    half_time_derivative,
    regularity_multiplier_bound,
)
from .nonlinear import dealiased_tensor_product

__all__ = [
    "OseenTerms",
    "NormReport",
    "EnergyReport",
    "SpectrumTable",
    "RegularityReport",
    "norms",
    "energy_balance",
    "cross_orthogonality",
    "energy_inequality_check",
    "spectrum_decay",
    "regularity_bootstrap_check",
]

_FLOOR = 1e-300


def _as_spectral(f: SpectralField | PhysicalField) -> SpectralField:
    return f if isinstance(f, SpectralField) else forward(f)


def _as_physical(f: SpectralField | PhysicalField) -> PhysicalField:
    return f if isinstance(f, PhysicalField) else inverse(f)


def _magnitude(values: np.ndarray) -> np.ndarray:
    """Euclidean magnitude over the leading component axis."""
    if values.shape[0] == 1:
        return np.abs(values[0])
    return np.sqrt(np.einsum("c...,c...->...", values, values))


def _lq_spacetime(mag: np.ndarray, q: float, grid: Grid) -> float:
    return float((grid.volume * np.mean(mag**q)) ** (1.0 / q))


def _lq_spatial(mag: np.ndarray, q: float, grid: Grid) -> float:
    """Norm over the box alone; ``mag`` has shape (N3, N2, N1)."""
    return float((grid.volume * np.mean(mag**q)) ** (1.0 / q))


def _derivative_coeffs(spec: SpectralField, alpha: tuple[int, int, int]) -> np.ndarray:
    g = spec.grid
    factor = (1j * g.xi1) ** alpha[0] * (1j * g.xi2) ** alpha[1] * (1j * g.xi3) ** alpha[2]
    return spec.coeffs * factor


_MULTI_INDICES = (
    (0, 0, 0),
    (1, 0, 0),
    (0, 1, 0),
    (0, 0, 1),
    (2, 0, 0),
    (0, 2, 0),
    (0, 0, 2),
    (1, 1, 0),
    (1, 0, 1),
    (0, 1, 1),
)


@dataclass(frozen=True)
class OseenTerms:
    """The four weighted contributions of the drift-adapted steady norm."""

    amplitude: float
    gradient: float
    drift: float
    hessian: float

    @property
    def total(self) -> float:
        return self.amplitude + self.gradient + self.drift + self.hessian


@dataclass(frozen=True)
class NormReport:
    """Requested norm families, keyed by exponent.

    ``lq`` holds space-time Lebesgue norms of the full velocity, ``w21q`` the
    anisotropic Sobolev norm (two spatial orders, one temporal) of the
    oscillatory part, ``xoseen`` the weighted steady-part norms and ``xpres``
    the mixed time-space pressure norms keyed by (q, r).
    """

    lam: float
    driftless: bool
    lq: dict[float, float]
    w21q: dict[float, float]
    xoseen: dict[float, OseenTerms]
    xpres: dict[tuple[float, float], float]

    @staticmethod
    def csv_header() -> str:
        return (
            "q,r,lambda,driftless,lq_u,w21q_w,"
            "oseen_amplitude,oseen_gradient,oseen_drift,oseen_hessian,oseen_total,xpres_p"
        )

    def csv_rows(self) -> list[str]:
        pairs: list[tuple[float, float, float]]
        if self.xpres:
            pairs = [(q, r, value) for (q, r), value in sorted(self.xpres.items())]
        else:
            pairs = [(q, float("nan"), float("nan")) for q in sorted(self.lq)]
        rows = []
        for q, r, xp in pairs:
            terms = self.xoseen[q]
            rows.append(
                f"{q:g},{r:g},{self.lam:g},{self.driftless},"
                f"{self.lq[q]:.12e},{self.w21q[q]:.12e},"
                f"{terms.amplitude:.12e},{terms.gradient:.12e},{terms.drift:.12e},"
                f"{terms.hessian:.12e},{terms.total:.12e},{xp:.12e}"
            )
        return rows


def _w21q(w: SpectralField, q: float, grid: Grid) -> float:
    total = 0.0
    for alpha in _MULTI_INDICES:
        deriv = inverse(SpectralField(grid, _derivative_coeffs(w, alpha))).values
        total += _lq_spacetime(_magnitude(deriv), q, grid) ** q
    dt = inverse(SpectralField(grid, w.coeffs * (1j * grid.omega))).values
    total += _lq_spacetime(_magnitude(dt), q, grid) ** q
    return float(total ** (1.0 / q))


def _xoseen(v: SpectralField, q: float, lam: float, grid: Grid) -> OseenTerms:
    if not 1.0 < q < 2.0:
        raise ValueError(f"steady-part norm exponent q must lie in the open interval (1, 2), got {q}")
    v_spatial = inverse(v).values[:, 0]
    grads = [
        inverse(SpectralField(grid, _derivative_coeffs(v, a))).values[:, 0]
        for a in ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    ]
    grad_stack = np.concatenate(grads, axis=0)
    hess = [
        inverse(SpectralField(grid, _derivative_coeffs(v, tuple(np.add(a, b))))).values[:, 0]
        for a in ((1, 0, 0), (0, 1, 0), (0, 0, 1))
        for b in ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    ]
    hess_stack = np.concatenate(hess, axis=0)
    abs_lam = abs(lam)
    return OseenTerms(
        amplitude=abs_lam**0.5 * _lq_spatial(_magnitude(v_spatial), 2.0 * q / (2.0 - q), grid),
        gradient=abs_lam**0.25 * _lq_spatial(_magnitude(grad_stack), 4.0 / (4.0 - q), grid),
        drift=abs_lam * _lq_spatial(_magnitude(grads[0]), q, grid),
        hessian=_lq_spatial(_magnitude(hess_stack), q, grid),
    )


def _xpres(p: SpectralField, q: float, r: float, grid: Grid) -> float:
    if not 1.0 < q < 3.0:
        raise ValueError(f"pressure norm exponent q must lie in the open interval (1, 3), got {q}")
    if not (1.0 < r and math.isfinite(r)):
        raise ValueError(f"pressure gradient exponent r must lie in (1, inf), got {r}")
    p_phys = inverse(p).values
    gp_phys = inverse(gradient(p)).values
    s = 3.0 * q / (3.0 - q)
    dt_weight = grid.period / grid.n_time
    inner = 0.0
    for it in range(grid.n_time):
        slice_p = _lq_spatial(_magnitude(p_phys[:, it]), s, grid)
        slice_gp = _lq_spatial(_magnitude(gp_phys[:, it]), q, grid)
        inner += dt_weight * (slice_p**q + slice_gp**q)
    return float(inner ** (1.0 / q)) + _lq_spacetime(_magnitude(gp_phys), r, grid)


def norms(
    u: SpectralField | PhysicalField,
    params: Params,
    p: SpectralField | PhysicalField | None = None,
    q_list: tuple[float, ...] = (1.2,),
    r_list: tuple[float, ...] = (6.0,),
) -> NormReport:
    """Evaluate every norm family for each requested exponent.

    Each q must lie in (1, 2) because the steady-part family is evaluated for
    all of them; each r must lie in (1, inf).  Without a pressure the xpres
    entries are left empty.
    """
    u_hat = _as_spectral(u)
    grid = u_hat.grid
    v, w = time_mean_part(u_hat), oscillatory_part(u_hat)
    u_phys = inverse(u_hat).values

    lq: dict[float, float] = {}
    w21q: dict[float, float] = {}
    xoseen: dict[float, OseenTerms] = {}
    for q in q_list:
        if not 1.0 < q < 2.0:
            raise ValueError(f"norm exponent q must lie in the open interval (1, 2), got {q}")
        lq[q] = _lq_spacetime(_magnitude(u_phys), q, grid)
        w21q[q] = _w21q(w, q, grid)
        xoseen[q] = _xoseen(v, q, params.lam, grid)

    xpres: dict[tuple[float, float], float] = {}
    if p is not None:
        p_hat = _as_spectral(p)
        for q in q_list:
            for r in r_list:
                xpres[(q, r)] = _xpres(p_hat, q, r, grid)

    return NormReport(
        lam=params.lam,
        driftless=params.driftless,
        lq=lq,
        w21q=w21q,
        xoseen=xoseen,
        xpres=xpres,
    )


@dataclass(frozen=True)
class EnergyReport:
    """Dissipation against forcing power over one period."""

    dissipation: float
    power_in: float
    relative_gap: float

    @staticmethod
    def csv_header() -> str:
        return "dissipation,power_in,relative_gap"

    def csv_rows(self) -> list[str]:
        return [f"{self.dissipation:.12e},{self.power_in:.12e},{self.relative_gap:.12e}"]


def energy_balance(
    u: SpectralField | PhysicalField, f: SpectralField | PhysicalField
) -> EnergyReport:
    """Compare the gradient energy of u with the power injected by f.

    For a solution of the momentum equation the two agree; time derivative,
    drift and transport inject nothing, and the pressure never acts on a
    divergence-free field.
    """
    u_hat = _as_spectral(u)
    f_hat = _as_spectral(f)
    grid = u_hat.grid
    dissipation = float(grid.volume * np.sum(grid.xi_sq * np.sum(np.abs(u_hat.coeffs) ** 2, axis=0)))
    power = float(grid.volume * np.real(np.vdot(f_hat.coeffs.ravel(), u_hat.coeffs.ravel())))
    gap = abs(dissipation - power) / max(abs(dissipation), abs(power), _FLOOR)
    return EnergyReport(dissipation=dissipation, power_in=power, relative_gap=gap)


def cross_orthogonality(v: SpectralField, w: SpectralField) -> float:
    """Gradient inner product of the steady and oscillatory parts.

    Zero whenever the parts keep their disjoint frequency supports; a leak of
    k = 0 content into w shows up directly in the returned value.
    """
    if v.grid != w.grid:
        raise ValueError("fields live on different grids")
    grid = v.grid
    prod = np.real(np.einsum("c...,c...->...", np.conj(v.coeffs), w.coeffs))
    return float(grid.volume * np.sum(grid.xi_sq * prod))


def energy_inequality_check(
    u: SpectralField | PhysicalField,
    f: SpectralField | PhysicalField,
    tol: float = 1e-9,
) -> tuple[float, float, bool]:
    """Dissipation bounded by forcing power, with tolerance scaled to the data.

    Returns (lhs, rhs, holds) with lhs the dissipation and rhs the power.
    """
    report = energy_balance(u, f)
    scale = max(abs(report.dissipation), abs(report.power_in), _FLOOR)
    holds = report.dissipation <= report.power_in + tol * scale
    return report.dissipation, report.power_in, holds


@dataclass(frozen=True)
class SpectrumTable:
    """Shell-wise coefficient magnitudes over the integer dual lattice."""

    shells: np.ndarray
    counts: np.ndarray
    max_abs: np.ndarray
    mean_abs: np.ndarray
    monotone_from_peak: bool

    @staticmethod
    def csv_header() -> str:
        return "shell,max_abs"

    def csv_rows(self) -> list[str]:
        return [f"{int(s)},{m:.12e}" for s, m in zip(self.shells, self.max_abs)]

    @property
    def top_shell_max(self) -> float:
        return float(self.max_abs[-1])

    @property
    def peak(self) -> float:
        return float(self.max_abs.max(initial=0.0))


def spectrum_decay(spec: SpectralField) -> SpectrumTable:
    """Bin coefficient magnitudes by integer shells of sqrt(|n|^2 + k^2).

    Nyquist rows are excluded (their coefficients are pinned to zero).  The
    monotone flag records whether shell maxima never increase beyond the
    peak shell; maxima within rounding of zero (1e-14 of the peak) count as
    flat, so transform noise in empty shells does not flip the flag.
    """
    grid = spec.grid
    mag = _magnitude(np.abs(spec.coeffs))
    keep = ~grid.nyquist_mask
    radii = np.rint(np.sqrt(grid.mode_radius_sq[keep].astype(np.float64))).astype(np.int64)
    values = mag[keep]
    n_shells = int(radii.max()) + 1
    counts = np.bincount(radii, minlength=n_shells)
    sums = np.bincount(radii, weights=values, minlength=n_shells)
    maxima = np.zeros(n_shells)
    np.maximum.at(maxima, radii, values)
    means = sums / np.maximum(counts, 1)
    peak_idx = int(np.argmax(maxima))
    floor = maxima[peak_idx] * 1e-14
    tail = np.maximum(maxima[peak_idx:], floor)
    monotone = bool(np.all(tail[1:] <= tail[:-1] * (1.0 + 1e-12) + 1e-300))
    return SpectrumTable(
        shells=np.arange(n_shells),
        counts=counts,
        max_abs=maxima,
        mean_abs=means,
        monotone_from_peak=monotone,
    )


@dataclass(frozen=True)
class RegularityReport:
    """Relative mismatches of the two diagonal bootstrap identities."""

    mixed_derivative_mismatch: float
    factorization_mismatch: float
    multiplier_sup: float
    branch: str


def _rel_mismatch(lhs: np.ndarray, rhs: np.ndarray) -> float:
    scale = max(
        float(np.linalg.norm(lhs.ravel())), float(np.linalg.norm(rhs.ravel())), _FLOOR
    )
    return float(np.linalg.norm((lhs - rhs).ravel())) / scale


def regularity_bootstrap_check(sol, branch: str = "principal") -> RegularityReport:
    """Verify the multiplier identities that trade half time derivatives for space.

    Identity one: for the oscillatory part w, the mixed derivative
    d/dt d/dx_j w equals the regularity multiplier applied to
    (d/dt - Lap) of the half time derivative of w.

    Identity two: the half time derivative of the mean-free transport term
    Div(w (x) w) equals the summed multipliers applied to (d/dt - Lap) of the
    dealiased tensor w_i w_l.  Both identities are diagonal, so with the
    principal branch they hold to rounding; a wrong branch breaks them at
    order one on negative frequencies.
    """
    w: SpectralField = sol.w
    grid = w.grid
    heat_symbol = grid.xi_sq + 1j * grid.omega

    half_w = half_time_derivative(w, branch=branch).coeffs
    lhs_mixed = []
    rhs_mixed = []
    for axis in (1, 2, 3):
        lhs_mixed.append(w.coeffs * (1j * grid.omega) * (1j * grid.xi[axis - 1]))
        rhs_mixed.append(_regularity_factor(grid, axis) * (heat_symbol * half_w))
    mismatch_mixed = _rel_mismatch(np.stack(lhs_mixed), np.stack(rhs_mixed))

    tensor = dealiased_tensor_product(w)
    ixi = (1j * grid.xi1, 1j * grid.xi2, 1j * grid.xi3)
    transport = np.stack([sum(ixi[l] * tensor[i, l] for l in range(3)) for i in range(3)])
    osc = oscillatory_part(SpectralField(grid, transport))
    lhs_fact = half_time_derivative(osc, branch=branch).coeffs
    rhs_fact = np.stack(
        [
            sum(
                _regularity_factor(grid, l + 1) * (heat_symbol * tensor[i, l])
                for l in range(3)
            )
            for i in range(3)
        ]
    )
    mismatch_fact = _rel_mismatch(lhs_fact, rhs_fact)

    params_unused = Params(lam=0.0, period=grid.period)
    sup = max(regularity_multiplier_bound(grid, axis, params_unused) for axis in (1, 2, 3))
    return RegularityReport(
        mixed_derivative_mismatch=mismatch_mixed,
        factorization_mismatch=mismatch_fact,
        multiplier_sup=sup,
        branch=branch,
    )
