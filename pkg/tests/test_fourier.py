import numpy as np
import pytest

from periodicflow import (
    Grid,
    NotHermitian,
    PhysicalField,
    SpectralField,
    coeff_norm,
    divergence,
    forward,
    gradient,
    hermitian_defect,
    inverse,
    laplacian,
    oscillatory_part,
    spatial_derivative,
    time_derivative,
    time_mean_part,
)

TWO_PI = 2.0 * np.pi


def random_field(grid, seed, components=3):
    rng = np.random.default_rng(seed)
    return PhysicalField(grid, rng.standard_normal((components,) + grid.shape))


def representable(field):
    """Project onto the class the transform targets (Nyquist rows dropped)."""
    return inverse(forward(field))


def test_constant_field_transforms_to_mean_mode(grid8):
    c = 2.75
    u = PhysicalField(grid8, np.full((1,) + grid8.shape, c))
    spec = forward(u)
    assert spec.coeffs[0, 0, 0, 0, 0] == pytest.approx(c, abs=1e-13)
    rest = spec.coeffs.copy()
    rest[0, 0, 0, 0, 0] = 0.0
    assert np.abs(rest).max() <= 1e-13 * c


def test_cosine_transforms_to_half_amplitude(grid8):
    x1 = grid8.coordinate_fields()[0]
    u = PhysicalField(grid8, np.cos(x1)[np.newaxis])
    spec = forward(u)
    # cos(x1) = (e^{i x1} + e^{-i x1}) / 2 puts 1/2 at n1 = +/-1, k = 0
    assert spec.coeffs[0, 0, 0, 0, 1] == pytest.approx(0.5, abs=1e-14)
    assert spec.coeffs[0, 0, 0, 0, -1] == pytest.approx(0.5, abs=1e-14)
    rest = spec.coeffs.copy()
    rest[0, 0, 0, 0, 1] = 0.0
    rest[0, 0, 0, 0, -1] = 0.0
    assert np.abs(rest).max() <= 1e-14


def test_round_trip_on_representable_fields(grid16):
    u = representable(random_field(grid16, seed=11))
    back = inverse(forward(u))
    err = np.abs(back.values - u.values).max() / np.abs(u.values).max()
    assert err <= 1e-12


def test_forward_zeroes_nyquist_rows(grid8):
    u = random_field(grid8, seed=3)
    spec = forward(u)
    assert np.abs(spec.coeffs[:, grid8.nyquist_mask]).max() == 0.0


def test_forward_output_is_hermitian(grid8):
    spec = forward(random_field(grid8, seed=5))
    assert hermitian_defect(spec) <= 1e-13


def test_inverse_flags_broken_symmetry(grid8):
    coeffs = np.zeros((1,) + grid8.shape, dtype=np.complex128)
    coeffs[0, 1, 0, 0, 1] = 1.0  # no conjugate partner
    with pytest.raises(NotHermitian):
        inverse(SpectralField(grid8, coeffs))


def test_zero_coefficients_invert_to_zero(grid8):
    spec = SpectralField(grid8, np.zeros((3,) + grid8.shape, dtype=np.complex128))
    assert np.abs(inverse(spec).values).max() == 0.0


def test_parseval(grid8):
    u = representable(random_field(grid8, seed=7))
    spec = forward(u)
    lhs = np.sum(np.abs(spec.coeffs) ** 2)
    # One grid-mean per component, summed over components.
    rhs = np.sum(np.mean(u.values**2, axis=(1, 2, 3, 4)))
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_linearity(grid8):
    u = random_field(grid8, seed=1)
    v = random_field(grid8, seed=2)
    a, b = 1.7, -0.3
    lhs = forward(PhysicalField(grid8, a * u.values + b * v.values))
    rhs = a * forward(u) + b * forward(v)
    assert np.abs(lhs.coeffs - rhs.coeffs).max() <= 1e-13 * np.abs(rhs.coeffs).max()


def test_projection_algebra_is_exact(grid8):
    spec = forward(random_field(grid8, seed=9))
    p = time_mean_part(spec)
    q = oscillatory_part(spec)
    assert np.array_equal(time_mean_part(p).coeffs, p.coeffs)
    assert np.array_equal(oscillatory_part(q).coeffs, q.coeffs)
    assert np.abs(oscillatory_part(p).coeffs).max() == 0.0
    assert np.abs(time_mean_part(q).coeffs).max() == 0.0
    assert np.array_equal(p.coeffs + q.coeffs, spec.coeffs)


def test_projection_on_time_independent_field(grid8):
    rng = np.random.default_rng(13)
    slice_values = rng.standard_normal((3, 1) + grid8.shape[1:])
    u = PhysicalField(grid8, np.broadcast_to(slice_values, (3,) + grid8.shape).copy())
    spec = forward(u)
    assert np.abs(oscillatory_part(spec).coeffs).max() <= 1e-15
    assert np.abs(time_mean_part(spec).coeffs - spec.coeffs).max() <= 1e-15


def test_projection_kills_pure_oscillation(grid8):
    t = grid8.coordinate_fields()[3]
    u = PhysicalField(grid8, np.cos(t)[np.newaxis])
    spec = forward(u)
    assert np.abs(time_mean_part(spec).coeffs).max() <= 1e-15


def test_projection_images_are_orthogonal(grid8):
    u = forward(random_field(grid8, seed=21))
    v = forward(random_field(grid8, seed=22))
    pu = time_mean_part(u).coeffs
    qv = oscillatory_part(v).coeffs
    ip = np.vdot(pu.ravel(), qv.ravel())
    scale = np.linalg.norm(pu.ravel()) * np.linalg.norm(qv.ravel())
    assert abs(ip) <= 1e-13 * max(scale, 1e-300)


def test_spatial_derivative_of_sine(grid8):
    x1 = grid8.coordinate_fields()[0]
    u = forward(PhysicalField(grid8, np.sin(x1)[np.newaxis]))
    du = inverse(spatial_derivative(u, axis=1)).values
    assert np.allclose(du[0], np.cos(x1), atol=1e-13)
    d2u = inverse(spatial_derivative(u, axis=1, order=2)).values
    assert np.allclose(d2u[0], -np.sin(x1), atol=1e-13)


def test_time_derivative_of_cosine(grid8):
    t = grid8.coordinate_fields()[3]
    u = forward(PhysicalField(grid8, np.cos(t)[np.newaxis]))
    du = inverse(time_derivative(u)).values
    assert np.allclose(du[0], -np.sin(t), atol=1e-13)


def test_divergence_of_gradient_is_laplacian(grid8):
    phi = forward(random_field(grid8, seed=31, components=1))
    lhs = divergence(gradient(phi)).coeffs
    rhs = laplacian(phi).coeffs
    assert np.abs(lhs - rhs).max() <= 1e-12 * max(np.abs(rhs).max(), 1e-300)


def test_gradient_and_divergence_reject_wrong_components(grid8):
    vec = forward(random_field(grid8, seed=33))
    scal = forward(random_field(grid8, seed=34, components=1))
    with pytest.raises(ValueError):
        gradient(vec)
    with pytest.raises(ValueError):
        divergence(scal)
    with pytest.raises(ValueError):
        spatial_derivative(vec, axis=0)


def test_field_validation(grid8):
    with pytest.raises(ValueError):
        PhysicalField(grid8, np.zeros((2,) + grid8.shape))
    with pytest.raises(ValueError):
        PhysicalField(grid8, np.full((1,) + grid8.shape, np.nan))
    with pytest.raises(ValueError):
        PhysicalField(grid8, np.zeros((1, 3, 3, 3)))
    small = Grid(box=(1, 1, 1), n_space=(4, 4, 4), n_time=4, period=1.0)
    u = PhysicalField(small, np.zeros((1,) + small.shape))
    v = random_field(grid8, seed=40)
    with pytest.raises(ValueError):
        _ = v + PhysicalField(small, np.zeros((3,) + small.shape))
    del u


def test_coeff_norm_matches_parseval(grid8):
    u = representable(random_field(grid8, seed=41))
    spec = forward(u)
    expected = np.sqrt(np.sum(np.mean(u.values**2, axis=(1, 2, 3, 4))))
    assert coeff_norm(spec) == pytest.approx(expected, rel=1e-12)
