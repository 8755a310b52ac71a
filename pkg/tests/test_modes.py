import numpy as np
import pytest
from structlog.testing import capture_logs

from src.errors import InvalidArgumentError
from src.spectral.grid import inner_product
from src.spectral.modes import (
    HermiteGaussSpec,
    ModeBasis,
    SuperpositionSpec,
    bloch_projection,
    fit_basis,
    gram_matrix,
    hermite_gauss,
    hermite_polynomial,
    superpose,
)


@pytest.fixture(scope="module")
def basis():
    return ModeBasis.from_nm(1540.7, 0.84)


def test_hermite_polynomials_match_closed_forms():
    x = np.linspace(-2.0, 2.0, 9)
    assert np.allclose(hermite_polynomial(0, x), 1.0)
    assert np.allclose(hermite_polynomial(1, x), 2 * x)
    assert np.allclose(hermite_polynomial(2, x), 4 * x ** 2 - 2)
    assert np.allclose(hermite_polynomial(3, x), 8 * x ** 3 - 12 * x)
    assert np.allclose(hermite_polynomial(4, x), 16 * x ** 4 - 48 * x ** 2 + 12)
    assert np.allclose(hermite_polynomial(5, x), 32 * x ** 5 - 160 * x ** 3 + 120 * x)
    assert np.allclose(hermite_polynomial(6, x), 64 * x ** 6 - 480 * x ** 4 + 720 * x ** 2 - 120)


def test_modes_are_orthonormal(axis, basis):
    gram = gram_matrix(basis.modes(axis, 6))
    assert np.allclose(gram, np.eye(6), atol=1e-9)


@pytest.mark.parametrize("order", [0, 1, 2, 3, 4])
def test_modes_have_definite_parity(axis, basis, order):
    values = basis.mode(order, axis).values
    assert np.allclose(values[::-1], (-1) ** order * values, atol=1e-12 * np.abs(values).max())


def test_from_nm_roundtrips_the_intensity_width(basis):
    assert basis.center_nm == pytest.approx(1540.7, rel=1e-12)
    assert basis.sigma_nm == pytest.approx(0.84, rel=1e-9)


def test_fundamental_modes_of_different_widths_overlap_analytically(axis, basis):
    wide = ModeBasis.from_nm(1540.7, 1.68)
    overlap = inner_product(basis.mode(0, axis), wide.mode(0, axis))
    assert overlap.real == pytest.approx(np.sqrt(4 / 5), rel=1e-6)
    assert abs(overlap.imag) < 1e-12


def test_fit_basis_recovers_fundamental_mode(axis, basis):
    fitted = fit_basis(basis.mode(0, axis))
    assert fitted.width == pytest.approx(basis.width, rel=1e-6)
    assert fitted.center == pytest.approx(basis.center, rel=1e-12)


@pytest.mark.parametrize("order", [1, 2, 3])
def test_fit_basis_recovers_family_of_higher_orders(axis, basis, order):
    mode = basis.mode(order, axis)
    assert fit_basis(mode, order=order).width == pytest.approx(basis.width, rel=1e-6)

    detected = fit_basis(mode, order=None)
    assert detected.width == pytest.approx(basis.width, rel=1e-6)
    assert abs(inner_product(detected.mode(order, axis), mode)) > 1 - 1e-9


def test_fit_basis_rejects_order_out_of_range(axis, basis):
    with pytest.raises(InvalidArgumentError):
        fit_basis(basis.mode(0, axis), order=11)


def test_uncovered_mode_logs_warning(axis):
    wide = ModeBasis.from_nm(1540.7, 1.43)
    with capture_logs() as logs:
        hermite_gauss(wide.spec(10), axis)
    assert any(entry["event"] == "Axis does not cover Hermite-Gauss mode" for entry in logs)


def test_covered_mode_is_silent(axis, basis):
    with capture_logs() as logs:
        hermite_gauss(basis.spec(1), axis)
    assert logs == []


@pytest.mark.parametrize(
    "kwargs",
    [
        {"order": 0, "center": 1.0, "width": 0.0},
        {"order": -1, "center": 1.0, "width": 1.0},
        {"order": 11, "center": 1.0, "width": 1.0},
        {"order": 1.5, "center": 1.0, "width": 1.0},
    ],
)
def test_mode_spec_validation(kwargs):
    with pytest.raises(InvalidArgumentError):
        HermiteGaussSpec(**kwargs)


def test_superposition_coefficients_are_normalized(basis):
    spec = SuperpositionSpec(((3.0, basis.spec(0)), (4.0j, basis.spec(1))))
    assert np.allclose(spec.coefficients, [0.6, 0.8j])
    assert np.allclose(spec.vector(3), [0.6, 0.8j, 0.0])


def test_superposition_rejects_invalid_terms(basis):
    other = ModeBasis.from_nm(1540.7, 1.43)
    with pytest.raises(InvalidArgumentError):
        SuperpositionSpec(())
    with pytest.raises(InvalidArgumentError):
        SuperpositionSpec(((1.0, basis.spec(0)), (1.0, basis.spec(0))))
    with pytest.raises(InvalidArgumentError):
        SuperpositionSpec(((1.0, basis.spec(0)), (1.0, other.spec(1))))
    with pytest.raises(InvalidArgumentError):
        SuperpositionSpec.from_coefficients([0.0, 0.0])


def test_vector_rejects_orders_outside_dimension(basis):
    spec = SuperpositionSpec.from_coefficients([0.0, 0.0, 1.0], basis)
    with pytest.raises(InvalidArgumentError):
        spec.vector(2)


def test_superpose_matches_weighted_sum(axis, basis):
    spec = SuperpositionSpec.from_coefficients([1.0, 1j], basis)
    rendered = superpose(spec, axis)
    expected = (basis.mode(0, axis).values + 1j * basis.mode(1, axis).values) / np.sqrt(2.0)
    assert rendered.norm() == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(rendered.values, expected, atol=1e-12 * np.abs(expected).max())


def test_on_rebinds_coefficients_to_another_family(axis, basis):
    spec = SuperpositionSpec.from_coefficients([0.0, 1.0]).on(basis)
    assert spec.basis == basis
    overlap = inner_product(basis.mode(1, axis), superpose(spec, axis))
    assert abs(overlap) == pytest.approx(1.0, abs=1e-9)


def test_bloch_projection_angles(basis):
    assert np.allclose(bloch_projection(0.0, basis=basis).vector(2), [1.0, 0.0])
    assert np.allclose(bloch_projection(np.pi / 2, basis=basis).vector(2), [0.0, 1.0], atol=1e-15)
    vec = bloch_projection(np.pi / 4, np.pi / 2, basis).vector(2)
    assert np.allclose(vec, [1 / np.sqrt(2), 1j / np.sqrt(2)])
