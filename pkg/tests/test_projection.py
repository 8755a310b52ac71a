import numpy as np
import pytest

from src.errors import AxisMismatchError, InvalidArgumentError, NullProjectionError
from src.measurement.projection import (
    conditional_spectrum,
    conditional_state,
    marginal_spectrum,
    project,
    resolve_basis,
    rsp_sweep,
    superposition_mode,
)
from src.source.pdc import schmidt_decompose
from src.source.presets import CENTER_NM, state_b_jsa
from src.spectral.grid import ComplexAmplitude, inner_product, make_axis, to_wavelength_spectrum
from src.spectral.modes import ModeBasis, fit_basis


def count_peaks(density, floor=1e-6):
    """Local maxima of a smooth density above `floor` times its peak."""
    support = density > floor * density.max()
    d = np.diff(density)
    rising = d[:-1] > 0
    falling = d[1:] <= 0
    return int(np.sum(rising & falling & support[1:-1]))


def centered_value(spectrum):
    """Density at the sample nearest the center wavelength, relative to the peak."""
    index = np.argmin(np.abs(spectrum.wavelengths_nm - CENTER_NM))
    return spectrum.density[index] / spectrum.density.max()


def test_projecting_onto_schmidt_modes_heralds_partner(state_a, schmidt_a):
    for k in range(4):
        result = project(state_a, schmidt_a.idler_modes[k])
        assert result.probability == pytest.approx(schmidt_a.coefficients[k], rel=1e-9)
        overlap = inner_product(schmidt_a.signal_modes[k], result.conditional_amplitude)
        assert abs(overlap) == pytest.approx(1.0, abs=1e-9)


def test_probabilities_over_a_complete_basis_sum_to_one(state_a, state_b, schmidt_a, schmidt_b):
    for jsa, schmidt in ((state_a, schmidt_a), (state_b, schmidt_b)):
        total = sum(conditional_state(jsa, h).norm() ** 2 for h in schmidt.idler_modes)
        assert total == pytest.approx(1.0, abs=1e-9)


def test_marginal_equals_schmidt_mixture(state_b, schmidt_b):
    marginal = marginal_spectrum(state_b)
    mixture = np.abs(schmidt_b.signal_matrix) ** 2 @ schmidt_b.coefficients
    expected = to_wavelength_spectrum(state_b.axis_s, mixture)
    assert np.allclose(marginal.density, expected.density, rtol=1e-8, atol=1e-10 * expected.density.max())


def test_marginal_rejects_unknown_photon(state_b):
    with pytest.raises(InvalidArgumentError):
        marginal_spectrum(state_b, which="pump")


def test_conditional_state_is_conjugate_linear_in_the_mode(state_b, bell_basis):
    axis = state_b.axis_i
    m0, m1 = bell_basis.mode(0, axis), bell_basis.mode(1, axis)
    a, b = 0.6 + 0.3j, -0.2 + 0.7j
    combined = conditional_state(state_b, m0.scaled(a) + m1.scaled(b))
    expected = (
        np.conj(a) * conditional_state(state_b, m0).values
        + np.conj(b) * conditional_state(state_b, m1).values
    )
    assert np.allclose(combined.values, expected, atol=1e-9 * np.abs(expected).max())


def test_global_phase_of_mode_is_unobservable(state_b, bell_basis):
    mode = bell_basis.mode(0, state_b.axis_i)
    plain = project(state_b, mode)
    rotated = project(state_b, mode.scaled(np.exp(0.73j)))
    assert rotated.probability == pytest.approx(plain.probability, rel=1e-12)
    assert np.allclose(conditional_spectrum(rotated).density, conditional_spectrum(plain).density)


def test_orthogonal_mode_raises_null_projection(bell, bell_basis):
    with pytest.raises(NullProjectionError) as excinfo:
        project(bell, bell_basis.mode(2, bell.axis_i))
    assert excinfo.value.probability < 1e-12


def test_project_requires_unit_norm_mode(state_b, bell_basis):
    mode = bell_basis.mode(0, state_b.axis_i).scaled(2.0)
    with pytest.raises(InvalidArgumentError):
        project(state_b, mode)


def test_project_requires_idler_axis(state_b):
    other = make_axis(CENTER_NM, 12.0, 512)
    mode = ModeBasis.from_nm(CENTER_NM, 1.43).mode(0, other)
    with pytest.raises(AxisMismatchError):
        project(state_b, mode)


def test_bell_state_superposition_is_conjugated(bell, bell_basis):
    thetas = np.linspace(0.0, np.pi, 12, endpoint=False)
    axis = bell.axis_s
    g0, g1 = bell_basis.mode(0, axis).values, bell_basis.mode(1, axis).values
    for result, theta in zip(rsp_sweep(bell, thetas, basis=bell_basis), thetas):
        target = ComplexAmplitude(axis, np.sin(theta) * g0 + np.cos(theta) * g1)
        assert result.probability == pytest.approx(0.5, abs=1e-9)
        assert abs(inner_product(target, result.conditional_amplitude)) > 0.999
        assert result.theta == pytest.approx(theta)
        assert result.projection_mode is not None


def test_bell_state_spectra_follow_conjugation(bell, bell_basis):
    results = rsp_sweep(bell, [0.0, np.pi / 4, np.pi / 2, 3 * np.pi / 4], basis=bell_basis)
    node, quarter, single, three_quarter = (conditional_spectrum(r) for r in results)

    # θ = 0 heralds HG1: two lobes with a node at the center
    assert count_peaks(node.density) == 2
    assert centered_value(node) < 1e-2
    # θ = π/2 heralds HG0: one centered lobe
    assert count_peaks(single.density) == 1
    assert single.mean() == pytest.approx(CENTER_NM, abs=0.05)
    # θ = π/4 and 3π/4 are mirror images in frequency
    a = results[1].conditional_amplitude.intensity()
    b = results[3].conditional_amplitude.intensity()
    assert np.allclose(a, b[::-1], atol=1e-9 * a.max())
    assert (quarter.mean() - CENTER_NM) * (three_quarter.mean() - CENTER_NM) < 0


def test_state_b_superpositions_shift_the_centroid(state_b):
    basis = ModeBasis.from_nm(CENTER_NM, 1.43)
    results = rsp_sweep(state_b, [np.pi / 4, 3 * np.pi / 4], basis=basis)
    shifts = [conditional_spectrum(r).mean() - CENTER_NM for r in results]
    assert abs(shifts[0]) > 0.5
    assert abs(shifts[1]) > 0.5
    assert shifts[0] * shifts[1] < 0


def test_state_a_fundamental_projection_is_calibrated(state_a):
    basis = resolve_basis(state_a)
    spectrum = conditional_spectrum(project(state_a, basis.mode(0, state_a.axis_i)))
    assert spectrum.std() == pytest.approx(0.84, rel=1e-2)
    assert marginal_spectrum(state_a).std() > 1.5 * spectrum.std()


def test_state_a_first_order_projection_has_two_lobes(state_a):
    basis = resolve_basis(state_a)
    spectrum = conditional_spectrum(project(state_a, basis.mode(1, state_a.axis_i)))
    assert count_peaks(spectrum.density) == 2
    assert centered_value(spectrum) < 1e-2


def test_default_basis_on_bell_state_is_its_mode_family(bell, bell_basis):
    fitted = resolve_basis(bell)
    assert fitted.sigma_nm == pytest.approx(bell_basis.sigma_nm, rel=1e-4)
    assert fitted.center_nm == pytest.approx(CENTER_NM, rel=1e-9)

    thetas = [0.0, np.pi / 4, np.pi / 2]
    for result, theta in zip(rsp_sweep(bell, thetas), thetas):
        assert result.probability == pytest.approx(0.5, abs=1e-6)
        expected = bell_basis.mode(0, bell.axis_s).values * np.sin(theta)
        expected = expected + bell_basis.mode(1, bell.axis_s).values * np.cos(theta)
        fidelity = abs(inner_product(ComplexAmplitude(bell.axis_s, expected), result.conditional_amplitude)) ** 2
        assert fidelity > 1 - 1e-6


def test_default_basis_when_leading_idler_mode_is_first_order():
    jsa = state_b_jsa(asymmetry=-0.05)
    schmidt = schmidt_decompose(jsa, rank=2)
    h0, h1 = schmidt.idler_modes
    fitted = resolve_basis(jsa)

    assert abs(inner_product(fitted.mode(1, jsa.axis_i), h0)) > 0.999
    assert abs(inner_product(fitted.mode(0, jsa.axis_i), h1)) > 0.99
    assert fitted.sigma_nm == pytest.approx(fit_basis(h1).sigma_nm, rel=2e-2)


def test_sweep_results_have_unit_norm(state_b, bell_basis):
    thetas = np.linspace(0.0, np.pi, 12, endpoint=False)
    for result in rsp_sweep(state_b, thetas, basis=bell_basis):
        assert result.mode.norm() == pytest.approx(1.0, abs=1e-9)
        assert result.conditional_amplitude.norm() == pytest.approx(1.0, abs=1e-9)
        assert conditional_spectrum(result).area() == pytest.approx(1.0, abs=1e-9)


def test_sweep_is_periodic_in_pi(state_b):
    thetas = [0.3, 0.3 + np.pi]
    first, second = rsp_sweep(state_b, thetas)
    assert second.probability == pytest.approx(first.probability, rel=1e-9)
    assert np.allclose(
        conditional_spectrum(first).density,
        conditional_spectrum(second).density,
        rtol=1e-9,
        atol=1e-12,
    )


def test_sweep_keeps_theta_order(state_b, bell_basis):
    thetas = [1.2, 0.1, 0.7]
    results = rsp_sweep(state_b, thetas, basis=bell_basis)
    assert [r.theta for r in results] == pytest.approx(thetas)


def test_sweep_rejects_empty_angles(state_b):
    with pytest.raises(InvalidArgumentError):
        rsp_sweep(state_b, [])


def test_schmidt_superposition_starts_at_first_mode(state_b, schmidt_b):
    mode, spec = superposition_mode(state_b, 0.0, 0.0, schmidt_b)
    assert spec is None
    assert abs(inner_product(schmidt_b.idler_modes[0], mode)) == pytest.approx(1.0, abs=1e-12)
