import numpy as np
import pytest
from structlog.testing import capture_logs

from src.errors import InvalidArgumentError
from src.source.pdc import (
    SINC_HALF_MAX,
    PhasematchSpec,
    PumpSpec,
    build_jsa,
    gaussian_mode_width,
    gaussian_schmidt_coefficients,
    overlap_with_basis,
    schmidt_decompose,
    schmidt_number,
)
from src.source.presets import CENTER_NM, state_a_jsa, state_a_sources, state_b_jsa, state_b_sources
from src.spectral.grid import JointAmplitude, bandwidth_to_omega, inner_product, make_axis
from src.spectral.modes import ModeBasis, fit_basis


@pytest.fixture(scope="module")
def state_a_specs(state_a):
    return state_a_sources(state_a.axis_s)


def test_jsa_is_normalized(state_a, state_b, bell):
    for jsa in (state_a, state_b, bell):
        assert jsa.norm() == pytest.approx(1.0, abs=1e-12)


def test_schmidt_coefficients_are_a_distribution(schmidt_a, schmidt_b):
    for schmidt in (schmidt_a, schmidt_b):
        lam = schmidt.coefficients
        assert np.all(lam >= 0)
        assert np.all(np.diff(lam) <= 1e-15)
        assert lam.sum() == pytest.approx(1.0, abs=1e-9)


def test_gaussian_state_matches_analytic_coefficients(schmidt_a, state_a_specs):
    pump, pm = state_a_specs
    expected = gaussian_schmidt_coefficients(pump.width, pm.pm_width, 10)
    assert np.allclose(schmidt_a.coefficients[:10], expected, atol=1e-4)


def test_gaussian_state_modes_are_hermite_gauss(schmidt_a, state_a_specs):
    pump, pm = state_a_specs
    axis = schmidt_a.axis_i
    width = gaussian_mode_width(pump.width, pm.pm_width)
    analytic = ModeBasis(center=axis.center, width=width)

    assert fit_basis(schmidt_a.idler_modes[0]).width == pytest.approx(width, rel=1e-4)
    assert np.all(overlap_with_basis(schmidt_a.idler_modes[:4], analytic) > 0.999)
    assert np.all(overlap_with_basis(schmidt_a.signal_modes[:4], analytic) > 0.999)


def test_fundamental_mode_width_is_calibrated(schmidt_a):
    assert fit_basis(schmidt_a.idler_modes[0]).sigma_nm == pytest.approx(0.84, rel=1e-3)


def test_state_a_is_multimode(schmidt_a):
    assert schmidt_number(schmidt_a) > 5.0


def test_matched_gaussian_source_is_separable():
    axis = make_axis(CENTER_NM, 20.0, 256)
    width = np.sqrt(2.0) * bandwidth_to_omega(1.0, CENTER_NM)
    jsa = build_jsa(PumpSpec(center=2 * axis.center, width=width), PhasematchSpec(pm_width=width), axis, axis)
    schmidt = schmidt_decompose(jsa)
    assert schmidt.coefficients[0] > 1 - 1e-9
    assert schmidt_number(schmidt) == pytest.approx(1.0, abs=1e-6)


def test_state_b_is_close_to_a_bell_state(schmidt_b):
    lam = schmidt_b.coefficients
    assert lam[0] == pytest.approx(0.525, abs=0.01)
    assert lam[1] == pytest.approx(0.475, abs=0.01)
    assert lam[0] + lam[1] > 0.999


def test_state_b_pairs_wide_signal_hg1_with_idler_hg0(state_b, schmidt_b):
    axis = state_b.axis_i
    g0, h0 = schmidt_b.signal_modes[0], schmidt_b.idler_modes[0]
    signal_basis = fit_basis(schmidt_b.signal_modes[1])
    idler_basis = fit_basis(h0)

    assert abs(inner_product(idler_basis.mode(0, axis), h0)) > 0.999
    assert abs(inner_product(signal_basis.mode(1, axis), g0)) > 0.999
    assert signal_basis.sigma_nm > idler_basis.sigma_nm


def test_reconstruction_recovers_the_jsa(state_b, schmidt_b):
    rebuilt = schmidt_b.reconstruct()
    scale = np.abs(state_b.values).max()
    assert np.allclose(rebuilt.values, state_b.values, atol=1e-9 * scale)


def test_schmidt_weights_carry_the_jsa_norm(state_b):
    scaled = JointAmplitude(state_b.axis_s, state_b.axis_i, 1.5 * state_b.values)
    with capture_logs() as logs:
        schmidt = schmidt_decompose(scaled)
    assert schmidt.coefficients.sum() == pytest.approx(scaled.norm() ** 2, rel=1e-12)
    assert schmidt.coefficients.sum() == pytest.approx(2.25, rel=1e-9)
    assert any(entry["event"] == "JSA was not normalized before decomposition" for entry in logs)


def test_schmidt_coefficients_converge_with_grid_density(schmidt_b):
    fine = schmidt_decompose(state_b_jsa(n_points=1024), rank=4)
    assert np.allclose(fine.coefficients, schmidt_b.coefficients[:4], atol=1e-6)


def test_modes_are_gauge_fixed(schmidt_a):
    for k in range(5):
        g = schmidt_a.signal_matrix[:, k]
        assert np.max(g.real) == pytest.approx(np.abs(g).max(), rel=1e-9)


def test_truncation_reports_discarded_weight(state_a):
    full = schmidt_decompose(state_a)
    top = schmidt_decompose(state_a, rank=3)
    assert top.rank == 3
    assert top.discarded_weight == pytest.approx(1.0 - full.coefficients[:3].sum(), abs=1e-9)

    by_tolerance = schmidt_decompose(state_a, tolerance=1e-2)
    assert np.all(by_tolerance.coefficients >= 1e-2)
    with pytest.raises(InvalidArgumentError):
        schmidt_decompose(state_a, rank=0)


def test_degenerate_pairs_are_ordered_by_fundamental_overlap(bell, bell_basis):
    schmidt = schmidt_decompose(bell, rank=2)
    axis = bell.axis_s
    assert schmidt.coefficients[0] == pytest.approx(0.5, abs=1e-9)
    assert schmidt.coefficients[1] == pytest.approx(0.5, abs=1e-9)
    assert abs(inner_product(bell_basis.mode(0, axis), schmidt.signal_modes[0])) > 0.999
    assert abs(inner_product(bell_basis.mode(1, axis), schmidt.idler_modes[0])) > 0.999
    assert schmidt_number(schmidt_decompose(bell)) == pytest.approx(2.0, abs=1e-6)


def test_clipped_grid_logs_edge_warning():
    with capture_logs() as logs:
        state_a_jsa(n_points=128, span_nm=8.0)
    assert any(entry["event"] == "JSA is not contained in the grid" for entry in logs)


def test_sinc_phasematching_half_maximum():
    assert np.sinc(SINC_HALF_MAX / np.pi) == pytest.approx(0.5, abs=1e-12)
    pm = PhasematchSpec(pm_width=2.0, profile="sinc")
    assert pm.sinc_length == pytest.approx(SINC_HALF_MAX / 2.0)


def test_sinc_source_is_complex_and_normalized():
    axis = make_axis(CENTER_NM, 32.0, 256)
    pump, pm = state_a_sources(axis, profile="sinc")
    jsa = build_jsa(pump, pm, axis, axis)
    assert jsa.norm() == pytest.approx(1.0, abs=1e-12)
    assert np.abs(jsa.values.imag).max() > 0
    assert schmidt_decompose(jsa).coefficients.sum() == pytest.approx(1.0, abs=1e-9)


def test_asymmetry_reshapes_hg1_pumped_state():
    axis = make_axis(CENTER_NM, 20.0, 256)
    symmetric = schmidt_decompose(build_jsa(*state_b_sources(axis, asymmetry=0.0), axis, axis))
    skewed = schmidt_decompose(build_jsa(*state_b_sources(axis, asymmetry=0.05), axis, axis))
    assert symmetric.coefficients[0] == pytest.approx(0.5, abs=1e-6)
    assert skewed.coefficients[0] > symmetric.coefficients[0] + 0.01


@pytest.mark.parametrize(
    "factory",
    [
        lambda: PumpSpec(center=1.0, width=0.0),
        lambda: PumpSpec(center=1.0, width=1.0, coefficients=(0.0, 0.0)),
        lambda: PhasematchSpec(pm_width=-1.0),
        lambda: PhasematchSpec(pm_width=1.0, profile="lorentzian"),
        lambda: PhasematchSpec(pm_width=1.0, asymmetry=1.0),
        lambda: PhasematchSpec(pm_width=1.0, angle=120.0),
    ],
)
def test_source_spec_validation(factory):
    with pytest.raises(InvalidArgumentError):
        factory()
