"""
Two-photon source model.

Builds the joint spectral amplitude as pump envelope times phasematching,
normalizes it as a single-pair state and Schmidt-decomposes it by SVD.
"""

from dataclasses import dataclass
from functools import cached_property
from math import factorial
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg
import structlog

from ..errors import AxisMismatchError, InvalidArgumentError, NumericalFailureError
from ..spectral.grid import ComplexAmplitude, FrequencyAxis, JointAmplitude, inner_product, normalize
from ..spectral.modes import (
    ModeBasis,
    SuperpositionSpec,
    fit_basis,
    hermite_function,
)

logger = structlog.get_logger()

PROFILES = ("gaussian", "sinc")

# sinc(x) = 1/2 at this x; sets the sinc length from the half-width
SINC_HALF_MAX = 1.895494267033981

EDGE_TOLERANCE = 1e-4
TIE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class PumpSpec:
    """Pump envelope α(ω_s + ω_i): Hermite-Gauss superposition over the sum frequency."""

    center: float
    width: float
    coefficients: Tuple[complex, ...] = (1.0,)

    def __post_init__(self):
        if not self.width > 0:
            raise InvalidArgumentError(f"pump width must be positive, got {self.width}")
        object.__setattr__(self, "coefficients", tuple(complex(c) for c in self.coefficients))
        if not any(self.coefficients):
            raise InvalidArgumentError("pump shape has no nonzero coefficient")

    @property
    def shape(self) -> SuperpositionSpec:
        return SuperpositionSpec.from_coefficients(
            self.coefficients, ModeBasis(self.center, self.width)
        )


@dataclass(frozen=True)
class PhasematchSpec:
    """
    Phenomenological phasematching Φ(ω_s, ω_i).

    `angle` orients the ridge in the (ω_s, ω_i) plane in degrees; 45° with zero
    `asymmetry` is symmetric group-velocity matching. `asymmetry` weights the
    idler and signal detunings by (1+ε) and (1-ε).
    """

    pm_width: float
    profile: str = "gaussian"
    angle: float = 45.0
    asymmetry: float = 0.0

    def __post_init__(self):
        if not self.pm_width > 0:
            raise InvalidArgumentError(f"pm_width must be positive, got {self.pm_width}")
        if self.profile not in PROFILES:
            raise InvalidArgumentError(f"profile must be one of {PROFILES}, got {self.profile!r}")
        if not -90.0 < self.angle <= 90.0:
            raise InvalidArgumentError(f"angle must lie in (-90, 90], got {self.angle}")
        if not -1.0 < self.asymmetry < 1.0:
            raise InvalidArgumentError(f"asymmetry must lie in (-1, 1), got {self.asymmetry}")

    @property
    def sinc_length(self) -> float:
        return SINC_HALF_MAX / self.pm_width


@dataclass(frozen=True, eq=False)
class SchmidtData:
    """
    Schmidt coefficients λ_k (descending) and the paired mode banks.

    `signal_matrix` holds g_k as columns, `idler_matrix` holds h_k as rows, both
    scaled to unit continuum norm. `discarded_weight` is Σλ over dropped modes.
    """

    coefficients: np.ndarray
    signal_matrix: np.ndarray
    idler_matrix: np.ndarray
    axis_s: FrequencyAxis
    axis_i: FrequencyAxis
    discarded_weight: float = 0.0

    @property
    def rank(self) -> int:
        return int(self.coefficients.size)

    @cached_property
    def signal_modes(self) -> List[ComplexAmplitude]:
        return [ComplexAmplitude(self.axis_s, self.signal_matrix[:, k]) for k in range(self.rank)]

    @cached_property
    def idler_modes(self) -> List[ComplexAmplitude]:
        return [ComplexAmplitude(self.axis_i, self.idler_matrix[k, :]) for k in range(self.rank)]

    def reconstruct(self, rank: Optional[int] = None) -> JointAmplitude:
        """Σ √λ_k g_k h_k over the first `rank` pairs (all by default)."""
        r = self.rank if rank is None else min(rank, self.rank)
        weights = np.sqrt(self.coefficients[:r])
        values = (self.signal_matrix[:, :r] * weights) @ self.idler_matrix[:r, :]
        return JointAmplitude(self.axis_s, self.axis_i, values)


def _sum_detuning(axis_s: FrequencyAxis, axis_i: FrequencyAxis, center: float) -> np.ndarray:
    return (
        axis_s.offsets[:, None]
        + axis_i.offsets[None, :]
        + ((axis_s.center - center) + axis_i.center)
    )


def pump_amplitude(pump: PumpSpec, axis_s: FrequencyAxis, axis_i: FrequencyAxis) -> np.ndarray:
    """
    Pump envelope on the joint grid, A[m, n] = α(ω_s[m] + ω_i[n]).

    Each Hermite-Gauss order enters with its analytic normalization so the
    coefficients act as amplitude weights.
    """
    offset = pump.center - (axis_s.center + axis_i.center)
    if abs(offset) > 3 * pump.width:
        logger.warning(
            "Pump center is far from the summed axis centers",
            offset=offset,
            pump_width=pump.width,
        )
    x = _sum_detuning(axis_s, axis_i, pump.center) / pump.width
    values = np.zeros(x.shape, dtype=complex)
    for order, coefficient in enumerate(pump.shape.vector(len(pump.coefficients))):
        if coefficient == 0:
            continue
        scale = 1.0 / np.sqrt(2.0 ** order * factorial(order) * np.sqrt(np.pi))
        values += coefficient * scale * hermite_function(order, x)
    return values


def phasematching_detuning(pm: PhasematchSpec, axis_s: FrequencyAxis, axis_i: FrequencyAxis) -> np.ndarray:
    """Detuning ν perpendicular to the phasematching ridge."""
    angle = np.deg2rad(pm.angle)
    omega_s = axis_s.offsets[:, None]
    omega_i = axis_i.offsets[None, :]
    return np.sqrt(2.0) * (
        (1.0 + pm.asymmetry) * np.cos(angle) * omega_i
        - (1.0 - pm.asymmetry) * np.sin(angle) * omega_s
    )


def phasematching(pm: PhasematchSpec, axis_s: FrequencyAxis, axis_i: FrequencyAxis) -> np.ndarray:
    """
    Phasematching factor on the joint grid.

    gaussian: exp(-ν²/(2·pm_width²)); sinc: sinc(ν·L)·exp(iν·L) with L chosen
    so the main lobe falls to one half at ν = pm_width.
    """
    nu = phasematching_detuning(pm, axis_s, axis_i)
    if pm.profile == "gaussian":
        return np.exp(-0.5 * (nu / pm.pm_width) ** 2).astype(complex)
    phase = nu * pm.sinc_length
    return np.sinc(phase / np.pi) * np.exp(1j * phase)


def _check_edges(values: np.ndarray):
    magnitude = np.abs(values)
    peak = magnitude.max()
    edge = max(
        magnitude[0, :].max(),
        magnitude[-1, :].max(),
        magnitude[:, 0].max(),
        magnitude[:, -1].max(),
    )
    if peak > 0 and edge > EDGE_TOLERANCE * peak:
        logger.warning(
            "JSA is not contained in the grid",
            edge_to_peak=float(edge / peak),
            tolerance=EDGE_TOLERANCE,
        )


def build_jsa(
    pump: PumpSpec, pm: PhasematchSpec, axis_s: FrequencyAxis, axis_i: FrequencyAxis
) -> JointAmplitude:
    """f(ω_s, ω_i) = α(ω_s + ω_i)·Φ(ω_s, ω_i), normalized to unit norm."""
    values = pump_amplitude(pump, axis_s, axis_i) * phasematching(pm, axis_s, axis_i)
    _check_edges(values)
    jsa = normalize(JointAmplitude(axis_s, axis_i, values))
    logger.debug("Built JSA", grid=values.shape, profile=pm.profile, angle=pm.angle)
    return jsa


def bell_state(
    axis_s: FrequencyAxis,
    axis_i: FrequencyAxis,
    basis_s: ModeBasis,
    basis_i: ModeBasis,
    weights: Tuple[float, float] = (0.5, 0.5),
) -> JointAmplitude:
    """
    Temporal-mode Bell state √w0|HG0_s, HG1_i⟩ + √w1|HG1_s, HG0_i⟩.

    Built directly from Hermite-Gauss modes rather than from a source model.
    """
    w0, w1 = weights
    if w0 < 0 or w1 < 0 or w0 + w1 == 0:
        raise InvalidArgumentError(f"weights must be non-negative and not both zero, got {weights}")
    g0, g1 = (basis_s.mode(k, axis_s).values for k in (0, 1))
    h0, h1 = (basis_i.mode(k, axis_i).values for k in (0, 1))
    values = np.sqrt(w0) * np.outer(g0, h1) + np.sqrt(w1) * np.outer(g1, h0)
    return normalize(JointAmplitude(axis_s, axis_i, values))


def _svd(matrix: np.ndarray):
    errors = []
    for driver in ("gesdd", "gesvd"):
        try:
            return scipy.linalg.svd(matrix, full_matrices=False, lapack_driver=driver)
        except (np.linalg.LinAlgError, ValueError) as exc:
            logger.warning("SVD failed, trying next driver", driver=driver, error=str(exc))
            errors.append(exc)
    try:
        condition = float(np.linalg.cond(matrix))
    except (np.linalg.LinAlgError, ValueError):
        condition = float("nan")
    raise NumericalFailureError(
        f"SVD did not converge: {errors[-1]}", grid=matrix.shape, condition_number=condition
    )


def _resolve_ties(coefficients, u, vh, axis_s: FrequencyAxis):
    """
    Fix the mode choice inside clusters of equal λ.

    Any unitary mix of tied pairs is an equally valid decomposition. The
    cluster is rotated so its k-th signal mode is the part of HG_k (fitted to
    the marginal) left after removing HG_0..HG_{k-1}.
    """
    significant = coefficients > TIE_TOLERANCE * coefficients[0]
    n_sig = int(significant.sum())
    if n_sig < 2:
        return u, vh
    marginal = np.sqrt(np.sum(np.abs(u[:, significant]) ** 2 * coefficients[significant], axis=1))
    reference = fit_basis(ComplexAmplitude(axis_s, marginal))

    start = 0
    while start < n_sig:
        stop = start + 1
        while stop < n_sig and coefficients[start] - coefficients[stop] <= TIE_TOLERANCE * coefficients[0]:
            stop += 1
        size = stop - start
        if 1 < size <= reference.max_order + 1:
            refs = np.array([m.values for m in reference.modes(axis_s, size)]).T
            q, _ = np.linalg.qr(u[:, start:stop].conj().T @ refs)
            u[:, start:stop] = u[:, start:stop] @ q
            vh[start:stop, :] = q.conj().T @ vh[start:stop, :]
        elif size > 1:
            logger.warning("Degenerate Schmidt cluster left unresolved", size=size)
        start = stop
    return u, vh


def schmidt_decompose(
    jsa: JointAmplitude, rank: Optional[int] = None, tolerance: Optional[float] = None
) -> SchmidtData:
    """
    Schmidt decomposition of a normalized JSA via SVD.

    Args:
        jsa: Normalized joint spectral amplitude
        rank: Keep at most this many pairs
        tolerance: Drop pairs with λ below this value

    Returns:
        SchmidtData: λ_k descending, g_k gauge-fixed so that its largest
        sample is real positive, h_k carrying the compensating phase
    """
    if rank is not None and rank < 1:
        raise InvalidArgumentError(f"rank must be >= 1, got {rank}")
    scale = np.sqrt(jsa.cell)
    u, s, vh = _svd(jsa.values * scale)
    coefficients = s ** 2
    u, vh = _resolve_ties(coefficients, u, vh, jsa.axis_s)

    peak = np.argmax(np.abs(u), axis=0)
    phases = u[peak, np.arange(u.shape[1])]
    phases = phases / np.where(np.abs(phases) > 0, np.abs(phases), 1.0)
    u = u * phases.conj()
    vh = vh * phases[:, None]

    keep = coefficients.size
    if rank is not None:
        keep = min(keep, rank)
    if tolerance is not None:
        keep = min(keep, int(np.sum(coefficients >= tolerance)))
        keep = max(keep, 1)
    discarded = float(coefficients[keep:].sum())

    total = coefficients.sum()
    if abs(total - 1.0) > 1e-6:
        logger.warning("JSA was not normalized before decomposition", total_weight=float(total))

    return SchmidtData(
        coefficients=coefficients[:keep].copy(),
        signal_matrix=u[:, :keep] / np.sqrt(jsa.axis_s.step),
        idler_matrix=vh[:keep, :] / np.sqrt(jsa.axis_i.step),
        axis_s=jsa.axis_s,
        axis_i=jsa.axis_i,
        discarded_weight=discarded,
    )


def schmidt_number(s: SchmidtData) -> float:
    """K = 1/Σλ_k²."""
    return float(1.0 / np.sum(np.asarray(s.coefficients) ** 2))


def gaussian_schmidt_coefficients(pump_width: float, pm_width: float, n: int) -> np.ndarray:
    """
    Analytic λ_k = (1-μ)μ^k for a Gaussian pump on a 45° Gaussian phasematching.

    √μ = |w_p - w_m|/(w_p + w_m).
    """
    root = abs(pump_width - pm_width) / (pump_width + pm_width)
    mu = root ** 2
    return (1.0 - mu) * mu ** np.arange(n)


def gaussian_mode_width(pump_width: float, pm_width: float) -> float:
    """Hermite-Gauss width parameter of the Schmidt modes of the Gaussian model."""
    return float(np.sqrt(pump_width * pm_width / 2.0))


def overlap_with_basis(modes: List[ComplexAmplitude], basis: ModeBasis) -> np.ndarray:
    """|⟨HG_k|m_k⟩| for each mode against the same-order basis mode."""
    if not modes:
        return np.zeros(0)
    axis = modes[0].axis
    for mode in modes:
        if mode.axis != axis:
            raise AxisMismatchError("modes live on different axes")
    return np.array([abs(inner_product(basis.mode(k, axis), m)) for k, m in enumerate(modes)])
