"""
Modal tomography of the idler photon.

The idler's reduced density matrix is expressed in a truncated Hermite-Gauss
basis. `simulate_tomography` emulates measuring it with mode-selective
projections: it draws finite-count success frequencies, inverts them linearly
and projects the estimate back onto the set of density matrices.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
import scipy.linalg
import structlog

from ..errors import InvalidArgumentError, IllPosedInversionError
from ..spectral.grid import JointAmplitude
from ..spectral.modes import ModeBasis, SuperpositionSpec, superpose
from .projection import conditional_state, resolve_basis

logger = structlog.get_logger()

TRUNCATION_WARNING = 0.9
RANK_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class ModalDensityMatrix:
    """
    Unit-trace density matrix in the first `dim` orders of a Hermite-Gauss basis.

    `truncation_weight` is the population outside the basis before
    renormalization; `truncated` flags when the basis captured less than 90%.
    """

    dim: int
    matrix: np.ndarray
    basis: ModeBasis
    truncation_weight: float = 0.0
    truncated: bool = False

    def eigenvalues(self) -> np.ndarray:
        """Descending real eigenvalues."""
        return np.sort(np.linalg.eigvalsh(self.matrix))[::-1]

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def probability(self, vector: np.ndarray) -> float:
        """⟨v|ρ|v⟩ for a coefficient vector in this basis."""
        vector = np.asarray(vector, dtype=complex)
        return float(np.real(vector.conj() @ self.matrix @ vector))

    def trace_distance(self, other: "ModalDensityMatrix") -> float:
        return trace_distance(self.matrix, other.matrix)


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(a - b))))


def reduced_density_matrix(
    jsa: JointAmplitude, basis: Optional[ModeBasis] = None, dim: int = 2
) -> ModalDensityMatrix:
    """
    Trace out the signal and express the idler state in a Hermite-Gauss basis.

    Args:
        jsa: Normalized two-photon state
        basis: Idler Hermite-Gauss family; fitted to the first idler Schmidt
            mode when omitted
        dim: Number of basis orders kept

    Returns:
        ModalDensityMatrix: ρ = M·M† / tr, with M[m, k] = ⟨HG_m|f(ω_s[k], ·)⟩·√Δω_s
    """
    basis = resolve_basis(jsa, basis)
    if not isinstance(basis, ModeBasis):
        raise InvalidArgumentError("reduced density matrix needs a Hermite-Gauss basis")
    if dim < 1 or dim > basis.max_order + 1:
        raise InvalidArgumentError(f"dim must lie in [1, {basis.max_order + 1}], got {dim}")

    modes = np.array([m.values for m in basis.modes(jsa.axis_i, dim)])
    overlaps = modes.conj() @ jsa.values.T * jsa.axis_i.step * np.sqrt(jsa.axis_s.step)
    rho = overlaps @ overlaps.conj().T
    captured = float(np.real(np.trace(rho)))
    if captured <= 0:
        raise InvalidArgumentError("state has no weight in the chosen basis")
    truncation = max(0.0, 1.0 - captured)
    truncated = captured < TRUNCATION_WARNING
    if truncated:
        logger.warning(
            "Hermite-Gauss basis misses a large part of the idler state",
            dim=dim,
            captured_weight=captured,
        )
    return ModalDensityMatrix(
        dim=dim,
        matrix=_hermitize(rho / captured),
        basis=basis,
        truncation_weight=truncation,
        truncated=truncated,
    )


def hermitian_operator_basis(dim: int) -> List[np.ndarray]:
    """
    Orthonormal basis of d×d Hermitian matrices under tr(A·B).

    Diagonal units first, then the symmetric and antisymmetric off-diagonal
    pairs for each m < n.
    """
    operators = []
    for m in range(dim):
        unit = np.zeros((dim, dim), dtype=complex)
        unit[m, m] = 1.0
        operators.append(unit)
    for m in range(dim):
        for n in range(m + 1, dim):
            sym = np.zeros((dim, dim), dtype=complex)
            sym[m, n] = sym[n, m] = 1.0 / np.sqrt(2.0)
            anti = np.zeros((dim, dim), dtype=complex)
            anti[m, n] = 1j / np.sqrt(2.0)
            anti[n, m] = -1j / np.sqrt(2.0)
            operators.extend([sym, anti])
    return operators


def measurement_matrix(vectors: np.ndarray, dim: int) -> np.ndarray:
    """Rows A[j, a] = ⟨v_j|B_a|v_j⟩ so that probabilities = A·x for ρ = Σ x_a B_a."""
    vectors = np.atleast_2d(np.asarray(vectors, dtype=complex))
    if vectors.shape[1] != dim:
        raise InvalidArgumentError(f"projection vectors must have {dim} components")
    operators = hermitian_operator_basis(dim)
    return np.array(
        [[np.real(v.conj() @ op @ v) for op in operators] for v in vectors]
    )


def linear_inversion(vectors: np.ndarray, probabilities: Sequence[float], dim: int) -> np.ndarray:
    """
    Least-squares Hermitian matrix reproducing projection probabilities.

    Raises:
        IllPosedInversionError: the projection set does not span the d²
            real parameters of a Hermitian matrix
    """
    a = measurement_matrix(vectors, dim)
    b = np.asarray(probabilities, dtype=float)
    if b.shape != (a.shape[0],):
        raise InvalidArgumentError("need one probability per projection")
    required = dim * dim
    singular = scipy.linalg.svdvals(a)
    rank = int(np.sum(singular > RANK_TOLERANCE * singular[0])) if singular.size else 0
    if rank < required:
        raise IllPosedInversionError(rank, required)
    logger.debug("Inverting tomography data", settings=a.shape[0], condition=float(singular[0] / singular[-1]))

    x, _, _, _ = scipy.linalg.lstsq(a, b)
    rho = sum(coef * op for coef, op in zip(x, hermitian_operator_basis(dim)))
    return _hermitize(rho)


def nearest_state(matrix: np.ndarray) -> np.ndarray:
    """Clip negative eigenvalues to zero and rescale to unit trace."""
    values, vectors = np.linalg.eigh(_hermitize(matrix))
    values = np.clip(values, 0.0, None)
    if values.sum() <= 0:
        raise InvalidArgumentError("estimate has no positive part")
    values = values / values.sum()
    return _hermitize((vectors * values) @ vectors.conj().T)


def _hermitize(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + matrix.conj().T)


def default_qubit_projections(basis: Optional[ModeBasis] = None) -> List[SuperpositionSpec]:
    """
    Six-setting qubit set: HG0, HG1 and (HG0 + e^{iφ}HG1)/√2 for φ in {0, π/2, π, 3π/2}.

    A generic informationally complete set for the lowest two orders; it is
    not tied to any particular laboratory protocol.
    """
    basis = basis or ModeBasis.dimensionless()
    specs = [
        SuperpositionSpec(((1.0, basis.spec(0)),)),
        SuperpositionSpec(((1.0, basis.spec(1)),)),
    ]
    for phase in (0.0, 0.5 * np.pi, np.pi, 1.5 * np.pi):
        specs.append(SuperpositionSpec(((1.0, basis.spec(0)), (np.exp(1j * phase), basis.spec(1)))))
    return specs


def projection_probabilities(
    jsa: JointAmplitude, projections: Sequence[SuperpositionSpec], basis: ModeBasis
) -> np.ndarray:
    """Success probability of each projection, rendered on the idler axis."""
    probabilities = []
    for spec in projections:
        mode = superpose(spec.on(basis), jsa.axis_i)
        probabilities.append(conditional_state(jsa, mode).norm() ** 2)
    return np.array(probabilities)


def simulate_tomography(
    jsa: JointAmplitude,
    projections: Optional[Sequence[SuperpositionSpec]] = None,
    n_events_per_setting: Optional[int] = 5000,
    seed: int = 0,
    basis: Optional[ModeBasis] = None,
    dim: int = 2,
) -> ModalDensityMatrix:
    """
    Reconstruct the idler density matrix from simulated projection counts.

    Each setting is tried `n_events_per_setting` times and succeeds with the
    projection probability, so the estimate is the binomial frequency. With
    `n_events_per_setting=None` the exact probabilities are inverted.

    Args:
        jsa: Two-photon state
        projections: Superpositions over orders < dim; the six-setting qubit
            set by default
        n_events_per_setting: Trials per setting, or None for noiseless
        seed: Seed of the count generator
        basis: Idler Hermite-Gauss family the projections are rendered on
        dim: Reconstruction dimension
    """
    basis = resolve_basis(jsa, basis)
    if not isinstance(basis, ModeBasis):
        raise InvalidArgumentError("tomography needs a Hermite-Gauss basis")
    projections = list(projections) if projections is not None else default_qubit_projections()
    if not projections:
        raise InvalidArgumentError("projection set is empty")
    vectors = np.array([spec.vector(dim) for spec in projections])

    probabilities = projection_probabilities(jsa, projections, basis)
    if n_events_per_setting is not None:
        if int(n_events_per_setting) != n_events_per_setting or n_events_per_setting < 1:
            raise InvalidArgumentError(
                f"n_events_per_setting must be a positive integer, got {n_events_per_setting}"
            )
        rng = np.random.default_rng(seed)
        counts = rng.binomial(int(n_events_per_setting), np.clip(probabilities, 0.0, 1.0))
        probabilities = counts / float(n_events_per_setting)

    raw = linear_inversion(vectors, probabilities, dim)
    captured = float(np.real(np.trace(raw)))
    estimate = nearest_state(raw)
    logger.info(
        "Tomography reconstruction",
        settings=len(projections),
        events=n_events_per_setting,
        seed=seed,
        purity=float(np.real(np.trace(estimate @ estimate))),
    )
    return ModalDensityMatrix(
        dim=dim,
        matrix=estimate,
        basis=basis,
        truncation_weight=min(1.0, max(0.0, 1.0 - captured)),
        truncated=captured < TRUNCATION_WARNING,
    )
