"""
Exception hierarchy for the simulator.

Every failure raised by the numerical modules derives from SimulationError so
the CLI can map it onto an exit code in one place.
"""

from typing import List, Optional, Tuple


class SimulationError(Exception):
    """Base class for all simulator errors."""


class InvalidArgumentError(SimulationError, ValueError):
    """An argument is outside its allowed range."""


class AxisMismatchError(SimulationError, ValueError):
    """Two amplitudes or spectra live on different axes."""


class DegenerateInputError(SimulationError, ValueError):
    """Input has zero norm and cannot be normalized."""


class InvalidDistributionError(SimulationError, ValueError):
    """A spectrum handed to a distribution metric is not a distribution."""


class NullProjectionError(SimulationError):
    """The projection mode is orthogonal to the two-photon state."""

    def __init__(self, probability: float):
        self.probability = probability
        super().__init__(
            f"Projection probability {probability:.3e} is below the null threshold; "
            "the mode is orthogonal to the state"
        )


class NumericalFailureError(SimulationError):
    """A linear-algebra routine did not converge."""

    def __init__(
        self,
        message: str,
        grid: Optional[Tuple[int, ...]] = None,
        condition_number: Optional[float] = None,
    ):
        self.grid = grid
        self.condition_number = condition_number
        details = []
        if grid is not None:
            details.append(f"grid={'x'.join(str(n) for n in grid)}")
        if condition_number is not None:
            details.append(f"condition={condition_number:.3e}")
        suffix = f" ({', '.join(details)})" if details else ""
        super().__init__(message + suffix)


class IllPosedInversionError(SimulationError):
    """The tomographic measurement set is not informationally complete."""

    def __init__(self, rank: int, required: int):
        self.rank = rank
        self.required = required
        super().__init__(
            f"Measurement operators span rank {rank}, {required} required "
            f"(deficiency {required - rank})"
        )


class ConfigError(SimulationError):
    """Scenario or runtime configuration failed validation."""

    def __init__(self, errors: List[str]):
        self.errors = list(errors)
        super().__init__(f"Configuration errors: {'; '.join(self.errors)}")
