"""
Scenario files.

A scenario pins the source, the grids, the projections to program, the
spectrometer and which artifacts to write. Files are YAML (`.cfg`, `.yaml`,
`.yml`) or JSON (`.json`); all lengths are in nm and angles in radians. Angle
lists also accept simple multiples of pi written as text ("pi/4", "3*pi/4").
"""

import hashlib
import json
import re
from pathlib import Path
from typing import List, Literal, Optional, Tuple, Union

import numpy as np
import structlog
import yaml
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeInt,
    PositiveFloat,
    PositiveInt,
    ValidationError,
    field_validator,
    model_validator,
)

from .errors import ConfigError
from .instrument import SpectrometerSpec
from .source.pdc import PhasematchSpec, PumpSpec, SchmidtData, bell_state, build_jsa, schmidt_decompose
from .source.presets import (
    STATE_B_MODE_SIGMA_NM,
    intensity_sigma_to_width,
    state_a_sources,
    state_b_sources,
)
from .spectral.grid import FrequencyAxis, JointAmplitude, bandwidth_to_omega, make_axis, wavelength_to_omega
from .spectral.modes import MAX_ORDER, ModeBasis

logger = structlog.get_logger()

ARTIFACTS = ("jsi", "marginals", "schmidt", "spectra", "sweep", "cases", "tomography", "counts")
YAML_SUFFIXES = (".cfg", ".yaml", ".yml")

_PI_EXPR = re.compile(r"^\s*(?P<sign>[-+])?\s*(?:(?P<num>\d*\.?\d+)\s*\*?\s*)?pi\s*(?:/\s*(?P<den>\d*\.?\d+))?\s*$")


def parse_angle(value: Union[float, int, str]) -> float:
    """Angle in radians from a number or a text multiple of pi."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if isinstance(value, str):
        text = value.strip().lower()
        match = _PI_EXPR.match(text)
        if match:
            num = float(match.group("num") or 1.0)
            den = float(match.group("den") or 1.0)
            sign = -1.0 if match.group("sign") == "-" else 1.0
            return sign * num * np.pi / den
        try:
            return float(text)
        except ValueError:
            pass
    raise ValueError(f"cannot read {value!r} as an angle")


class _Settings(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GridSettings(_Settings):
    center_nm: PositiveFloat = 1540.7
    span_nm: PositiveFloat = 20.0
    points: int = Field(512, ge=2)
    idler_center_nm: Optional[PositiveFloat] = None
    idler_span_nm: Optional[PositiveFloat] = None


class SourceSettings(_Settings):
    """
    Which state to build.

    `state_a` and `state_b` are the calibrated presets, `bell` the ideal
    temporal-mode Bell state; `custom` reads the `pump` and `phasematching`
    sections instead.
    """

    kind: Literal["state_a", "state_b", "bell", "custom"] = "custom"
    mode_sigma_nm: Optional[PositiveFloat] = None
    pump_sigma_nm: Optional[PositiveFloat] = None
    pump_reference_nm: Optional[PositiveFloat] = None
    asymmetry: Optional[float] = Field(None, gt=-1.0, lt=1.0)
    profile: Literal["gaussian", "sinc"] = "gaussian"
    weights: Tuple[float, float] = (0.5, 0.5)


class PumpSettings(_Settings):
    sigma_nm: PositiveFloat
    reference_wavelength_nm: Optional[PositiveFloat] = None
    center_nm: Optional[PositiveFloat] = None
    coefficients: List[float] = Field(default_factory=lambda: [1.0], min_length=1, max_length=MAX_ORDER + 1)


class PhasematchSettings(_Settings):
    width_nm: PositiveFloat
    profile: Literal["gaussian", "sinc"] = "gaussian"
    angle_deg: float = Field(45.0, gt=-90.0, le=90.0)
    asymmetry: float = Field(0.0, gt=-1.0, lt=1.0)


class ProjectionSettings(_Settings):
    basis: Literal["hermite", "schmidt"] = "hermite"
    basis_center_nm: Optional[PositiveFloat] = None
    basis_sigma_nm: Optional[PositiveFloat] = None
    orders: List[NonNegativeInt] = Field(default_factory=list)
    superpositions: List[List[Tuple[float, NonNegativeInt, float]]] = Field(default_factory=list)
    thetas: List[float] = Field(default_factory=list)
    phi: float = 0.0
    sweep_points: NonNegativeInt = 0

    @field_validator("thetas", mode="before")
    @classmethod
    def _parse_thetas(cls, value):
        if value is None:
            return []
        return [parse_angle(v) for v in value]

    @field_validator("phi", mode="before")
    @classmethod
    def _parse_phi(cls, value):
        return parse_angle(value)

    @field_validator("orders")
    @classmethod
    def _check_orders(cls, value):
        if value and max(value) > MAX_ORDER:
            raise ValueError(f"orders above {MAX_ORDER} are not supported")
        return value

    @field_validator("superpositions", mode="before")
    @classmethod
    def _parse_superpositions(cls, value):
        if value is None:
            return []
        parsed = []
        for terms in value:
            if not isinstance(terms, (list, tuple)) or not terms:
                raise ValueError("each superposition must be a non-empty list of terms")
            entry = []
            for term in terms:
                if not isinstance(term, (list, tuple)) or len(term) not in (2, 3):
                    raise ValueError(
                        f"superposition term {term!r} is not [amplitude, order] or [amplitude, order, phase]"
                    )
                phase = parse_angle(term[2]) if len(term) == 3 else 0.0
                entry.append((term[0], term[1], phase))
            parsed.append(entry)
        return parsed

    @field_validator("superpositions")
    @classmethod
    def _check_superpositions(cls, value):
        for terms in value:
            orders = [order for _, order, _ in terms]
            if max(orders) > MAX_ORDER:
                raise ValueError(f"superposition orders above {MAX_ORDER} are not supported")
            if len(set(orders)) != len(orders):
                raise ValueError(f"superposition repeats an order: {orders}")
            if all(amplitude == 0 for amplitude, _, _ in terms):
                raise ValueError("superposition amplitudes are all zero")
        return value

    def coefficient_vectors(self) -> List[np.ndarray]:
        """Each superposition as a dense vector of complex coefficients by order."""
        vectors = []
        for terms in self.superpositions:
            vector = np.zeros(max(order for _, order, _ in terms) + 1, dtype=complex)
            for amplitude, order, phase in terms:
                vector[order] = amplitude * np.exp(1j * phase)
            vectors.append(vector)
        return vectors


class InstrumentSettings(_Settings):
    dispersion_ns_per_nm: PositiveFloat = 0.58
    resolution_nm: float = Field(0.15, ge=0.0)
    convention: Literal["sigma", "fwhm"] = "sigma"
    reference_wavelength_nm: Optional[PositiveFloat] = None
    events: Optional[PositiveInt] = None
    bin_width_nm: PositiveFloat = 0.1


class TomographySettings(_Settings):
    dim: int = Field(2, ge=1, le=MAX_ORDER + 1)
    reduced_dim: int = Field(5, ge=1, le=MAX_ORDER + 1)
    events_per_setting: Optional[PositiveInt] = None


class OutputSettings(_Settings):
    artifacts: List[
        Literal["jsi", "marginals", "schmidt", "spectra", "sweep", "cases", "tomography", "counts"]
    ] = Field(default_factory=lambda: list(ARTIFACTS))
    schmidt_top: PositiveInt = 10


class Scenario(_Settings):
    """Validated scenario; nm at the boundary, rad/s once built."""

    name: str = Field(min_length=1)
    seed: Optional[NonNegativeInt] = None
    grid: GridSettings = Field(default_factory=GridSettings)
    source: SourceSettings = Field(default_factory=SourceSettings)
    pump: Optional[PumpSettings] = None
    phasematching: Optional[PhasematchSettings] = None
    projections: ProjectionSettings = Field(default_factory=ProjectionSettings)
    instrument: InstrumentSettings = Field(default_factory=InstrumentSettings)
    cases: List[Literal[1, 2, 3, 4]] = Field(default_factory=list)
    case_basis: Literal["schmidt", "hermite"] = "schmidt"
    tomography: Optional[TomographySettings] = None
    outputs: OutputSettings = Field(default_factory=OutputSettings)

    @field_validator("cases")
    @classmethod
    def _unique_cases(cls, value):
        return sorted(set(value))

    @model_validator(mode="after")
    def _check_consistency(self):
        errors = []
        if self.source.kind == "custom":
            if self.pump is None:
                errors.append("pump: required when source.kind is custom")
            if self.phasematching is None:
                errors.append("phasematching: required when source.kind is custom")
        else:
            if self.pump is not None:
                errors.append("pump: only used when source.kind is custom")
            if self.phasematching is not None:
                errors.append("phasematching: only used when source.kind is custom")
        if self.instrument.events is not None and self.seed is None:
            errors.append("seed: required when instrument.events is set")
        if self.tomography is not None and self.tomography.events_per_setting is not None and self.seed is None:
            errors.append("seed: required when tomography.events_per_setting is set")
        if self.grid.center_nm <= self.grid.span_nm / 2:
            errors.append("grid.span_nm: window must stay at positive wavelengths")
        if errors:
            raise ValueError("; ".join(errors))
        return self

    # Overrides

    def with_overrides(self, seed: Optional[int] = None, grid_points: Optional[int] = None) -> "Scenario":
        """Copy with CLI overrides applied, re-validated."""
        data = self.model_dump()
        if seed is not None:
            data["seed"] = seed
        if grid_points is not None:
            data["grid"]["points"] = grid_points
        return validate_scenario(data)

    # Canonical form

    def canonical_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()

    # Domain objects

    def signal_axis(self) -> FrequencyAxis:
        return make_axis(self.grid.center_nm, self.grid.span_nm, self.grid.points)

    def idler_axis(self) -> FrequencyAxis:
        return make_axis(
            self.grid.idler_center_nm or self.grid.center_nm,
            self.grid.idler_span_nm or self.grid.span_nm,
            self.grid.points,
        )

    def build_sources(self, axis_s: FrequencyAxis, axis_i: FrequencyAxis) -> Tuple[PumpSpec, PhasematchSpec]:
        source = self.source
        if source.kind == "state_a":
            options = {
                "pump_sigma_nm": source.pump_sigma_nm,
                "pump_reference_nm": source.pump_reference_nm,
                "mode_sigma_nm": source.mode_sigma_nm,
            }
            return state_a_sources(
                axis_s, profile=source.profile, **{k: v for k, v in options.items() if v is not None}
            )
        if source.kind == "state_b":
            options = {"mode_sigma_nm": source.mode_sigma_nm, "asymmetry": source.asymmetry}
            return state_b_sources(
                axis_s, profile=source.profile, **{k: v for k, v in options.items() if v is not None}
            )
        if source.kind == "custom":
            reference = self.pump.reference_wavelength_nm or self.grid.center_nm
            if self.pump.center_nm is not None:
                pump_center = float(wavelength_to_omega(self.pump.center_nm))
            else:
                pump_center = axis_s.center + axis_i.center
            pump = PumpSpec(
                center=pump_center,
                width=intensity_sigma_to_width(self.pump.sigma_nm, reference),
                coefficients=tuple(self.pump.coefficients),
            )
            pm = PhasematchSpec(
                pm_width=bandwidth_to_omega(self.phasematching.width_nm, self.grid.center_nm),
                profile=self.phasematching.profile,
                angle=self.phasematching.angle_deg,
                asymmetry=self.phasematching.asymmetry,
            )
            return pump, pm
        raise ConfigError([f"source.kind: {source.kind} has no pump model"])

    def build_jsa(self) -> JointAmplitude:
        axis_s, axis_i = self.signal_axis(), self.idler_axis()
        if self.source.kind == "bell":
            sigma = self.source.mode_sigma_nm or STATE_B_MODE_SIGMA_NM
            basis_s = ModeBasis.from_nm(axis_s.center_wavelength_nm, sigma)
            basis_i = ModeBasis.from_nm(axis_i.center_wavelength_nm, sigma)
            return bell_state(axis_s, axis_i, basis_s, basis_i, self.source.weights)
        pump, pm = self.build_sources(axis_s, axis_i)
        return build_jsa(pump, pm, axis_s, axis_i)

    def projection_basis(self, jsa: JointAmplitude) -> Union[ModeBasis, SchmidtData, None]:
        """
        Basis the projections are programmed in.

        None means a Hermite-Gauss family fitted to the first idler Schmidt mode.
        """
        settings = self.projections
        if settings.basis == "schmidt":
            widest = [len(vector) - 1 for vector in settings.coefficient_vectors()]
            rank = max(settings.orders + widest + [1]) + 1
            return schmidt_decompose(jsa, rank=rank)
        if settings.basis_sigma_nm is not None:
            center = settings.basis_center_nm or jsa.axis_i.center_wavelength_nm
            return ModeBasis.from_nm(center, settings.basis_sigma_nm)
        return None

    def sweep_thetas(self) -> np.ndarray:
        """Evenly spaced θ over [0, π)."""
        return np.linspace(0.0, np.pi, self.projections.sweep_points, endpoint=False)

    def spectrometer(self) -> SpectrometerSpec:
        settings = self.instrument
        return SpectrometerSpec(
            dispersion_ns_per_nm=settings.dispersion_ns_per_nm,
            resolution_nm=settings.resolution_nm,
            convention=settings.convention,
            reference_wavelength_nm=settings.reference_wavelength_nm or self.grid.center_nm,
        )

    def wants(self, artifact: str) -> bool:
        return artifact in self.outputs.artifacts


def _format_errors(exc: ValidationError) -> List[str]:
    messages = []
    for error in exc.errors():
        path = ".".join(str(part) for part in error["loc"])
        message = error["msg"]
        if message.startswith("Value error, "):
            message = message[len("Value error, "):]
        if path:
            messages.append(f"{path}: {message}")
        else:
            messages.extend(part.strip() for part in message.split(";"))
    return messages


def validate_scenario(data: dict) -> Scenario:
    """Validate a parsed scenario mapping, turning failures into ConfigError."""
    if not isinstance(data, dict):
        raise ConfigError(["scenario must be a mapping at the top level"])
    try:
        return Scenario.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(_format_errors(exc))


def load_scenario(path: Union[str, Path], search_dir: Optional[Union[str, Path]] = None) -> Scenario:
    """
    Read and validate a scenario file.

    A relative path that does not exist as given is looked up in `search_dir`.

    Raises:
        ConfigError: unreadable file, bad syntax or failed validation, with one
            message per failing field
    """
    path = Path(path)
    if search_dir is not None and not path.is_absolute() and not path.exists():
        candidate = Path(search_dir) / path
        if candidate.exists():
            path = candidate
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError([f"{path}: {exc.strerror or exc}"])

    try:
        if path.suffix.lower() == ".json":
            data = json.loads(text)
        elif path.suffix.lower() in YAML_SUFFIXES:
            data = yaml.safe_load(text)
        else:
            raise ConfigError([f"{path}: unsupported scenario format {path.suffix!r}"])
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ConfigError([f"{path}: {exc}"])

    scenario = validate_scenario(data)
    logger.debug("Loaded scenario", path=str(path), name=scenario.name, digest=scenario.digest()[:12])
    return scenario
