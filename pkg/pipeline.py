#!/usr/bin/env python3
"""
Temporal-Mode Remote Shaping Simulator
======================================

Scenario-driven front end that:
1. Builds the two-photon state of a scenario (JSA, Schmidt decomposition)
2. Projects the idler onto programmed temporal modes
3. Runs the spectrometer model on the conditional signal spectra
4. Compares coherence models and reconstructs the idler density matrix
5. Writes every result as CSV plus a manifest

Usage:
    # Full bundle
    python pipeline.py run --scenario scenarios/state_a.cfg --out output/state_a

    # Single stages
    python pipeline.py schmidt --scenario scenarios/state_b.cfg --top 5
    python pipeline.py sweep --scenario scenarios/state_b.cfg --points 12
    python pipeline.py cases --scenario scenarios/state_b.cfg --theta 0.7854
"""

import functools
import platform
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import click
import numpy as np
import scipy
from dotenv import load_dotenv
from tqdm import tqdm

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from src import __version__
from src.config import Config
from src.errors import ConfigError, SimulationError
from src.instrument import CountRecord, apply_resolution, sample_counts
from src.measurement import (
    CaseReport,
    ModalDensityMatrix,
    ProjectionResult,
    case_report,
    conditional_spectrum,
    marginal_spectrum,
    project,
    reduced_density_matrix,
    simulate_tomography,
)
from src.measurement.projection import composite_mode, resolve_basis, superposition_mode
from src.reports import (
    BundleWriter,
    Table,
    cases_table,
    centroid_table,
    counts_table,
    density_matrix_table,
    jsi_table,
    projections_table,
    schmidt_table,
    spectra_table,
    sweep_table,
)
from src.scenario import Scenario, load_scenario
from src.source.pdc import SchmidtData, schmidt_decompose
from src.spectral.grid import JointAmplitude, WavelengthSpectrum
from src.spectral.modes import ModeBasis, SuperpositionSpec
from src.utils import setup_logging
from src.utils.logging import get_logger

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def child_seeds(seed: int, n: int) -> List[int]:
    """Independent per-stream seeds derived from one scenario seed."""
    return [int(child.generate_state(1)[0]) for child in np.random.SeedSequence(seed).spawn(n)]


class RemoteShapingPipeline:
    """
    Main pipeline orchestrator.

    Builds the state of one scenario lazily and exposes each stage; `run`
    chains them into an output bundle.

    Example:
        pipeline = RemoteShapingPipeline(load_scenario("scenarios/state_b.cfg"))
        pipeline.run("output/state_b")
    """

    def __init__(self, scenario: Scenario, config: Optional[Config] = None):
        """
        Initialize the pipeline.

        Args:
            scenario: Validated scenario
            config: Optional runtime configuration (loads from env if not provided)
        """
        self.scenario = scenario
        self.config = config or Config.from_env()
        self.logger = get_logger("pipeline")

        self._jsa: Optional[JointAmplitude] = None
        self._schmidt: Optional[SchmidtData] = None
        self._basis = None

    @property
    def seed(self) -> int:
        if self.scenario.seed is not None:
            return self.scenario.seed
        return self.config.runtime.default_seed

    @property
    def jsa(self) -> JointAmplitude:
        if self._jsa is None:
            self.logger.info(
                "Building two-photon state",
                scenario=self.scenario.name,
                source=self.scenario.source.kind,
                grid=self.scenario.grid.points,
            )
            self._jsa = self.scenario.build_jsa()
        return self._jsa

    @property
    def schmidt(self) -> SchmidtData:
        if self._schmidt is None:
            self._schmidt = schmidt_decompose(self.jsa)
            self.logger.info("Schmidt decomposition", lambda_0=float(self._schmidt.coefficients[0]))
        return self._schmidt

    @property
    def basis(self):
        """Projection basis: a Hermite-Gauss family or the state's Schmidt modes."""
        if self._basis is None:
            self._basis = resolve_basis(self.jsa, self.scenario.projection_basis(self.jsa))
        return self._basis

    # Stages

    def projections(self, thetas: Optional[Sequence[float]] = None) -> List[Tuple[str, ProjectionResult]]:
        """
        Project onto the scenario's orders, explicit superpositions and θ superpositions.

        Args:
            thetas: Replace the scenario's orders, superpositions and angles with these angles
        """
        settings = self.scenario.projections
        orders = [] if thetas is not None else settings.orders
        composites = [] if thetas is not None else settings.coefficient_vectors()
        angles = list(thetas) if thetas is not None else settings.thetas
        basis = self.basis

        results = []
        for order in orders:
            if isinstance(basis, SchmidtData):
                mode, spec, label = basis.idler_modes[order], None, f"h{order}"
            else:
                spec = SuperpositionSpec(((1.0, basis.spec(order)),))
                mode, label = basis.mode(order, self.jsa.axis_i), f"HG{order}"
            results.append((label, project(self.jsa, mode, spec=spec)))
        for index, coefficients in enumerate(composites):
            mode, spec = composite_mode(self.jsa, coefficients, basis)
            results.append((f"superposition_{index}", project(self.jsa, mode, spec=spec)))
        for theta in angles:
            mode, spec = superposition_mode(self.jsa, theta, settings.phi, basis)
            results.append((f"theta={theta:.6f}", project(self.jsa, mode, spec=spec, theta=float(theta))))
        for label, result in results:
            self.logger.debug("Projection", label=label, probability=result.probability)
        return results

    def instrument_view(
        self, spectra: Sequence[WavelengthSpectrum]
    ) -> Tuple[List[WavelengthSpectrum], List[CountRecord]]:
        """Blurred spectra and, when events are configured and counts requested, sampled counts."""
        spec = self.scenario.spectrometer()
        blurred = [apply_resolution(s, spec) for s in spectra]
        events = self.scenario.instrument.events
        records = []
        if events is not None and self.scenario.wants("counts"):
            seeds = child_seeds(self.seed, len(blurred))
            for spectrum, seed in zip(blurred, seeds):
                records.append(
                    sample_counts(spectrum, events, seed, bin_width_nm=self.scenario.instrument.bin_width_nm)
                )
        return blurred, records

    def sweep(self, points: Optional[int] = None, phi: Optional[float] = None) -> Tuple[np.ndarray, List[WavelengthSpectrum]]:
        """Conditional spectra over evenly spaced θ in [0, π)."""
        n = self.scenario.projections.sweep_points if points is None else points
        if n < 1:
            raise ConfigError(["projections.sweep_points: must be positive to run a sweep"])
        phi = self.scenario.projections.phi if phi is None else phi
        thetas = np.linspace(0.0, np.pi, n, endpoint=False)
        spectra = []
        for theta in tqdm(thetas, desc="Sweeping θ", disable=None):
            mode, spec = superposition_mode(self.jsa, float(theta), phi, self.basis)
            spectra.append(conditional_spectrum(project(self.jsa, mode, spec=spec, theta=float(theta))))
        return thetas, spectra

    def cases(self, thetas: Optional[Sequence[float]] = None, cases: Optional[Sequence[int]] = None) -> CaseReport:
        """Similarity of the four coherence cases to case 1."""
        if thetas is None:
            thetas = self.scenario.projections.thetas or list(self.scenario.sweep_thetas())
        if not thetas:
            raise ConfigError(["projections.thetas: needed for the case comparison"])
        cases = cases or self.scenario.cases or (1, 2, 3, 4)
        basis = "schmidt" if self.scenario.case_basis == "schmidt" else self.basis
        return case_report(
            self.jsa,
            thetas,
            phi=self.scenario.projections.phi,
            basis=basis,
            cases=cases,
        )

    def tomography(self) -> Tuple[ModalDensityMatrix, ModalDensityMatrix]:
        """Reduced density matrix and its simulated tomographic reconstruction."""
        settings = self.scenario.tomography
        if settings is None:
            raise ConfigError(["tomography: section missing from scenario"])
        basis = self.basis if isinstance(self.basis, ModeBasis) else None
        reduced = reduced_density_matrix(self.jsa, basis, dim=settings.reduced_dim)
        reconstructed = simulate_tomography(
            self.jsa,
            n_events_per_setting=settings.events_per_setting,
            seed=self.seed,
            basis=reduced.basis,
            dim=settings.dim,
        )
        return reduced, reconstructed

    # Tables

    def jsa_tables(self) -> List[Table]:
        return [jsi_table(self.jsa)]

    def marginal_tables(self) -> List[Table]:
        return [
            spectra_table(f"marginal_{which}", {which: marginal_spectrum(self.jsa, which)})
            for which in ("signal", "idler")
        ]

    def schmidt_tables(self, top: Optional[int] = None) -> List[Table]:
        return [schmidt_table(self.schmidt, top or self.scenario.outputs.schmidt_top)]

    def projection_tables(self, thetas: Optional[Sequence[float]] = None) -> List[Table]:
        results = self.projections(thetas)
        if not results:
            return []
        labels = [label for label, _ in results]
        ideal = [conditional_spectrum(result) for _, result in results]
        blurred, records = self.instrument_view(ideal)
        spec = self.scenario.spectrometer()

        tables = [
            projections_table(labels, [r.probability for _, r in results], ideal),
            spectra_table("conditional_spectra", dict(zip(labels, ideal))),
            spectra_table(
                "conditional_spectra_blurred",
                dict(zip(labels, blurred)),
                metadata={
                    "resolution_nm": "%.10e" % spec.resolution_nm,
                    "convention": spec.convention,
                },
            ),
        ]
        for index, (record, expected) in enumerate(zip(records, blurred)):
            table = counts_table(f"counts_{index}", record, expected, spec)
            table.metadata["projection"] = labels[index]
            tables.append(table)
        return tables

    def sweep_tables(self, points: Optional[int] = None) -> List[Table]:
        thetas, spectra = self.sweep(points)
        return [sweep_table(thetas, spectra, self.scenario.projections.phi), centroid_table(thetas, spectra)]

    def case_tables(self, thetas: Optional[Sequence[float]] = None, cases: Optional[Sequence[int]] = None) -> List[Table]:
        return [cases_table(self.cases(thetas, cases))]

    def tomography_tables(self) -> List[Table]:
        reduced, reconstructed = self.tomography()
        return [
            density_matrix_table("density_reduced", reduced),
            density_matrix_table("density_tomography", reconstructed),
        ]

    def manifest_entries(self) -> Dict[str, str]:
        axis_s, axis_i = self.scenario.signal_axis(), self.scenario.idler_axis()
        return {
            "scenario": self.scenario.name,
            "scenario_sha256": self.scenario.digest(),
            "scenario_json": self.scenario.canonical_json(),
            "seed": str(self.seed),
            "grid": f"{axis_s.n_points}x{axis_i.n_points}",
            "signal_center_nm": "%.6f" % axis_s.center_wavelength_nm,
            "idler_center_nm": "%.6f" % axis_i.center_wavelength_nm,
            "tool_version": __version__,
            "numpy_version": np.__version__,
            "scipy_version": scipy.__version__,
            "python_version": platform.python_version(),
        }

    def run(self, out_dir: str) -> Path:
        """
        Write the full bundle for the scenario.

        Args:
            out_dir: Output directory

        Returns:
            Path: the manifest
        """
        scenario = self.scenario
        self.logger.info("Running scenario", scenario=scenario.name, out=str(out_dir))
        writer = BundleWriter(out_dir)

        if scenario.wants("jsi"):
            writer.write_all(self.jsa_tables())
        if scenario.wants("marginals"):
            writer.write_all(self.marginal_tables())
        if scenario.wants("schmidt"):
            writer.write_all(self.schmidt_tables())
        if scenario.wants("spectra"):
            writer.write_all(self.projection_tables())
        if scenario.wants("sweep") and scenario.projections.sweep_points > 0:
            writer.write_all(self.sweep_tables())
        if scenario.wants("cases") and scenario.cases:
            writer.write_all(self.case_tables())
        if scenario.wants("tomography") and scenario.tomography is not None:
            writer.write_all(self.tomography_tables())

        return writer.write_manifest(self.manifest_entries())


# CLI helpers

def exit_codes(command):
    """Map configuration errors to exit code 2, numerical failures to 3 and I/O failures to 4."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except ConfigError as e:
            for message in e.errors:
                click.echo(f"❌ Configuration error: {message}", err=True)
            sys.exit(EXIT_CONFIG)
        except SimulationError as e:
            click.echo(f"❌ Simulation failed: {e}", err=True)
            sys.exit(EXIT_NUMERICAL)
        except OSError as e:
            click.echo(f"❌ Could not write output: {e}", err=True)
            sys.exit(EXIT_IO)

    return wrapper


def open_pipeline(ctx: click.Context, scenario_path: str, seed: Optional[int] = None, grid: Optional[int] = None) -> RemoteShapingPipeline:
    scenario = load_scenario(scenario_path, ctx.obj["config"].runtime.scenario_dir)
    scenario = scenario.with_overrides(seed=seed, grid_points=grid)
    return RemoteShapingPipeline(scenario, ctx.obj["config"])


def emit(pipeline: RemoteShapingPipeline, tables: List[Table], out: Optional[str]):
    """Write tables to a bundle directory, or print them to stdout."""
    if out:
        writer = BundleWriter(out)
        writer.write_all(tables)
        writer.write_manifest(pipeline.manifest_entries())
        click.echo(f"✅ Wrote {len(tables)} table(s) to {out}", err=True)
        return
    for index, table in enumerate(tables):
        if index:
            click.echo("")
        click.echo(table.to_csv(), nl=False)


scenario_option = click.option("--scenario", "-s", "scenario_path", required=True, type=click.Path(dir_okay=False), help="Scenario file (.cfg/.yaml or .json)")
out_option = click.option("--out", "-o", default=None, type=click.Path(file_okay=False), help="Output directory (stdout if omitted)")
seed_option = click.option("--seed", type=click.IntRange(min=0, max=2 ** 64 - 1), default=None, help="Override the scenario seed")
grid_option = click.option("--grid", type=click.IntRange(min=2), default=None, help="Override the number of grid points per axis")


# CLI Commands
@click.group()
@click.option('--debug', is_flag=True, help='Enable debug logging')
@click.option('--json-logs', is_flag=True, help='Emit logs as JSON lines')
@click.pass_context
def cli(ctx, debug, json_logs):
    """Temporal-mode remote shaping simulator CLI."""
    load_dotenv()
    try:
        config = Config.from_env()
    except ConfigError as e:
        click.echo(f"❌ {e}", err=True)
        sys.exit(EXIT_CONFIG)
    level = "DEBUG" if debug else config.runtime.log_level
    setup_logging(level=level, json_output=json_logs or config.runtime.json_logs)
    ctx.obj = {"config": config}


@cli.command()
@scenario_option
@out_option
@seed_option
@grid_option
@click.pass_context
@exit_codes
def run(ctx, scenario_path, out, seed, grid):
    """Run a scenario and write its full output bundle."""
    pipeline = open_pipeline(ctx, scenario_path, seed, grid)
    out = out or str(pipeline.config.runtime.output_dir / pipeline.scenario.name)
    manifest = pipeline.run(out)
    click.echo(f"✅ Scenario complete: {manifest}", err=True)


@cli.command()
@scenario_option
@out_option
@grid_option
@click.pass_context
@exit_codes
def jsa(ctx, scenario_path, out, grid):
    """Joint spectral intensity matrix."""
    pipeline = open_pipeline(ctx, scenario_path, grid=grid)
    emit(pipeline, pipeline.jsa_tables(), out)


@cli.command()
@scenario_option
@out_option
@grid_option
@click.option('--top', type=click.IntRange(min=1), default=None, help='Number of Schmidt coefficients')
@click.pass_context
@exit_codes
def schmidt(ctx, scenario_path, out, grid, top):
    """Schmidt coefficients λ_0..λ_{top-1}."""
    pipeline = open_pipeline(ctx, scenario_path, grid=grid)
    emit(pipeline, pipeline.schmidt_tables(top), out)


@cli.command(name="project")
@scenario_option
@out_option
@seed_option
@grid_option
@click.option('--theta', 'thetas', type=float, multiple=True, help='Superposition angle in rad (repeatable)')
@click.pass_context
@exit_codes
def project_command(ctx, scenario_path, out, seed, grid, thetas):
    """Conditional spectra for the programmed projections."""
    pipeline = open_pipeline(ctx, scenario_path, seed, grid)
    emit(pipeline, pipeline.projection_tables(list(thetas) or None), out)


@cli.command()
@scenario_option
@out_option
@grid_option
@click.option('--points', type=click.IntRange(min=1), default=None, help='Number of θ values over [0, π)')
@click.pass_context
@exit_codes
def sweep(ctx, scenario_path, out, grid, points):
    """θ-by-wavelength matrix of conditional spectra."""
    pipeline = open_pipeline(ctx, scenario_path, grid=grid)
    emit(pipeline, pipeline.sweep_tables(points), out)


@cli.command()
@scenario_option
@out_option
@grid_option
@click.option('--theta', 'thetas', type=float, multiple=True, help='Superposition angle in rad (repeatable)')
@click.option('--case', 'cases', type=click.IntRange(1, 4), multiple=True, help='Case to evaluate (repeatable)')
@click.pass_context
@exit_codes
def cases(ctx, scenario_path, out, grid, thetas, cases):
    """Similarity of the coherence cases to the fully coherent model."""
    pipeline = open_pipeline(ctx, scenario_path, grid=grid)
    emit(pipeline, pipeline.case_tables(list(thetas) or None, list(cases) or None), out)


@cli.command()
@scenario_option
@out_option
@seed_option
@grid_option
@click.pass_context
@exit_codes
def tomo(ctx, scenario_path, out, seed, grid):
    """Reduced density matrix and simulated tomography of the idler."""
    pipeline = open_pipeline(ctx, scenario_path, seed, grid)
    emit(pipeline, pipeline.tomography_tables(), out)


@cli.command()
@scenario_option
@click.pass_context
@exit_codes
def validate(ctx, scenario_path):
    """Validate runtime configuration and a scenario file."""
    click.echo("Validating configuration...")
    ctx.obj["config"].validate()
    click.echo("✅ Runtime configuration valid")

    scenario = load_scenario(scenario_path, ctx.obj["config"].runtime.scenario_dir)
    click.echo(f"✅ Scenario '{scenario.name}' valid (sha256 {scenario.digest()[:12]})")
    if scenario.instrument.events is None:
        click.echo("⚠️  No event count set; spectra will not be sampled")


if __name__ == "__main__":
    cli()
