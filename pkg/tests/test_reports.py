import numpy as np
import pytest

from src.errors import AxisMismatchError, InvalidArgumentError
from src.measurement.coherence import case_report
from src.measurement.projection import conditional_spectrum, marginal_spectrum, rsp_sweep
from src.reports import (
    BundleWriter,
    Table,
    cases_table,
    jsi_table,
    schmidt_table,
    spectra_table,
    sweep_table,
)
from src.reports.writer import MANIFEST_NAME
from src.source.presets import bell_jsa
from src.source.pdc import schmidt_decompose
from src.utils import get_logger, setup_logging


@pytest.fixture(scope="module")
def small_bell():
    return bell_jsa(n_points=64)


def data_rows(text):
    return [line for line in text.splitlines() if line and not line.startswith("#")][1:]


def test_table_csv_layout():
    table = Table("demo", ["a", "b"], [[1.0, 2.0], [3.0, 4.0]], metadata={"unit": "nm"})
    text = table.to_csv()
    lines = text.splitlines()
    assert lines[0] == "# unit: nm"
    assert lines[1] == "a,b"
    assert lines[2] == "1.0000000000e+00,2.0000000000e+00"
    assert table.filename == "demo.csv"


def test_table_rejects_mismatched_columns():
    with pytest.raises(InvalidArgumentError):
        Table("demo", ["a", "b", "c"], [[1.0, 2.0]])


def test_jsi_table_is_peak_normalized_and_ascending(small_bell):
    table = jsi_table(small_bell)
    assert table.rows.shape == (64, 65)
    assert table.rows[:, 1:].max() == pytest.approx(1.0)
    assert np.all(np.diff(table.rows[:, 0]) > 0)
    idler = [float(c) for c in table.columns[1:]]
    assert np.all(np.diff(idler) > 0)


def test_schmidt_table_lists_cumulative_weight(small_bell):
    table = schmidt_table(schmidt_decompose(small_bell), top=4)
    assert table.columns == ["k", "lambda", "cumulative"]
    assert table.rows.shape == (4, 3)
    assert table.rows[1, 2] == pytest.approx(1.0, abs=1e-9)
    assert float(table.metadata["schmidt_number"]) == pytest.approx(2.0, abs=1e-6)
    with pytest.raises(InvalidArgumentError):
        schmidt_table(schmidt_decompose(small_bell), top=0)


def test_spectra_table_requires_one_axis(small_bell):
    signal = marginal_spectrum(small_bell)
    table = spectra_table("marginals", {"signal": signal, "idler": marginal_spectrum(small_bell, "idler")})
    assert table.columns == ["wavelength_nm", "signal_per_nm", "idler_per_nm"]

    other = marginal_spectrum(bell_jsa(n_points=32))
    with pytest.raises(AxisMismatchError):
        spectra_table("bad", {"a": signal, "b": other})
    with pytest.raises(InvalidArgumentError):
        spectra_table("empty", {})


def test_sweep_table_has_one_row_per_angle(small_bell):
    thetas = [0.0, 0.5, 1.0]
    spectra = [conditional_spectrum(r) for r in rsp_sweep(small_bell, thetas, basis=schmidt_decompose(small_bell))]
    table = sweep_table(thetas, spectra)
    assert table.rows.shape == (3, 65)
    assert np.allclose(table.rows[:, 0], thetas)
    with pytest.raises(InvalidArgumentError):
        sweep_table(thetas[:2], spectra)


def test_cases_table_is_long_format(small_bell):
    report = case_report(small_bell, [0.0, 0.7], cases=[1, 2])
    table = cases_table(report)
    assert table.rows.shape == (4, 3)
    assert list(table.rows[:, 1]) == [1, 2, 1, 2]


def test_bundle_writer_manifest(tmp_path):
    writer = BundleWriter(tmp_path / "bundle")
    writer.write(Table("b", ["x"], [[1.0]]))
    writer.write(Table("a", ["x"], [[2.0]]))
    manifest = writer.write_manifest({"seed": "7", "scenario": "demo"})

    lines = manifest.read_text().splitlines()
    assert manifest.name == MANIFEST_NAME
    assert lines[:2] == ["scenario: demo", "seed: 7"]
    assert lines[2].startswith("file a.csv: sha256 ")
    assert lines[3].startswith("file b.csv: sha256 ")
    assert (tmp_path / "bundle" / "a.csv").read_text().splitlines()[1] == "2.0000000000e+00"


def test_json_logs_go_to_stderr(capsys):
    setup_logging("INFO", json_output=True)
    get_logger().info("hello", grid=64)
    get_logger().debug("hidden")
    captured = capsys.readouterr()
    assert captured.out == ""
    assert '"event": "hello"' in captured.err
    assert '"grid": 64' in captured.err
    assert "hidden" not in captured.err
