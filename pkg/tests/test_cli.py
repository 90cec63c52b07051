"""Test the pmaplab command line."""

import csv
import json
import math
from pathlib import Path
from unittest.mock import patch

import pytest

from pmaplab.api.v1.samples import LIMIT_BASINS, limit_task
from pmaplab.core.main import EXIT_CONFIG, EXIT_OK, build_parser, main
from pmaplab.core.models import EdgeTreePayload, SampleFile, StepFunctionPayload
from pmaplab.core.prob import ThetaVector
from pmaplab.core.rng import RngStream
from pmaplab.core.settings import LabSettings


@pytest.fixture
def mock_settings(tmp_path: Path) -> LabSettings:
    """Settings for command line runs."""
    return LabSettings(seed=17, grid_log2=8, output_dir=tmp_path / "results", icrt_leaves=20)


def run(argv: list[str], settings: LabSettings) -> int:
    """Run the command line with patched settings."""
    with patch("pmaplab.core.main.get_settings", return_value=settings):
        return main(argv)


def test_parser_requires_a_command() -> None:
    """Test that a bare invocation is rejected."""
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_sample_mapping_then_walk(tmp_path: Path, mock_settings: LabSettings) -> None:
    """Test sampling mappings to a file and walking one of them."""
    samples = tmp_path / "mappings.json"
    code = run(
        ["sample-mapping", "--n", "8", "--theta", "0.5", "--count", "3", "--out", str(samples)],
        mock_settings,
    )
    assert code == EXIT_OK
    loaded = SampleFile.model_validate_json(samples.read_text(encoding="utf-8"))
    assert len(loaded.mappings) == 3 and loaded.seed == 17
    assert loaded.family.theta == [0.5]

    walk_path = tmp_path / "walk.json"
    code = run(
        ["walk", "--in", str(samples), "--index", "2", "--w", "uniform", "--out", str(walk_path)],
        mock_settings,
    )
    assert code == EXIT_OK
    walk = StepFunctionPayload.model_validate_json(walk_path.read_text(encoding="utf-8"))
    assert sum(walk.widths) == pytest.approx(1.0)
    assert walk.marks["D"][-1] == pytest.approx(1.0)
    assert sorted(walk.tags or []) == list(range(1, 9))


def test_walk_bad_index(tmp_path: Path, mock_settings: LabSettings) -> None:
    """Test that a missing mapping index is a configuration error."""
    samples = tmp_path / "mappings.json"
    run(["sample-mapping", "--n", "4", "--out", str(samples)], mock_settings)
    assert run(["walk", "--in", str(samples), "--index", "5"], mock_settings) == EXIT_CONFIG
    assert run(["walk", "--in", str(tmp_path / "none.json")], mock_settings) == EXIT_CONFIG


def test_sample_tree_stdout(capsys: pytest.CaptureFixture[str], mock_settings: LabSettings) -> None:
    """Test sampling trees to standard output."""
    assert run(["sample-tree", "--n", "6", "--count", "2", "--seed", "4"], mock_settings) == 0
    loaded = SampleFile.model_validate_json(capsys.readouterr().out)
    assert len(loaded.trees) == 2 and loaded.seed == 4
    assert all(tree.parent.count(0) == 1 for tree in loaded.trees)


def test_invalid_family_exit_code(mock_settings: LabSettings) -> None:
    """Test that an unranked family exits with the configuration code."""
    assert run(["sample-tree", "--n", "2", "--theta", "0.1"], mock_settings) == EXIT_CONFIG


def test_icrt_command(tmp_path: Path, mock_settings: LabSettings) -> None:
    """Test writing a stick-breaking tree with the default leaf count."""
    out = tmp_path / "icrt.json"
    assert run(["icrt", "--theta", "0.5", "--out", str(out)], mock_settings) == EXIT_OK
    tree = EdgeTreePayload.model_validate_json(out.read_text(encoding="utf-8"))
    labels = {node.label for node in tree.nodes}
    assert {"root", "1+", "20+"} <= labels
    assert len(tree.edges) == len(tree.nodes) - 1


def test_limit_command(tmp_path: Path, mock_settings: LabSettings) -> None:
    """Test replicated limit draws written as CSV rows."""
    out = tmp_path / "limit.csv"
    code = run(["limit", "--theta", "0.4", "--reps", "3", "--out", str(out)], mock_settings)
    assert code == EXIT_OK
    with out.open(encoding="utf-8") as handle:
        rows = list(csv.DictReader(handle))
    assert {row["rep"] for row in rows} == {"0", "1", "2"}
    assert any(row["statistic"] == "mass_1" for row in rows)


def test_limit_rows_per_replication(tmp_path: Path, mock_settings: LabSettings) -> None:
    """Test that every replication writes the same statistics, missing basins as NaN."""
    out = tmp_path / "limit.csv"
    argv = ["limit", "--theta", "0.6", "--reps", "6", "--seed", "3", "--out", str(out)]
    assert run(argv, mock_settings) == EXIT_OK
    with out.open(encoding="utf-8") as handle:
        rows = list(csv.DictReader(handle))
    names = ["max_height", "u", "excursions"] + [
        f"{stat}_{j}" for j in range(1, LIMIT_BASINS + 1) for stat in ("mass", "local_time")
    ]
    assert len(rows) == 6 * len(names)
    for rep in range(6):
        assert sorted(row["statistic"] for row in rows if row["rep"] == str(rep)) == sorted(names)


def test_limit_task_pads_missing_basins() -> None:
    """Test that basins past the final mark are reported as NaN."""
    stats = limit_task(RngStream(5, 0), ThetaVector.parse("0.5"), 256)
    masses = [stats[f"mass_{j}"] for j in range(1, LIMIT_BASINS + 1)]
    assert not math.isnan(masses[0])
    seen = [mass for mass in masses if not math.isnan(mass)]
    assert masses[: len(seen)] == seen
    assert sum(seen) <= 1.0 + 1e-9


@pytest.mark.parametrize("grid_log2", ["7", "21"])
def test_limit_grid_out_of_range(
    grid_log2: str, tmp_path: Path, mock_settings: LabSettings
) -> None:
    """Test that a grid size outside the settings range is a configuration error."""
    argv = ["limit", "--grid-log2", grid_log2, "--reps", "1", "--out", str(tmp_path / "x.csv")]
    assert run(argv, mock_settings) == EXIT_CONFIG
    assert not (tmp_path / "x.csv").exists()


def test_experiment_command(tmp_path: Path, mock_settings: LabSettings) -> None:
    """Test running a catalog experiment and writing its summary."""
    config = tmp_path / "e2.json"
    config.write_text(json.dumps({"experiment": "E2", "sizes": [3]}), encoding="utf-8")
    report = tmp_path / "report.json"
    code = run(["experiment", str(config), "--report", str(report)], mock_settings)
    assert code == EXIT_OK
    assert json.loads(report.read_text(encoding="utf-8"))["passed"] is True
    assert run(["experiment", str(tmp_path / "missing.json")], mock_settings) == EXIT_CONFIG


def test_check_command(capsys: pytest.CaptureFixture[str], mock_settings: LabSettings) -> None:
    """Test a self-check suite from the command line."""
    argv = ["--log-level", "warning", "check", "--suite", "joyal", "--instances", "5"]
    code = run(argv, mock_settings)
    assert code == EXIT_OK
    assert json.loads(capsys.readouterr().out)["failures"] == []
