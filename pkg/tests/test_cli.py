"""Tests for the command-line interface."""

import importlib
import json
from unittest.mock import patch

import pytest

from src.cli.main import build_parser, main, run
from src.cli.models import CommandConfig, ExitCode
from src.realization.builders import build_T1_matrix, build_T2_matrix
from src.realization.models import RealizationCertificate
from src.treespectra.matrix import WeightedTreeMatrix
from src.treespectra.models import SeedId
from src.treespectra.unfolding import seed_spec


def _write(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


@pytest.fixture
def broom_file(tmp_path):
    """First-family matrix with two children carrying two leaves each, as JSON."""
    return _write(tmp_path / "broom.json", build_T1_matrix([2, 2]).to_json())


@pytest.fixture
def pendant_file(tmp_path):
    """Second-family matrix as JSON."""
    return _write(tmp_path / "pendant.json", build_T2_matrix(1, [2, 2]).to_json())


def _output(capsys):
    return json.loads(capsys.readouterr().out)


def test_diag_root_value(pendant_file, capsys):
    """Test the second-family root value at lambda = 1."""
    assert run(["diag", pendant_file, "--at", "1"]) == ExitCode.OK
    payload = _output(capsys)
    assert payload["schema"] == "1"
    assert payload["command"] == "diag"
    assert payload["x"] == "-1"
    root = str(payload["n"] - 1)
    assert payload["outcome"]["root_values"][root] == "-4"


def test_diag_far_below_spectrum(broom_file, capsys):
    """Test a point below the spectrum leaves every value positive."""
    assert run(["diag", broom_file, "--at=-100"]) == ExitCode.OK
    assert _output(capsys)["outcome"]["inertia"] == {"positive": 7, "negative": 0, "zero": 0}


def test_diag_level_and_candidates(broom_file, capsys):
    """Test optional level table and N count."""
    argv = ["diag", broom_file, "--x", "-1", "--level", "1", "--candidates", "-3", "-1", "0", "1", "2", "3"]
    assert run(argv) == ExitCode.OK
    payload = _output(capsys)
    assert payload["level_zero_table"]["zeros"]["1"] == 2
    assert payload["count_N"]["N"] == 2


def test_diag_float_backend(broom_file, capsys):
    """Test float outcomes render numbers."""
    assert run(["diag", broom_file, "--at", "2", "--backend", "float", "--tol", "1e-9"]) == ExitCode.OK
    payload = _output(capsys)
    assert payload["backend"] == "float"
    assert payload["outcome"]["root_values"]["6"] == pytest.approx(10 / 3)


def test_diag_malformed_json(tmp_path):
    """Test unreadable input exits with the usage code."""
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert run(["diag", str(bad), "--at", "1"]) == ExitCode.USAGE
    assert run(["diag", str(tmp_path / "missing.json"), "--at", "1"]) == ExitCode.USAGE


def test_diag_bad_point(broom_file):
    """Test a malformed lambda exits with the usage code."""
    assert run(["diag", broom_file, "--at", "one"]) == ExitCode.USAGE


def test_diag_needs_point(broom_file):
    """Test argparse errors map to the usage code."""
    assert run(["diag", broom_file]) == ExitCode.USAGE
    assert run(["diag", broom_file, "--at", "1", "--x", "1"]) == ExitCode.USAGE


def test_diag_invariant_violations(tmp_path, broom_file):
    """Test invalid trees and levels exit with the invariant code."""
    cyclic = {
        "diag": ["0", "0", "0"],
        "edges": [{"u": 0, "v": 1, "w2": "1"}, {"u": 1, "v": 2, "w2": "1"}, {"u": 2, "v": 0, "w2": "1"}],
        "root": 0,
    }
    assert run(["diag", _write(tmp_path / "cyclic.json", cyclic), "--at", "0"]) == ExitCode.INVARIANT
    assert run(["diag", broom_file, "--at", "0", "--level", "5"]) == ExitCode.INVARIANT


def test_realize_counterexample(tmp_path, capsys):
    """Test the default S7-8 realization certifies and writes both files."""
    matrix_path = tmp_path / "matrix.json"
    certificate_path = tmp_path / "certificate.json"
    argv = [
        "realize",
        "--seed",
        "S7-8",
        "--oracle-max-n",
        "0",
        "--out-matrix",
        str(matrix_path),
        "--out-certificate",
        str(certificate_path),
    ]
    assert run(argv) == ExitCode.OK
    payload = _output(capsys)
    assert payload["certificate"]["distinct_count_bound"] == 8
    certificate = json.loads(certificate_path.read_text(encoding="utf-8"))
    assert certificate == payload["certificate"]
    assert WeightedTreeMatrix.from_json(json.loads(matrix_path.read_text(encoding="utf-8"))).n == 32


def test_realize_spec_file(tmp_path, capsys):
    """Test a spec file drives the realization."""
    spec_path = _write(tmp_path / "spec.json", seed_spec(SeedId.S7_8).model_dump(mode="json"))
    assert run(["realize", "--seed", "S7-8", "--spec", spec_path]) == ExitCode.OK
    certificate = _output(capsys)["certificate"]
    assert certificate["n"] == 9
    assert sum(certificate["rational_multiplicities"].values()) == 7


def test_realize_rejections(tmp_path):
    """Test zero couplings and mismatched specs exit with the usage code."""
    assert run(["realize", "--seed", "S7-8", "--coupling2", "0"]) == ExitCode.USAGE
    spec_path = _write(tmp_path / "spec.json", seed_spec(SeedId.S7_9).model_dump(mode="json"))
    assert run(["realize", "--seed", "S7-8", "--spec", spec_path]) == ExitCode.USAGE


def test_realize_invalid_certificate_exits_certification():
    """Test a certificate failing model validation exits with the certification code."""
    skewed = lambda **kw: RealizationCertificate(**{**kw, "n": kw["n"] + 1})
    certify_module = importlib.import_module("src.realization.certify")
    with patch.object(certify_module, "RealizationCertificate", side_effect=skewed):
        assert run(["realize", "--seed", "S7-8", "--oracle-max-n", "0"]) == ExitCode.CERTIFICATION


def test_verify_suite(capsys):
    """Test a passing suite exits 0 and reports its checks."""
    assert run(["verify", "--suite", "exclusivity", "--samples", "10", "--seed", "7"]) == ExitCode.OK
    report = _output(capsys)["report"]
    assert report["passed"]
    assert report["checks"] == 10


def test_probe_without_samples(capsys):
    """Test zero samples give an empty histogram."""
    assert run(["probe", "--tree", "S7-8", "--samples", "0"]) == ExitCode.OK
    report = _output(capsys)["report"]
    assert report["histogram"] == {}
    assert report["n"] == 32


def test_probe_output_deterministic(capsys):
    """Test identical inputs give byte-identical output across thread counts."""
    outputs = []
    for threads in ("1", "2"):
        argv = ["probe", "--tree", "forest-T1T3", "--samples", "3", "--seed", "4", "--tol", "0"]
        assert run(argv + ["--threads", threads]) == ExitCode.OK
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]
    assert json.loads(outputs[0])["report"]["min_distinct_found"] >= 6


def test_probe_forest_reports_property_c(capsys):
    """Test the forest target carries component and union distinct counts."""
    argv = ["probe", "--tree", "forest-T1T3", "--samples", "3", "--seed", "0", "--tol", "0"]
    assert run(argv) == ExitCode.OK
    payload = _output(capsys)
    evidence = payload["property_c"]
    assert evidence["component_distinct"] == {"double-broom": 5, "double-broom-plus-pendant": 5}
    assert evidence["union_distinct"] == 6
    assert evidence["passed"]
    assert "probe" not in evidence
    assert payload["report"]["designed_sample_distinct"] == 6


def test_charpoly(broom_file, capsys):
    """Test polynomial coefficients and Sturm queries."""
    argv = ["charpoly", broom_file, "--count-in", "0", "3", "--multiplicity-at", "0", "--spectrum"]
    assert run(argv) == ExitCode.OK
    payload = _output(capsys)
    assert payload["coefficients"] == ["0", "0", "0", "9", "0", "-10", "0", "1"]
    assert payload["distinct_count"] == 5
    assert payload["count_in"] == {"interval": ["0", "3"], "with_multiplicity": 2, "distinct": 2}
    assert payload["multiplicity_at"]["multiplicity"] == 3
    assert payload["spectrum"] == pytest.approx([-3, -1, 0, 0, 0, 1, 3], abs=1e-8)


def test_text_format(broom_file, capsys):
    """Test text output flattens the payload."""
    assert run(["diag", broom_file, "--at", "2", "--format", "text"]) == ExitCode.OK
    lines = capsys.readouterr().out.splitlines()
    assert 'command: "diag"' in lines
    assert 'outcome.root_values.6: "10/3"' in lines


def test_command_config_validation():
    """Test the diag point must be given exactly once."""
    with pytest.raises(ValueError):
        CommandConfig(subcommand="diag")
    assert CommandConfig(subcommand="diag", at="1").at == "1"


def test_parser_lists_subcommands():
    """Test every subcommand is registered."""
    parser = build_parser()
    for command in ("diag", "realize", "verify", "probe", "charpoly"):
        assert parser.parse_args(
            {
                "diag": ["diag", "m.json", "--at", "0"],
                "realize": ["realize", "--seed", "S7-9"],
                "verify": ["verify", "--suite", "lemma41"],
                "probe": ["probe", "--tree", "S7-7"],
                "charpoly": ["charpoly", "m.json"],
            }[command]
        ).command == command


def test_main_loads_dotenv(capsys):
    """Test the entry point loads .env and exits with the command's code."""
    with patch.object(importlib.import_module("src.cli.main"), "load_dotenv") as mock_load:
        with pytest.raises(SystemExit) as exc:
            main(["verify", "--suite", "exclusivity", "--samples", "4"])
    mock_load.assert_called_once()
    assert exc.value.code == ExitCode.OK
    assert _output(capsys)["command"] == "verify"
