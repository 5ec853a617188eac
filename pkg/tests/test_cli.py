"""
End-to-end tests of the grbf-spectrum subcommands, run in-process through run_cli
"""

import json

import numpy as np
import pandas as pd
import pytest

from grbf_spectrum import __version__
from grbf_spectrum.cli import run_cli
from grbf_spectrum.model import load_model

pytestmark = pytest.mark.cli


@pytest.fixture(autouse=True)
def isolated_config_dir(monkeypatch, tmp_path):
    config_dir = tmp_path / "config"
    monkeypatch.setenv("GRBF_SPECTRUM_CONFIG_DIR", str(config_dir))
    monkeypatch.delenv("GRBF_SPECTRUM_THREADS", raising=False)
    return config_dir


def _run(*argv) -> int:
    return run_cli([str(arg) for arg in argv])


def _synth(tmp_path, problem, n, *extra, name="data.csv"):
    path = tmp_path / name
    assert _run("synth", problem, "--n", n, "--seed", 1, "--out", path, *extra) == 0
    return path


def test_synth_writes_csv_and_manifest(tmp_path, capsys):
    path = _synth(tmp_path, "p1", 100)

    frame = pd.read_csv(path)
    assert frame.shape == (100, 11)
    assert list(frame.columns) == [f"x{j}" for j in range(1, 11)] + ["y"]
    assert sorted(frame["y"].unique()) == [-1, 1]
    manifest = json.loads((tmp_path / "data.csv.manifest.json").read_text(encoding="utf-8"))
    assert manifest["command"] == "synth"
    assert manifest["metrics"]["relevant_features"] == ["x1", "x2", "x3", "x4"]
    assert str(path) in capsys.readouterr().out


def test_synth_is_byte_identical_for_a_seed(tmp_path):
    first = _synth(tmp_path, "p2", 50, name="first.csv")
    second = _synth(tmp_path, "p2", 50, name="second.csv")

    assert first.read_bytes() == second.read_bytes()


def test_synth_parameters(tmp_path):
    path = _synth(tmp_path, "sine_ridge", 20, "--a", 1.0, "--b", 0.0, "--noise", 0.0)
    assert pd.read_csv(path).shape == (20, 3)

    assert _run("synth", "p1", "--out", tmp_path / "bad.csv", "--noise", 0.1) == 1
    assert _run("synth", "moons", "--out", tmp_path / "bad.csv", "--a", 1.0) == 1


def test_usage_errors_exit_with_two(tmp_path):
    assert _run("synth", "spiral", "--out", tmp_path / "x.csv") == 2
    assert _run("train", tmp_path / "x.csv", "--model-out", tmp_path / "m.json", "--epochs", 0) == 2
    assert _run("gradcheck", "--mode", "fixed") == 2
    assert _run() == 2


def test_version_and_paths(capsys, isolated_config_dir):
    assert _run("--version") == 0
    assert __version__ in capsys.readouterr().out

    assert _run("--print-paths") == 0
    out = capsys.readouterr().out
    assert f"config_dir={isolated_config_dir}" in out
    assert "threads=1" in out


def test_train_then_predict_reproduces_training_accuracy(tmp_path, capsys):
    data = _synth(tmp_path, "two_gaussians", 200)
    model_path = tmp_path / "model.json"

    assert (
        _run(
            "train", data, "--task", "binary", "--centers", 4, "--epochs", 200,
            "--lr", 0.01, "--model-out", model_path,
        )
        == 0
    )
    train_line = capsys.readouterr().out.strip().splitlines()[-1]
    assert train_line.startswith("train accuracy: ")
    assert (tmp_path / "model.trace.csv").exists()
    assert (tmp_path / "model.json.manifest.json").exists()
    model = load_model(model_path)
    assert model.is_fitted and model.task == "binary"

    out = tmp_path / "predictions.csv"
    assert _run("predict", model_path, data, "--out", out) == 0
    predict_line = capsys.readouterr().out.strip().splitlines()[-1]
    assert predict_line == train_line.removeprefix("train ")

    predictions = pd.read_csv(out)
    assert list(predictions.columns) == ["prediction", "proba"]
    assert len(predictions) == 200
    assert set(predictions["prediction"]) <= {0, 1}


def test_train_respects_config_file(tmp_path):
    data = _synth(tmp_path, "sine_ridge", 60)
    config = tmp_path / "settings.yaml"
    config.write_text("train:\n  n_centers: 3\n  max_epochs: 5\n  lambda_w: 1e-2\n", encoding="utf-8")
    model_path = tmp_path / "model.json"

    assert _run("train", data, "--config", config, "--centers", 5, "--model-out", model_path) == 0

    model = load_model(model_path)
    assert model.n_centers == 5
    assert model.train_config["max_epochs"] == 5
    assert model.train_config["reg"]["lambda_w"] == 0.01


def test_defaults_file_in_config_dir_is_used(tmp_path, isolated_config_dir):
    isolated_config_dir.mkdir()
    (isolated_config_dir / "defaults.yaml").write_text(
        "train:\n  n_centers: 2\n  max_epochs: 3\n", encoding="utf-8"
    )
    data = _synth(tmp_path, "sine_ridge", 30)
    model_path = tmp_path / "model.json"

    assert _run("train", data, "--model-out", model_path) == 0

    assert load_model(model_path).n_centers == 2


def test_analyze_exports_spectral_tables(tmp_path, capsys):
    data = _synth(tmp_path, "sine_ridge", 200, "--a", 1.0, "--b", 0.0)
    model_path = tmp_path / "model.json"
    assert (
        _run(
            "train", data, "--centers", 8, "--epochs", 300, "--lr", 0.01,
            "--model-out", model_path,
        )
        == 0
    )
    out_dir = tmp_path / "analysis"

    assert (
        _run("analyze", model_path, data, "--out-dir", out_dir, "--resolution", 10, "--relevant", "1")
        == 0
    )

    out = capsys.readouterr().out
    assert "gamma_1/sum(gamma): " in out
    assert "relevant features in top 1" in out
    importance = pd.read_csv(out_dir / "importance.csv")
    assert list(importance.columns) == [
        "feature", "score", "rank", "component_1", "component_2",
    ]
    np.testing.assert_allclose(
        importance[["component_1", "component_2"]].sum(axis=1), importance["score"], atol=1e-12
    )
    assert importance["score"].max() == 1.0
    assert sorted(importance["rank"]) == [1, 2]
    eigenvalues = pd.read_csv(out_dir / "eigenvalues.csv")
    assert list(eigenvalues.columns) == [
        "k", "gamma", "decay", "cumulative", "v_x1", "v_x2",
    ]
    assert eigenvalues["gamma"].is_monotonic_decreasing
    assert list(eigenvalues["k"]) == [1, 2]
    projection = pd.read_csv(out_dir / "projection.csv")
    assert len(projection) == 200
    assert list(projection.columns)[-1] == "target"
    assert list(projection.columns)[0] == "z1"
    np.testing.assert_array_equal(projection["target"], pd.read_csv(data)["y"])
    surface = pd.read_csv(out_dir / "surface.csv")
    assert list(surface.columns) == ["z1", "z2", "f"]
    assert len(surface) == 100
    assert (out_dir / "importance.csv.manifest.json").exists()


def test_analyze_rejects_mismatched_data(tmp_path):
    data = _synth(tmp_path, "sine_ridge", 40)
    other = _synth(tmp_path, "p3", 40, name="p3.csv")
    model_path = tmp_path / "model.json"
    assert _run("train", data, "--centers", 2, "--epochs", 5, "--model-out", model_path) == 0

    assert _run("analyze", model_path, other, "--out-dir", tmp_path / "out") == 1


def test_cv_writes_results_summary_and_best(tmp_path, capsys):
    data = _synth(tmp_path, "moons", 60)
    out_dir = tmp_path / "cv"

    code = _run(
        "cv", data, "--task", "binary", "--centers", 2, "--lambda-w", 0, 0.1,
        "--folds", 3, "--seeds", 2, "--epochs", 10, "--out-dir", out_dir,
    )

    assert code == 0
    results = pd.read_csv(out_dir / "results.csv")
    assert len(results) == 2 * 2 * 3
    assert set(results["seed"]) == {0, 1}
    assert len(pd.read_csv(out_dir / "summary.csv")) == 2
    heat = pd.read_csv(out_dir / "heatmap.csv")
    assert list(heat.columns) == ["lambda_w", "lambda_u=0"]
    best = json.loads((out_dir / "best.json").read_text(encoding="utf-8"))
    assert best["metric"] == "accuracy"
    assert best["config_index"] in (0, 1)
    assert (out_dir / "results.csv.manifest.json").exists()
    assert "best config #" in capsys.readouterr().out


def test_gradcheck_learn_mode_checks_centers(tmp_path, capsys):
    report = tmp_path / "report.txt"

    assert _run("gradcheck", "--mode", "learn", "--outputs", 2, "--out", report) == 0

    out = capsys.readouterr().out
    assert "c\t" in out
    assert "PASS" in out
    assert report.exists()
    assert (tmp_path / "report.txt.manifest.json").exists()


def test_headerless_predict_input_fails(tmp_path):
    data = _synth(tmp_path, "sine_ridge", 30)
    model_path = tmp_path / "model.json"
    assert _run("train", data, "--centers", 2, "--epochs", 5, "--model-out", model_path) == 0
    headerless = tmp_path / "headerless.csv"
    headerless.write_text("0.1,0.2\n0.3,0.4\n", encoding="utf-8")

    assert _run("predict", model_path, headerless, "--out", tmp_path / "p.csv") == 1
    assert _run("predict", tmp_path / "missing.json", data, "--out", tmp_path / "p.csv") == 1
