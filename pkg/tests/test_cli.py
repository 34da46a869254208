import json
from pathlib import Path

import pytest

from renyi_quant.cli import main

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def write_config(tmp_path, obj, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return path


UNIFORM_CFG = {
    "source": {"family": "uniform", "a": 0.0, "b": 1.0},
    "alpha": 0.5,
    "r": 2.0,
    "n_grid": [4, 8, 16, 32],
    "tolerances": {"ratio": 1e-8},
}


def test_predict_prints_q(tmp_path, capsys):
    path = write_config(tmp_path, {"source": UNIFORM_CFG["source"], "alpha": 0.5, "r": 2.0},
                        name="uniform.json")
    code = main(["predict", "--config", str(path)])
    out = capsys.readouterr().out
    assert code == 0
    values = dict(
        line.split(" = ") for line in out.strip().splitlines() if " = " in line
    )
    assert values["Q"] == "0.0833333333"
    assert float(values["beta1"]) == pytest.approx(0.6)
    assert float(values["beta2"]) == pytest.approx(5.0)


def test_predict_matches_theory_exactly(tmp_path, capsys):
    path = write_config(
        tmp_path,
        {"source": {"family": "gaussian", "mean": 0.0, "sigma": 1.0}, "alpha": 0.5, "r": 2.0},
    )
    main(["predict", "--config", str(path)])
    out = capsys.readouterr().out
    values = dict(line.split(" = ") for line in out.strip().splitlines())
    from renyi_quant import Gaussian, quantization_coefficient

    expected = quantization_coefficient(Gaussian(0.0, 1.0), 0.5, 2.0)
    assert values["Q"] == format(expected, ".9g")


def test_asymptotics_writes_reports(tmp_path, capsys):
    path = write_config(tmp_path, dict(UNIFORM_CFG, name="uniform_run"), name="u.json")
    out_dir = tmp_path / "out"
    code = main(["asymptotics", "--config", str(path), "--output-dir", str(out_dir)])
    assert code == 0
    csv_path = out_dir / "uniform_run.csv"
    summary_path = out_dir / "uniform_run_summary.json"
    assert csv_path.exists() and summary_path.exists()
    summary = json.loads(summary_path.read_text())
    assert summary["passed"] is True
    header = csv_path.read_text().splitlines()[0]
    assert header.split(",")[:5] == ["n", "H_alpha", "D", "eRH_D", "ratio"]


def test_mismatch_summary_contains_limit(tmp_path):
    cfg = {
        "source": {"family": "uniform", "a": 0.0, "b": 1.0},
        "mismatch_source": {"family": "uniform", "a": 0.0, "b": 0.5},
        "alpha": 0.5,
        "r": 2.0,
        "n_grid": [4, 8, 16, 32],
        "tolerances": {"shift_abs": 0.02, "distortion_rel": 0.05},
    }
    path = write_config(tmp_path, cfg, name="mismatch_uniform.json")
    code = main(["mismatch", "--config", str(path), "--output-dir", str(tmp_path)])
    assert code == 0
    summary = json.loads((tmp_path / "mismatch_uniform_summary.json").read_text())
    assert summary["limits"]["mismatch_distortion_limit"] == pytest.approx(
        0.0208333333, rel=1e-6
    )


def test_exit_code_1_on_missing_config(tmp_path, capsys):
    code = main(["asymptotics", "--config", str(tmp_path / "nope.json")])
    assert code == 1
    assert "nope.json" in capsys.readouterr().err


def test_exit_code_1_names_offending_field(tmp_path, capsys):
    path = write_config(tmp_path, {"source": UNIFORM_CFG["source"], "r": 2.0})
    code = main(["asymptotics", "--config", str(path)])
    err = capsys.readouterr().err
    assert code == 1
    assert "alpha" in err


def test_exit_code_1_on_hypothesis_violation(tmp_path, capsys):
    cfg = {
        "source": {"family": "gaussian", "mean": 0.0, "sigma": 1.0},
        "mismatch_source": {"family": "gaussian", "mean": 0.0, "sigma": 2.0},
        "alpha": 0.5,
        "r": 2.0,
        "n_grid": [4, 8],
    }
    path = write_config(tmp_path, cfg)
    code = main(["mismatch", "--config", str(path), "--output-dir", str(tmp_path)])
    assert code == 1
    assert "unbounded" in capsys.readouterr().err


def test_exit_code_2_on_tolerance_failure(tmp_path, capsys):
    # a coarse grid cannot reach a 1e-6 ratio tolerance for the gaussian source
    cfg = {
        "source": {"family": "gaussian", "mean": 0.0, "sigma": 1.0},
        "alpha": 0.5,
        "r": 2.0,
        "n_grid": [4, 8],
        "tolerances": {"ratio": 1e-6},
    }
    path = write_config(tmp_path, cfg, name="strict.json")
    code = main(["asymptotics", "--config", str(path), "--output-dir", str(tmp_path)])
    assert code == 2
    # CSV is still written with identical content semantics
    assert (tmp_path / "strict.csv").exists()


def test_overrides(tmp_path, capsys):
    path = write_config(tmp_path, {"source": UNIFORM_CFG["source"], "alpha": 0.5, "r": 2.0})
    code = main([
        "predict",
        "--config", str(path),
        "--set", "alpha=0.0",
        "--set", "source.b=2.0",
    ])
    out = capsys.readouterr().out
    assert code == 0
    values = dict(line.split(" = ") for line in out.strip().splitlines())
    assert float(values["alpha"]) == 0.0
    assert float(values["beta1"]) == pytest.approx(1.0 / 3.0)
    # uniform span 2 at alpha 0, r 2: Q = (1/12) * (2^(2/3))^3 = 1/3
    assert float(values["Q"]) == pytest.approx(1.0 / 3.0, rel=1e-9)


def test_sanity_subcommand(tmp_path):
    cfg = {
        "source": {"family": "gaussian", "mean": 0.0, "sigma": 1.0},
        "alpha": 0.5,
        "r": 2.0,
        "interval": [0.0, 1.0],
        "n_grid": [8, 16, 32, 64],
        # the 3-nat divergence floor belongs to the full-depth sweep
        "tolerances": {"restricted_entropy_min": 0.5},
    }
    path = write_config(tmp_path, cfg, name="sanity_run.json")
    code = main(["sanity", "--config", str(path), "--output-dir", str(tmp_path)])
    assert code == 0
    header = (tmp_path / "sanity_run.csv").read_text().splitlines()[0]
    assert "max_cell_probability" in header
    assert "single_cell_ratio_p0" in header


def test_lemma_check_passes(capsys):
    code = main(["lemma-check", "--trials", "25"])
    out = capsys.readouterr().out
    assert code == 0
    assert "split-bound-strict-minimizer: PASS" in out
    assert "point-density-minimizer: PASS" in out


def test_checked_in_predict_config(capsys):
    code = main(["predict", "--config", str(CONFIG_DIR / "uniform_predict.json")])
    assert code == 0
    assert "Q = 0.0833333333" in capsys.readouterr().out
