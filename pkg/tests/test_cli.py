import json

import numpy as np
import pytest

from hdlab.cli import main


def run(args):
    return main([str(a) for a in args])


def test_bounds_single_value_prints(capsys):
    code = run(["bounds", "--thm", "3", "--n", "100", "--gamma", "0.2",
                "--delta", "0.25", "--output-dir", "out"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "120.114"


@pytest.fixture(autouse=True)
def _workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("HDLAB_OUTPUT_DIR", raising=False)
    return tmp_path


def _small_conc(outdir, extra=()):
    return run(["concentration", "--family", "gaussian", "--n", "20", "--c-ratio", "3",
                "--reps", "5", "--seed", "7", "--output-dir", outdir, *extra])


def test_concentration_emits_report_trio(tmp_path):
    assert _small_conc("conc") == 0
    out = tmp_path / "conc"
    for name in ("report.json", "replicates.csv", "hist.csv", "hist.png"):
        assert (out / name).exists(), name
    doc = json.loads((out / "report.json").read_text())
    assert doc["name"] == "concentration.condition_number"
    assert doc["params"]["width"] == 60
    assert len(doc["per_replicate"]) == 5
    lines = (out / "replicates.csv").read_text().splitlines()
    assert lines[0] == "replicate,value"
    assert len(lines) == 6


def test_no_figures_flag(tmp_path):
    assert _small_conc("conc", ["--no-figures"]) == 0
    assert not (tmp_path / "conc" / "hist.png").exists()
    assert (tmp_path / "conc" / "hist.csv").exists()


def test_format_json_only(tmp_path):
    assert _small_conc("conc", ["--format", "json"]) == 0
    out = tmp_path / "conc"
    assert (out / "report.json").exists()
    assert not (out / "replicates.csv").exists()
    assert not (out / "hist.png").exists()


def test_overwrite_refused_then_forced(tmp_path, capsys):
    assert _small_conc("conc") == 0
    assert _small_conc("conc") == 4
    assert "refusing to overwrite" in capsys.readouterr().err
    assert _small_conc("conc", ["--force"]) == 0


def test_spark_echoes_column_count(tmp_path):
    code = run(["spark", "--family", "gaussian", "--n", "100", "--p", "1000",
                "--trials", "5", "--reps", "3", "--seed", "7", "--output-dir", "spk"])
    assert code == 0
    doc = json.loads((tmp_path / "spk" / "report.json").read_text())
    assert doc["params"]["k"] == 29
    assert doc["name"] == "spark.min_singular"


def test_grassmann_tables(tmp_path):
    np.savetxt(tmp_path / "b1.csv", np.eye(4)[:, :2], delimiter=",")
    cols = np.zeros((4, 2))
    cols[0, 0] = 1.0
    cols[1, 1] = cols[2, 1] = 1.0 / np.sqrt(2.0)
    np.savetxt(tmp_path / "b2.csv", cols, delimiter=",")
    code = run(["grassmann", "--basis1", tmp_path / "b1.csv", "--basis2", tmp_path / "b2.csv",
                "--output-dir", "gr"])
    assert code == 0
    angle_lines = (tmp_path / "gr" / "angles.csv").read_text().splitlines()
    assert angle_lines[0] == "index,angle,cosine,sine"
    assert float(angle_lines[1].split(",")[1]) == pytest.approx(np.pi / 4, abs=1e-10)
    dist = dict(line.split(",") for line in
                (tmp_path / "gr" / "distances.csv").read_text().splitlines()[1:])
    assert float(dist["max_chordal"]) == pytest.approx(np.sqrt(0.5), abs=1e-10)
    assert float(dist["chordal_projector"]) == pytest.approx(np.sqrt(0.5), abs=1e-8)


def test_measure_grid(tmp_path):
    code = run(["measure", "--n", "10,20", "--s", "1,2",
                "--delta", "0.2,0.5", "--output-dir", "meas"])
    assert code == 0
    lines = (tmp_path / "meas" / "measure_bounds.csv").read_text().splitlines()
    assert lines[0] == "n,s,delta,log_lower,log_upper,log_leading"
    assert len(lines) == 9
    for line in lines[1:]:
        parts = line.split(",")
        assert float(parts[3]) <= float(parts[4])  # lower <= upper
    assert (tmp_path / "meas" / "measure_bounds.png").exists()


def test_measure_invalid_dimensions_numerical_exit(tmp_path, capsys):
    code = run(["measure", "--n", "4", "--s", "3",
                "--delta", "0.2", "--output-dir", "m2"])
    assert code == 3
    assert "numerical error" in capsys.readouterr().err


def test_bounds_grid_csv(tmp_path):
    code = run(["bounds", "--thm", "5exact", "--n", "5,10", "--r", "0.8",
                "--delta", "0.5,0.6", "--output-dir", "b5"])
    assert code == 0
    lines = (tmp_path / "b5" / "bounds.csv").read_text().splitlines()
    assert lines[0] == "n,r,delta,value"
    assert len(lines) == 5


def test_bounds_thm2(tmp_path, capsys):
    code = run(["bounds", "--thm", "2", "--n", "100", "--p", "1000",
                "--c-tilde", "2", "--output-dir", "b2"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "28.953"


def test_bounds_missing_grid_exit2(tmp_path, capsys):
    code = run(["bounds", "--thm", "3", "--n", "100", "--output-dir", "x"])
    assert code == 2
    assert "requires" in capsys.readouterr().err


def test_screen_outputs(tmp_path):
    code = run(["screen", "--family", "gaussian", "--n", "30", "--p", "60",
                "--support", "0,1", "--coefficients", "1", "--noise-sd", "0.5",
                "--d", "5,20,60", "--reps", "10", "--seed", "3",
                "--output-dir", "scr"])
    assert code == 0
    out = tmp_path / "scr"
    lines = (out / "frequencies.csv").read_text().splitlines()
    assert lines[0] == "d,frequency"
    assert lines[-1].startswith("60,")
    assert float(lines[-1].split(",")[1]) == 1.0  # d = p retains everything
    doc = json.loads((out / "report.json").read_text())
    assert doc["table"]["d"] == [5, 20, 60]
    assert (out / "frequencies.png").exists()


def test_validate_golden_flow(tmp_path, capsys):
    assert _small_conc("a") == 0
    assert _small_conc("b") == 0
    assert run(["validate-golden", "a", "b"]) == 0
    # seed change flips per-replicate values
    code = run(["concentration", "--family", "gaussian", "--n", "20", "--c-ratio", "3",
                "--reps", "5", "--seed", "8", "--output-dir", "c"])
    assert code == 0
    assert run(["validate-golden", "a", "c"]) == 1
    err_out = capsys.readouterr().out
    assert "per_replicate[0]" in err_out or "seed" in err_out
    # a tool_version-only difference is ignored
    doc = json.loads((tmp_path / "b" / "report.json").read_text())
    doc["tool_version"] = "nightly"
    (tmp_path / "b" / "report.json").write_text(json.dumps(doc, sort_keys=True, indent=2))
    assert run(["validate-golden", "a", "b"]) == 0


def test_validate_golden_missing_dir(tmp_path):
    assert run(["validate-golden", "nope1", "nope2"]) == 4


def test_config_file_supplies_defaults_and_flags_win(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("family = gaussian\nn = 20\nc-ratio = 3\nreps = 4\nseed = 5\n"
                   "# comment line\noutput-dir = fromcfg\n")
    assert run(["concentration", "--config", cfg]) == 0
    assert (tmp_path / "fromcfg" / "report.json").exists()
    assert run(["concentration", "--config", cfg, "--output-dir", "flagged",
                "--seed", "6"]) == 0
    doc = json.loads((tmp_path / "flagged" / "report.json").read_text())
    assert doc["seed"] == 6


def test_env_var_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("HDLAB_OUTPUT_DIR", str(tmp_path / "envout"))
    assert run(["concentration", "--family", "gaussian", "--n", "20", "--c-ratio", "3",
                "--reps", "3", "--seed", "7"]) == 0
    assert (tmp_path / "envout" / "report.json").exists()


def test_missing_seed_exit2(tmp_path, capsys):
    code = run(["concentration", "--family", "gaussian", "--n", "20"])
    assert code == 2
    assert "--seed" in capsys.readouterr().err


def test_unknown_family_exit2(tmp_path, capsys):
    code = run(["concentration", "--family", "cauchy", "--n", "20", "--seed", "1"])
    assert code == 2


def test_thread_flag_does_not_change_bytes(tmp_path):
    assert _small_conc("t1", ["--threads", "1"]) == 0
    assert _small_conc("t4", ["--threads", "4"]) == 0
    for name in ("report.json", "replicates.csv", "hist.csv", "hist.png"):
        assert (tmp_path / "t1" / name).read_bytes() == (tmp_path / "t4" / name).read_bytes()
