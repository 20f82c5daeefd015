"""Command-line interface tests (in-process, via main())."""

import json

import pytest

from qcdesign.cli import EXIT_CONFIG, EXIT_OK, EXIT_PARSE, EXIT_RUNTIME, main


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _small_config(tmp_path, **extra):
    payload = {
        "plan": {"measurements_per_level": 200},
        "replicates": 4,
        "ga": {"population": 10, "generations": 1},
    }
    payload.update(extra)
    path = tmp_path / "job.json"
    path.write_text(json.dumps(payload))
    return str(path)


def test_critical_errors_doc(capsys):
    code, out, _ = _run(capsys, "critical-errors")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["critical_random_error"] == pytest.approx(2.313, abs=0.001)
    assert doc["critical_systematic_error"] == pytest.approx(3.495, abs=0.001)


def test_critical_errors_csv(capsys):
    code, out, _ = _run(capsys, "--format", "csv", "critical-errors")
    assert code == EXIT_OK
    header, row = out.strip().splitlines()
    assert header == "k_re,delta_se"
    assert row == "2.313,3.495"


def test_evaluate_known_procedure(capsys):
    code, out, _ = _run(capsys, "evaluate", "1_2.4s")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["p_re"] == pytest.approx(0.5063, abs=0.05)
    assert doc["p_se"] == pytest.approx(0.9798, abs=0.03)
    assert doc["p_fr"] == pytest.approx(0.0312, abs=0.02)
    assert doc["seed"] == 12345


def test_evaluate_none_procedure(capsys):
    code, out, _ = _run(capsys, "evaluate", "NONE")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert (doc["p_re"], doc["p_se"], doc["p_fr"]) == (0.0, 0.0, 0.0)


def test_evaluate_parse_error_exit_code(capsys):
    code, _, err = _run(capsys, "evaluate", "Q(1,2.0)")
    assert code == EXIT_PARSE
    assert "parse error" in err


def test_config_error_exit_code(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"nope": 1}')
    code, _, err = _run(capsys, "--config", str(path), "critical-errors")
    assert code == EXIT_CONFIG
    assert "config error" in err


def test_infeasible_assay_exit_code(capsys, tmp_path):
    path = tmp_path / "job.json"
    path.write_text('{"assay": {"sd": 1.0, "bias": 0.0, "tea": 1.0}}')
    code, _, err = _run(capsys, "--config", str(path), "critical-errors")
    assert code == EXIT_RUNTIME
    assert "error" in err


def test_bad_threads_rejected(capsys):
    code, _, err = _run(capsys, "--threads", "0", "critical-errors")
    assert code == EXIT_CONFIG


def test_list_library_csv(capsys):
    code, out, _ = _run(capsys, "--format", "csv", "list-library")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "name,source,note"
    assert any(line.startswith("1_2.4s,builtin") for line in lines)


def test_list_library_includes_user_file(capsys, tmp_path):
    extra = tmp_path / "extra.txt"
    extra.write_text("my pair = M(2,1.9)\n")
    cfg = tmp_path / "job.json"
    cfg.write_text(json.dumps({"library_files": [str(extra)]}))
    code, out, _ = _run(capsys, "--config", str(cfg), "list-library")
    assert code == EXIT_OK
    names = [e["name"] for e in json.loads(out)["entries"]]
    assert "my pair" in names


def test_seed_override_changes_report(capsys):
    _, out_a, _ = _run(capsys, "--seed", "1", "evaluate", "1_2.4s")
    _, out_b, _ = _run(capsys, "--seed", "2", "evaluate", "1_2.4s")
    assert json.loads(out_a)["seed"] == 1
    assert json.loads(out_b)["seed"] == 2


def test_seed_env_override(capsys, monkeypatch):
    monkeypatch.setenv("QCDESIGN_SEED", "777")
    _, out, _ = _run(capsys, "evaluate", "1_2.4s")
    assert json.loads(out)["seed"] == 777
    # an explicit flag wins over the environment
    _, out, _ = _run(capsys, "--seed", "5", "evaluate", "1_2.4s")
    assert json.loads(out)["seed"] == 5


def test_output_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = _run(capsys, "--out", str(target), "critical-errors")
    assert code == EXIT_OK
    assert out == ""
    assert json.loads(target.read_text())["critical_random_error"] == pytest.approx(
        2.313, abs=0.001
    )


def test_compare_outputs_ranked_rows(capsys, tmp_path):
    cfg = _small_config(tmp_path)
    code, out, _ = _run(
        capsys, "--config", cfg, "compare", "S(1,2.7) OR M(2,1.9)"
    )
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["replicates"] == 4
    names = [row["procedure"] for row in doc["rows"]]
    assert "S(1,2.7) OR M(2,1.9)" in names
    f1s = [row["mean_f1"] for row in doc["rows"]]
    assert f1s == sorted(f1s)
    assert doc["rows"][0]["sign_p_vs_top"] is None


def test_compare_needs_two_procedures(monkeypatch):
    import qcdesign.cli as cli_mod
    from qcdesign.config import load_config
    from qcdesign.errors import ConfigError

    monkeypatch.setattr(cli_mod, "builtin_library", lambda: [])
    with pytest.raises(ConfigError):
        cli_mod.cmd_compare(load_config(None), ["1_2.4s"])


def test_design_small_run(capsys, tmp_path):
    cfg = _small_config(tmp_path)
    code, out, _ = _run(capsys, "--config", cfg, "design")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["ga"]["population"] == 10
    assert len(doc["generation_log"]) == 2
    assert doc["best"]


def test_design_csv_format(capsys, tmp_path):
    cfg = _small_config(tmp_path)
    code, out, _ = _run(capsys, "--config", cfg, "--format", "csv", "design")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "generation,procedure,f,p_re,p_se,p_fr"
    assert len(lines) == 3


def test_repeat_runs_byte_identical(capsys, tmp_path):
    cfg = _small_config(tmp_path)
    _, first, _ = _run(capsys, "--config", cfg, "compare")
    _, second, _ = _run(capsys, "--config", cfg, "compare")
    assert first == second
