# test_cli.py
"""
Command line surface and exit codes.
"""

import json

import pytest

from cli import main


@pytest.fixture
def config_file(tmp_path, run_config_dict):
    path = tmp_path / "run.json"
    path.write_text(json.dumps(run_config_dict, indent=2))
    return path


# ============================================================================
# Parser and exit codes
# ============================================================================

def test_help_and_version(capsys):
    assert main(["--help"]) == 0
    assert "verify-positivity" in capsys.readouterr().out
    assert main(["--version"]) == 0
    assert "horizonlab" in capsys.readouterr().out


def test_usage_errors_exit_2(tmp_path):
    assert main([]) == 2
    assert main(["derive-laws", "--l", "1", "--bogus"]) == 2
    assert main(["derive-laws", "--l", "-1"]) == 2
    assert main(["--log-level", "LOUD", "derive-laws", "--l", "0"]) == 2
    assert main(["run", str(tmp_path / "missing.json")]) == 2


def test_invalid_config_exits_2(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"background": {"charge_ratio": 1.2}}')
    assert main(["run", str(path)]) == 2
    err = capsys.readouterr().err
    assert "background.charge_ratio" in err
    assert "charge_ratio must lie in [0,1]" in err


# ============================================================================
# derive-laws
# ============================================================================

def test_derive_laws_table(capsys):
    assert main(["derive-laws", "--l", "1"]) == 0
    out = capsys.readouterr().out
    assert "1/M^2" in out
    assert "3/M" in out


def test_derive_laws_json(capsys):
    assert main(["derive-laws", "--l", "1", "--mass", "2", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["betas"][1]["numerator"] == 3
    assert payload["betas"][1]["decimal"] == pytest.approx(1.5)


# ============================================================================
# verify-positivity
# ============================================================================

def test_verify_positivity_pass_with_csv(tmp_path, capsys):
    csv_path = tmp_path / "n_mod.csv"
    code = main([
        "verify-positivity", "--multiplier", "N_mod",
        "--rmin", "1.0", "--rmax", "1.125", "--samples", "2000",
        "--csv", str(csv_path),
    ])
    assert code == 0
    assert capsys.readouterr().out.startswith("PASS N_mod")
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "r,eig_min,eig_max"
    assert len(lines) == 2001


def test_verify_positivity_fail_exits_1(capsys):
    code = main([
        "verify-positivity", "--multiplier", "L", "--commuted", "--l", "0",
        "--rmin", "1.0", "--rmax", "1.01", "--samples", "200",
    ])
    assert code == 1
    assert capsys.readouterr().out.startswith("FAIL L")


def test_verify_positivity_domain_error_exits_2():
    code = main([
        "verify-positivity", "--multiplier", "P", "--charge-ratio", "0.8",
        "--rmin", "1.7", "--rmax", "2.0",
    ])
    assert code == 2


def test_verify_positivity_multiplier_params(capsys):
    code = main([
        "verify-positivity", "--multiplier", "X_alpha", "--param", "alpha=2.0",
        "--rmin", "1.5", "--rmax", "3.0", "--samples", "100", "--l", "0",
    ])
    assert code in (0, 1)
    assert "X_alpha" in capsys.readouterr().out
    assert main([
        "verify-positivity", "--multiplier", "X_alpha", "--param", "alpha",
        "--rmin", "1.5", "--rmax", "3.0",
    ]) == 2


# ============================================================================
# evolve, analyze, run
# ============================================================================

def test_evolve_then_analyze(tmp_path, config_file, capsys):
    run_dir = tmp_path / "evolved"
    assert main(["evolve", "--config", str(config_file), "--out", str(run_dir)]) == 0
    assert (run_dir / "run_meta.json").is_file()
    capsys.readouterr()

    assert main(["analyze", "--run", str(run_dir), "--check", "hardy"]) == 0
    verdict = json.loads(capsys.readouterr().out)
    assert verdict["check"] == "hardy"
    assert verdict["pass"] is True
    assert (run_dir / "hardy.json").is_file()
    assert (run_dir / "hardy.csv").is_file()


def test_analyze_tolerance_override_can_fail(tmp_path, config_file):
    run_dir = tmp_path / "evolved"
    assert main(["evolve", "--config", str(config_file), "--out", str(run_dir)]) == 0
    code = main([
        "analyze", "--run", str(run_dir), "--check", "hardy",
        "--param", "tolerance=0.0", "--out", str(tmp_path / "verdicts"),
    ])
    assert code == 1
    assert (tmp_path / "verdicts" / "hardy.json").is_file()


def test_analyze_requires_run_directory(tmp_path):
    assert main(["analyze", "--run", str(tmp_path), "--check", "hardy"]) == 2


def test_run_command(tmp_path, config_file, capsys):
    out_dir = tmp_path / "full"
    assert main(["run", str(config_file), "--out", str(out_dir)]) == 0
    assert "files written" in capsys.readouterr().out
    assert (out_dir / "manifest.json").is_file()


def test_run_command_reports_failed_stage(tmp_path, run_config_dict):
    run_config_dict["initial_data"]["center"] = 11.5
    path = tmp_path / "undecayed.json"
    path.write_text(json.dumps(run_config_dict))
    assert main(["run", str(path), "--out", str(tmp_path / "failed")]) == 1


@pytest.mark.slow
def test_convergence_command(tmp_path, run_config_dict, capsys):
    run_config_dict["grid"] = {"r_max": 20.0, "n_points": 381}
    run_config_dict["evolution"] = {"t_final": 15.0, "output_every": 5.0}
    path = tmp_path / "conv.json"
    path.write_text(json.dumps(run_config_dict))
    code = main(["convergence", "--config", str(path), "--min-order", "1.5"])
    out = capsys.readouterr().out
    assert "levels (n_points): [381, 761, 1521]" in out
    assert "horizon_psi" in out
    assert ("PASS all observed orders >= 1.5" in out) == (code == 0)
