"""Command-line interface: flags, config files, exit codes, artifacts."""

import subprocess
import sys

import pytest


def run_cli(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "fractime.cli", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
        timeout=300,
    )


def test_ml_eval_prints_euler_number(tmp_path):
    res = run_cli("ml-eval", "--alpha", "1", "--z", "1", "--out", str(tmp_path))
    assert res.returncode == 0
    assert "2.7182818285" in res.stdout
    assert (tmp_path / "ml.csv").exists()


def test_ml_alias_matches_full_name(tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    a = run_cli("ml", "--alpha", "0.5", "--z", "-1", "--out", str(out_a))
    b = run_cli("ml-eval", "--alpha", "0.5", "--z", "-1", "--out", str(out_b))
    assert a.returncode == 0 and b.returncode == 0
    assert "0.4275835762" in a.stdout
    assert (out_a / "ml.csv").read_bytes() == (out_b / "ml.csv").read_bytes()


def test_ml_requires_z(tmp_path):
    res = run_cli("ml", "--out", str(tmp_path))
    assert res.returncode == 2
    assert "z is required" in res.stderr


def test_alpha_outside_unit_interval_is_rejected(tmp_path):
    res = run_cli("frac-deriv", "--alpha", "1.5", "--out", str(tmp_path))
    assert res.returncode == 2
    assert "alpha must lie in (0,1)" in res.stderr


def test_frac_deriv_passes_power_rule_check(tmp_path):
    res = run_cli(
        "frac-deriv", "--alpha", "0.5", "--n", "512", "--out", str(tmp_path)
    )
    assert res.returncode == 0
    assert "check [PASS]" in res.stdout
    assert "FAIL" not in res.stdout
    header = (tmp_path / "frac_deriv.csv").read_text().splitlines()[0]
    assert header == "t,left,right"


def test_solve_fde_oscillator_oracle_check(tmp_path):
    res = run_cli(
        "solve-fde",
        "--alpha", "0.5",
        "--b", "1",
        "--n", "1024",
        "--system", "harmonic",
        "--out", str(tmp_path),
    )
    assert res.returncode == 0
    assert "Mittag-Leffler oscillator" in res.stdout
    assert (tmp_path / "solution.csv").exists()
    assert (tmp_path / "solution.csv.meta").exists()


def test_system_parsing_accepts_parameters(tmp_path):
    res = run_cli(
        "solve-fde",
        "--system", "harmonic(m=2, omega=0.5)",
        "--b", "1",
        "--n", "128",
        "--out", str(tmp_path),
    )
    assert res.returncode == 0
    res2 = run_cli(
        "solve-fde",
        "--system", "quartic(lambda=2)",
        "--b", "1",
        "--n", "128",
        "--out", str(tmp_path),
    )
    assert res2.returncode == 0


def test_unknown_system_is_rejected(tmp_path):
    res = run_cli("solve-fde", "--system", "pendulum", "--out", str(tmp_path))
    assert res.returncode == 2
    assert "unknown system" in res.stderr


def test_subordinator_writes_paths_and_stats(tmp_path):
    res = run_cli(
        "subordinator",
        "--b", "1",
        "--n", "8",
        "--m-paths", "500",
        "--out", str(tmp_path),
    )
    assert res.returncode == 0
    paths_header = (tmp_path / "subordinator_paths.csv").read_text().splitlines()[0]
    assert paths_header.startswith("t,path0")
    stats_header = (tmp_path / "subordinator_stats.csv").read_text().splitlines()[0]
    assert stats_header == "t,mean,stderr"


def test_subordinator_requires_zero_origin(tmp_path):
    res = run_cli("subordinator", "--a", "0.5", "--out", str(tmp_path))
    assert res.returncode == 2
    assert "a must be 0" in res.stderr


def test_config_file_fills_defaults_and_flags_win(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("alpha=0.3\nn=256\nseed=11\n")
    res = run_cli(
        "frac-deriv", "--config", str(cfg), "--alpha", "0.5", "--out", str(tmp_path)
    )
    assert res.returncode == 0
    assert "alpha = 0.5" in res.stdout
    assert "n = 256" in res.stdout
    assert "seed = 11" in res.stdout


def test_unknown_config_key_is_rejected(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("bogus=1\n")
    res = run_cli("ml", "--z", "1", "--config", str(cfg), "--out", str(tmp_path))
    assert res.returncode == 2
    assert "unknown key 'bogus'" in res.stderr


def test_missing_config_file_is_reported(tmp_path):
    res = run_cli("ml", "--z", "1", "--config", str(tmp_path / "nope.cfg"))
    assert res.returncode == 2
    assert "config file not found" in res.stderr


def test_verify_coherence_defaults_pass(tmp_path):
    res = run_cli("verify-coherence", "--out", str(tmp_path))
    assert res.returncode == 0
    assert "causal residual small" in res.stdout
    assert "bitwise zero required" in res.stdout
    assert "overall: PASS" in res.stdout


def test_report_references_every_output_file(tmp_path):
    res = run_cli(
        "subordinator", "--b", "1", "--n", "4", "--m-paths", "100", "--out", str(tmp_path)
    )
    assert res.returncode == 0
    for name in ("subordinator_paths.csv", "subordinator_stats.csv"):
        assert (tmp_path / name).exists()
        assert name in res.stdout


def test_reruns_are_byte_identical(tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    args = ["subordinator", "--b", "1", "--n", "8", "--m-paths", "400", "--seed", "13"]
    assert run_cli(*args, "--out", str(out_a)).returncode == 0
    assert run_cli(*args, "--out", str(out_b)).returncode == 0
    for name in ("subordinator_paths.csv", "subordinator_stats.csv"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()


def test_scaling_limit_small_run(tmp_path):
    res = run_cli(
        "scaling-limit",
        "--c", "2000",
        "--m-paths", "2000",
        "--out", str(tmp_path),
    )
    assert res.returncode == 0
    header = (tmp_path / "scaling_limit.csv").read_text().splitlines()[0]
    assert header == "p,rescaled_counts_quantile,internal_time_quantile"


def test_stanislavsky_rejects_nonlinear_gradients(tmp_path):
    res = run_cli("verify-stanislavsky", "--system", "quartic", "--out", str(tmp_path))
    assert res.returncode == 2
    assert "linear gradients" in res.stderr
