"""End-to-end command line checks through ``python -m orthomotion``."""

import csv
import io
import json
import os
import subprocess
import sys

import pytest

from orthomotion import __version__


def run_cli(*argv, env_extra=None):
    env = os.environ.copy()
    env.pop("ORTHOMOTION_SEED", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run([sys.executable, "-m", "orthomotion", *argv],
                          capture_output=True, text=True, env=env)


def parse_csv(text):
    rows = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(rows))))


def header_lines(text):
    return [ln for ln in text.splitlines() if ln.startswith("#")]


def test_version_flag():
    proc = run_cli("--version")
    assert proc.returncode == 0
    assert proc.stdout.strip() == f"orthomotion {__version__}"


def test_no_command_is_usage_error():
    assert run_cli().returncode == 2


# ---------------------------------------------------------------------------
# simulate


def test_simulate_is_deterministic_and_labeled():
    argv = ("simulate", "--variant", "reflecting", "--n", "200", "--seed", "42")
    a = run_cli(*argv)
    b = run_cli(*argv)
    assert a.returncode == 0
    assert a.stdout == b.stdout
    head = header_lines(a.stdout)
    assert head[0] == f"# orthomotion {__version__}"
    cfg = json.loads(head[1].removeprefix("# config: "))
    assert cfg["seed"] == 42 and cfg["spec"]["variant"] == "reflecting"
    rows = parse_csv(a.stdout)
    assert len(rows) == 200
    assert set(rows[0]) == {"path_id", "x", "y", "class"}
    for row in rows:
        assert abs(float(row["x"])) + abs(float(row["y"])) <= 1.0 + 1e-12


def test_simulate_n_zero_emits_header_only():
    proc = run_cli("simulate", "--n", "0")
    assert proc.returncode == 0
    assert parse_csv(proc.stdout) == []
    assert len(proc.stdout.splitlines()) == 3   # version, config, column header


def test_simulate_env_seed_matches_explicit_flag():
    via_env = run_cli("simulate", "--n", "50", env_extra={"ORTHOMOTION_SEED": "7"})
    via_flag = run_cli("simulate", "--n", "50", "--seed", "7")
    other = run_cli("simulate", "--n", "50", "--seed", "8")
    assert via_env.stdout == via_flag.stdout
    assert via_env.stdout != other.stdout


def test_simulate_divergent_rate_fails_cleanly():
    proc = run_cli("simulate", "--rate", "foong:1", "--n", "10")
    assert proc.returncode == 1
    assert "NonIntegrableRate" in proc.stderr


def test_simulate_garbage_rate_is_usage_error():
    proc = run_cli("simulate", "--rate", "banana", "--n", "10")
    assert proc.returncode == 2


def test_simulate_paths_rows_bracket_each_path():
    proc = run_cli("simulate", "--paths", "--n", "3", "--t", "2.0", "--seed", "1")
    assert proc.returncode == 0
    rows = parse_csv(proc.stdout)
    by_path = {}
    for row in rows:
        by_path.setdefault(row["path_id"], []).append(row)
    assert set(by_path) == {"0", "1", "2"}
    for rows_i in by_path.values():
        times = [float(r["t_event"]) for r in rows_i]
        assert times[0] == 0.0 and times[-1] == 2.0
        assert times == sorted(times)
        assert len({r["class"] for r in rows_i}) == 1
        assert all(r["direction"] in {"0", "1", "2", "3"} for r in rows_i)


def test_simulate_decomposition_endpoints_in_support():
    proc = run_cli("simulate", "--decomposition", "--n", "100", "--seed", "3")
    assert proc.returncode == 0
    for row in parse_csv(proc.stdout):
        assert abs(float(row["x"])) + abs(float(row["y"])) <= 1.0 + 1e-12


def test_simulate_out_file(tmp_path):
    target = tmp_path / "endpoints.csv"
    proc = run_cli("simulate", "--n", "10", "--out", str(target))
    assert proc.returncode == 0
    assert proc.stdout == ""
    assert len(parse_csv(target.read_text())) == 10


# ---------------------------------------------------------------------------
# density


def test_density_joint_center_cell_and_border_zeros():
    proc = run_cli("density", "--law", "joint", "--points", "3")
    assert proc.returncode == 0
    rows = parse_csv(proc.stdout)
    assert len(rows) == 9
    cells = {(float(r["x"]), float(r["y"])): float(r["value"]) for r in rows}
    assert cells[(0.0, 0.0)] == pytest.approx(0.080291479745607815, abs=1e-15)
    border = [v for k, v in cells.items() if k != (0.0, 0.0)]
    assert border == [0.0] * 8


def test_density_masses_sidecar_lines():
    proc = run_cli("density", "--law", "marginal", "--points", "8")
    masses = json.loads(header_lines(proc.stdout)[2].removeprefix("# masses: "))
    assert set(masses) == {"edge", "zero"}
    assert masses["edge"] == pytest.approx(0.36787944117144233 / 4.0, rel=1e-12)
    proc2 = run_cli("density", "--law", "boundary", "--points", "8")
    masses2 = json.loads(header_lines(proc2.stdout)[2].removeprefix("# masses: "))
    assert set(masses2) == {"vertex", "side_total", "diagonal_total", "ac"}


def test_density_grid_uses_cell_centers():
    proc = run_cli("density", "--law", "l1", "--points", "4", "--t", "2.0")
    rows = parse_csv(proc.stdout)
    assert [float(r["z"]) for r in rows] == [0.25, 0.75, 1.25, 1.75]


def test_density_json_payload():
    proc = run_cli("density", "--law", "boundary", "--variant", "reflecting",
                   "--points", "5", "--format", "json")
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert set(payload) == {"version", "config", "masses", "table"}
    assert payload["version"] == __version__
    assert len(payload["table"]["eta"]) == 5
    assert len(payload["table"]["value"]) == 5


def test_density_rejects_single_point():
    assert run_cli("density", "--points", "1").returncode == 2


def test_density_diagonal_needs_reflecting():
    proc = run_cli("density", "--law", "diagonal", "--variant", "standard")
    assert proc.returncode == 1
    assert "UnsupportedVariant" in proc.stderr


# ---------------------------------------------------------------------------
# validate


def test_validate_prefix_selection_and_exit_zero():
    proc = run_cli("validate", "--quick", "--tests", "bessel")
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["all_passed"] is True
    assert [r["name"] for r in payload["reports"]] == ["bessel-identities"]
    assert payload["config"]["quick"] is True


def test_validate_unknown_test_is_usage_error():
    proc = run_cli("validate", "--tests", "does-not-exist")
    assert proc.returncode == 2
    proc2 = run_cli("validate", "--tests", ",")
    assert proc2.returncode == 2


def test_validate_report_ignores_threads():
    base = ("validate", "--quick", "--tests", "masses", "--seed", "5")
    one = run_cli(*base, "--threads", "1")
    four = run_cli(*base, "--threads", "4")
    assert one.returncode == 0
    assert one.stdout == four.stdout
    payload = json.loads(one.stdout)
    assert "threads" not in payload["config"]
    assert [r["name"] for r in payload["reports"]] == ["masses-reflecting",
                                                       "masses-standard"]


# ---------------------------------------------------------------------------
# pde-check


def test_pde_check_telegraph_passes_quick_ladder():
    proc = run_cli("pde-check", "--form", "telegraph2", "--h", "0.04,0.02,0.01")
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["passed"] is True
    assert payload["fitted_order"] == pytest.approx(2.0, abs=0.05)
    assert payload["h_list"] == [0.04, 0.02, 0.01]


def test_pde_check_perturb_control_fails():
    proc = run_cli("pde-check", "--form", "telegraph2", "--h", "0.04,0.02,0.01",
                   "--perturb")
    assert proc.returncode == 1
    payload = json.loads(proc.stdout)
    assert payload["passed"] is False
    assert payload["fitted_order"] < 0.5


def test_pde_check_needs_three_spacings():
    proc = run_cli("pde-check", "--form", "telegraph2", "--h", "0.02,0.01")
    assert proc.returncode == 2


def test_pde_check_reflecting_marginal_unsupported():
    proc = run_cli("pde-check", "--form", "marginal-reflecting3")
    assert proc.returncode == 1
    assert "UnsupportedVariant" in proc.stderr


def test_pde_check_telegraph_requires_constant_rate():
    proc = run_cli("pde-check", "--form", "telegraph2", "--rate", "tanh:1",
                   "--h", "0.04,0.02,0.01")
    assert proc.returncode == 1
    assert "UnsupportedRate" in proc.stderr
