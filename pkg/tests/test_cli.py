"""End-to-end command-line checks via subprocess: output contracts, exit
codes, config merging, dry runs, and byte-level reproducibility."""

import json
import subprocess
import sys

import pytest

CMD = [sys.executable, "-m", "latflow"]


def run_cli(*args, cwd=None):
    return subprocess.run(
        CMD + list(args), capture_output=True, text=True, cwd=cwd, timeout=300
    )


def write_parabola(path):
    data = {
        "n": 3,
        "k": 1,
        "coords": [
            {"monomials": [{"exps": [1], "coeff": "1"}]},
            {"monomials": [{"exps": [2], "coeff": "1"}]},
        ],
        "center": [0.0],
        "radius": 1.0,
    }
    path.write_text(json.dumps(data))
    return str(path)


def test_ext_prints_the_frozen_column():
    res = run_cli("dioph", "ext", "--n", "4", "--a", "1,2;3,4")
    assert res.returncode == 0
    assert res.stdout.split() == ["-2", "1", "-4", "3", "2"]


def test_usage_errors_exit_2():
    assert run_cli("dioph", "ext", "--n", "5", "--a", "1,2;3,4").returncode == 2
    assert run_cli("dioph", "approx").returncode == 2  # missing required --a
    assert run_cli("nonsense").returncode == 2
    assert run_cli("dioph", "probe", "--a", "0.5", "--r", "2", "--qmax", "100",
                   "--target", "X").returncode == 2


def test_missing_config_file_exits_4(tmp_path):
    res = run_cli("dioph", "ext", "--config", str(tmp_path / "absent.json"))
    assert res.returncode == 4


def test_budget_exhaustion_exits_3():
    res = run_cli("dioph", "approx", "--a", "0.41421356", "--qmax", "100000000",
                  "--budget", "100")
    assert res.returncode == 3
    assert "budget" in res.stderr.lower()


def test_unknown_config_key_exits_2(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 4, "a": "1,2;3,4", "radiu": 1.0}))
    res = run_cli("dioph", "ext", "--config", str(cfg))
    assert res.returncode == 2
    assert "radiu" in res.stderr


def test_malformed_config_exits_2(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("{not json")
    assert run_cli("dioph", "ext", "--config", str(cfg)).returncode == 2


def test_dry_run_prints_plan_without_computing(tmp_path):
    curve = write_parabola(tmp_path / "p.json")
    out = tmp_path / "report.csv"
    res = run_cli(
        "sim", "translate", "--curve", curve, "--t", "0,1", "--samples", "5",
        "--seed", "7", "--out", str(out), "--dry-run",
    )
    assert res.returncode == 0
    plan = json.loads(res.stdout)
    assert plan["command"] == "sim translate"
    assert plan["plan"]["samples"] == 5
    assert plan["plan"]["seed"] == 7
    assert not out.exists()


def test_config_provides_and_flags_override(tmp_path):
    curve = write_parabola(tmp_path / "p.json")
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "curve": curve, "t": [0.0], "samples": 2, "seed": 1, "radius": 1.5,
    }))
    res = run_cli("sim", "translate", "--config", str(cfg), "--samples", "3", "--dry-run")
    assert res.returncode == 0
    plan = json.loads(res.stdout)["plan"]
    assert plan["samples"] == 3  # flag wins
    assert plan["seed"] == 1  # config fills the rest


def test_translate_csv_shape_and_determinism(tmp_path):
    curve = write_parabola(tmp_path / "p.json")
    args = [
        "sim", "translate", "--curve", curve, "--t", "0,1", "--samples", "4",
        "--seed", "42", "--radius", "1.5", "--eps", "0.1",
    ]
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli(*args, "--out", str(out1)).returncode == 0
    assert run_cli(*args, "--out", str(out2)).returncode == 0
    body1, body2 = out1.read_bytes(), out2.read_bytes()
    assert body1 == body2  # same config + seed -> identical bytes
    lines = body1.decode().strip().split("\n")
    assert len(lines) == 1 + 4 * 2  # header + samples x t-grid
    assert lines[0] == "sample_index,s,t,lambda1,siegel_count,below_eps"


def test_translate_seed_required(tmp_path):
    curve = write_parabola(tmp_path / "p.json")
    res = run_cli("sim", "translate", "--curve", curve, "--t", "0", "--samples", "2")
    assert res.returncode == 2


def test_example_emits_a_loadable_curve(tmp_path):
    out = tmp_path / "line.json"
    res = run_cli("sim", "example", "--n", "4", "--r", "2", "--D", "2", "--out", str(out))
    assert res.returncode == 0
    data = json.loads(out.read_text())
    assert data["n"] == 4 and data["span"]["d"] == 2
    # the emitted file doubles as a curve input for sim translate
    res2 = run_cli(
        "sim", "translate", "--curve", str(out), "--t", "0", "--samples", "2",
        "--seed", "3",
    )
    assert res2.returncode == 0
    assert "sample_index" in res2.stdout


def test_kempf_output():
    res = run_cli("kempf", "--v", "1,0", "--rep", "standard", "--n", "2")
    assert res.returncode == 0
    data = json.loads(res.stdout)
    assert data["unstable"] is True
    assert data["b_squared"] == [1, 2]
    assert data["lambda_star"] == [1, -1]
    assert data["semistable"] is False
    res2 = run_cli("kempf", "--v", "1,1", "--rep", "standard", "--n", "2")
    assert json.loads(res2.stdout)["semistable"] is True


def test_roots_check_all():
    res = run_cli("roots", "check", "--all", "--max-rank", "3")
    assert res.returncode == 0
    data = json.loads(res.stdout)
    passes = {tuple(entry) for entry in data["pass_set"]}
    assert ("A", 2, 1) in passes and ("C", 2, 1) in passes
    assert ("A", 3, 2) not in passes
    for report in data["reports"]:
        assert {"family", "rank", "weight_index", "phi1", "pi_descriptor", "witnesses"} <= set(report)


def test_roots_build():
    res = run_cli("roots", "build", "--family", "C", "--rank", "2")
    assert res.returncode == 0
    data = json.loads(res.stdout)
    assert data["family"] == "C" and len(data["roots"]) == 8


def test_dirichlet_json():
    res = run_cli("dirichlet", "--x", "0.5", "--form", "vect", "--delta", "1",
                  "--t", "2,4")
    assert res.returncode == 0
    data = json.loads(res.stdout)
    assert data["verdict"] == "improvable-evidence"
    assert [row["T"] for row in data["rows"]] == [2.0, 4.0]


def test_probe_json():
    res = run_cli("dioph", "probe", "--a", "0.41421356237309503", "--r", "2",
                  "--qmax", "10000")
    assert res.returncode == 0
    assert json.loads(res.stdout)["kind"] == "evidence-nonmember"
