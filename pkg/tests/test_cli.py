import json
import subprocess
import sys

import pytest

from beeid.cli import main


def run_cli(args):
    return main(list(args))


def test_simulate_single_row(tmp_path, capsys):
    code = run_cli([
        "simulate", "--n", "8", "--rate", "0.5", "--alpha", "0.5", "--p", "0.1",
        "--decoder", "joint", "--trials", "1000", "--seed", "7",
    ])
    assert code == 0
    out = capsys.readouterr().out
    lines = out.strip().split("\n")
    assert lines[0].startswith("n,m,k,p,rate,alpha,decoder,trials,errors")
    fields = lines[1].split(",")
    assert fields[0] == "8" and fields[1] == "16" and fields[2] == "8"


def test_simulate_sweep_rows(tmp_path, capsys):
    code = run_cli([
        "simulate", "--n", "8", "--rate", "0.5", "--alpha", "0.5", "--p", "0.1",
        "--decoder", "independent", "--trials", "200", "--seed", "7",
        "--sweep", "n=8,12,16",
    ])
    assert code == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert len(lines) == 4  # header + 3 rows


def test_simulate_deterministic_bytes(tmp_path):
    args = [
        "simulate", "--n", "6", "--rate", "0.5", "--alpha", "0.5", "--p", "0.1",
        "--decoder", "independent", "--trials", "400", "--seed", "11",
    ]
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert run_cli(args + ["--out", str(a)]) == 0
    assert run_cli(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_simulate_threads_do_not_change_bytes(tmp_path):
    args = [
        "simulate", "--n", "8", "--rate", "0.5", "--alpha", "0.5", "--p", "0.1",
        "--decoder", "independent", "--trials", "30000", "--seed", "13",
    ]
    one = tmp_path / "one.csv"
    many = tmp_path / "many.csv"
    assert run_cli(args + ["--threads", "1", "--out", str(one)]) == 0
    assert run_cli(args + ["--threads", "8", "--out", str(many)]) == 0
    assert one.read_bytes() == many.read_bytes()


def test_manifest_roundtrip(tmp_path):
    out1 = tmp_path / "run1.csv"
    assert run_cli([
        "simulate", "--n", "6", "--rate", "0.5", "--alpha", "0.5", "--p", "0.1",
        "--decoder", "joint", "--trials", "300", "--seed", "3",
        "--out", str(out1),
    ]) == 0
    manifest = out1.with_suffix(".csv.manifest.json")
    assert manifest.exists()
    data = json.loads(manifest.read_text())
    assert data["subcommand"] == "simulate"
    assert data["params"]["seed"] == 3
    out2 = tmp_path / "run2.csv"
    assert run_cli(["simulate", "--config", str(manifest), "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_exact_modes(tmp_path, capsys):
    cb = tmp_path / "cb.txt"
    cb.write_text("0\n1\n")
    assert run_cli([
        "exact", "--mode", "error", "--codebook", str(cb), "--k", "1",
        "--p", "0.2", "--decoder", "independent",
    ]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["exact_error"] == pytest.approx(0.2, abs=1e-12)
    assert payload["n"] == 1 and payload["m"] == 2 and payload["k"] == 1

    assert run_cli(["exact", "--mode", "pe", "--n", "1", "--m", "2", "--p", "0.2"]) == 0
    assert json.loads(capsys.readouterr().out)["pe_min"] == pytest.approx(0.2, abs=1e-12)

    assert run_cli([
        "exact", "--mode", "dmin", "--n", "2", "--m", "1", "--k", "0", "--p", "0.2",
    ]) == 0
    assert json.loads(capsys.readouterr().out)["dmin_bee_id"] == 0.0


def test_exact_budget_exit_code(capsys):
    code = run_cli([
        "exact", "--mode", "dmin", "--n", "6", "--m", "6", "--k", "0", "--p", "0.2",
    ])
    assert code == 3


def test_bounds_curve(tmp_path):
    out = tmp_path / "bounds.csv"
    assert run_cli([
        "bounds", "--p", "0.05", "--rmin", "0.001", "--rmax", "0.5",
        "--steps", "500", "--out", str(out),
    ]) == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "R,lower,upper"
    assert len(lines) == 501
    rows = [tuple(map(float, ln.split(","))) for ln in lines[1:]]
    assert all(lo <= hi + 1e-12 for _, lo, hi in rows)
    # the upper bound hits zero before the critical rate
    from beeid.exponents import rate_constants

    r_cr = rate_constants(0.05).r_cr
    first_zero = next(r for r, _, hi in rows if hi == 0.0)
    assert first_zero < r_cr


def test_bounds_usage_error(capsys):
    assert run_cli(["bounds", "--p", "0.05", "--rmin", "0.4", "--rmax", "0.1"]) == 2


def test_capacity_curve(tmp_path):
    out = tmp_path / "cap.csv"
    assert run_cli([
        "capacity", "--pmin", "0.03", "--pmax", "0.2", "--steps", "8",
        "--out", str(out),
    ]) == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "p,cap_lower,cap_upper"
    rows = [tuple(map(float, ln.split(","))) for ln in lines[1:]]
    assert all(lo <= hi for _, lo, hi in rows)


def test_figures_outputs(tmp_path):
    outdir = tmp_path / "figs"
    assert run_cli(["figures", "--outdir", str(outdir)]) == 0
    for name in ("fig3.csv", "fig4.csv", "fig5.csv", "fig6.csv",
                 "fig3.png", "fig4.png", "fig5.png", "fig6.png",
                 "manifest.json"):
        assert (outdir / name).exists(), name
        assert (outdir / name).stat().st_size > 0
    fig5 = (outdir / "fig5.csv").read_text().strip().split("\n")
    assert fig5[0] == "p,lhs,rhs,holds"
    assert all(ln.endswith("true") for ln in fig5[1:])
    fig6 = (outdir / "fig6.csv").read_text().strip().split("\n")
    for ln in fig6[1:]:
        r = float(ln.split(",")[0])
        if r <= 0.168:
            assert ln.endswith("true"), ln
    fig3 = (outdir / "fig3.csv").read_text().strip().split("\n")
    first = fig3[1].split(",")
    assert float(first[2]) == pytest.approx(0.599, abs=5e-4)


def test_figures_no_plots(tmp_path):
    outdir = tmp_path / "figs2"
    assert run_cli(["figures", "--outdir", str(outdir), "--no-plots"]) == 0
    assert (outdir / "fig3.csv").exists()
    assert not (outdir / "fig3.png").exists()


def test_verify_passes(capsys):
    assert run_cli(["verify"]) == 0
    assert "all checks passed" in capsys.readouterr().out


def test_verify_json(capsys):
    assert run_cli(["verify", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["passed"] is True
    assert all(c["passed"] for c in payload["checks"])


def test_verify_self_test_fails(capsys):
    assert run_cli(["verify", "--self-test"]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out


def test_usage_exit_code_from_argparse():
    result = subprocess.run(
        [sys.executable, "-m", "beeid.cli", "simulate", "--bogus-flag", "1"],
        capture_output=True,
    )
    assert result.returncode == 2


def test_config_file_with_overrides(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "n": 6, "rate": 0.5, "alpha": 0.5, "p": 0.1,
        "decoder": "independent", "trials": 100, "seed": 5,
    }))
    assert run_cli(["simulate", "--config", str(cfg)]) == 0
    base = capsys.readouterr().out
    assert run_cli(["simulate", "--config", str(cfg), "--seed", "6"]) == 0
    overridden = capsys.readouterr().out
    assert base != overridden
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 6, "bogus": 1}))
    assert run_cli(["simulate", "--config", str(bad)]) == 2


def test_io_error_exit_code(tmp_path):
    missing_dir = tmp_path / "nope" / "out.csv"
    code = run_cli([
        "simulate", "--n", "6", "--rate", "0.5", "--alpha", "0.5", "--p", "0.1",
        "--decoder", "joint", "--trials", "50", "--seed", "2",
        "--out", str(missing_dir),
    ])
    assert code == 4
