"""Command-line front end.

Subcommands: simulate, exact, bounds, capacity, figures, verify.  Every run
that writes an output file also writes a manifest (JSON) holding the fully
resolved parameters, tool version, output names, and wall-clock duration;
re-running with ``--config <manifest>`` reproduces the outputs byte for
byte.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource
budget exceeded, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, exponents
from .core import ResourceLimitError, load_codebook, random_codebook
from .decode import assignment_cost, decode_joint_bruteforce, decode_joint_ml
from .montecarlo import (
    ExperimentConfig,
    format_csv_value,
    rows_to_csv,
    run_experiment,
)
from .oracle import exact_error_probability, min_bee_id_error, min_codebook_error

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_IO = 4


def _load_config(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    # a manifest carries the resolved parameters under "params"
    if "params" in data and isinstance(data["params"], dict):
        return data["params"]
    return data


def _merge_params(args: argparse.Namespace, keys: dict) -> dict:
    """Resolve each parameter from CLI flag, then config file, then default."""
    config = {}
    if getattr(args, "config", None):
        config = _load_config(args.config)
        unknown = set(config) - set(keys)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
    params = {}
    for key, default in keys.items():
        value = getattr(args, key, None)
        if value is None:
            value = config.get(key, default)
        if value is None:
            raise ValueError(f"missing required parameter --{key.replace('_', '-')}")
        params[key] = value
    return params


def _write_text(path: str | Path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _write_manifest(path: Path, subcommand: str, params: dict, outputs, started):
    manifest = {
        "subcommand": subcommand,
        "params": params,
        "seed": params.get("seed"),
        "version": __version__,
        "outputs": [str(o) for o in outputs],
        "duration_s": round(time.monotonic() - started, 6),
    }
    _write_text(path, json.dumps(manifest, indent=2) + "\n")


def _curve_csv(header: str, rows) -> str:
    lines = [header]
    for row in rows:
        lines.append(",".join(format_csv_value(v) for v in row))
    return "\n".join(lines) + "\n"


def _parse_sweep(spec: str):
    axis, _, rest = spec.partition("=")
    axis = axis.strip()
    if axis not in ("n", "p", "rate") or not rest:
        raise ValueError(f"sweep must look like n=8,12,16 or p=..., got {spec!r}")
    values = [float(v) for v in rest.split(",") if v.strip()]
    if not values:
        raise ValueError(f"sweep list is empty: {spec!r}")
    return axis, values


def cmd_simulate(args) -> int:
    started = time.monotonic()
    params = _merge_params(
        args,
        {
            "n": None,
            "rate": None,
            "alpha": 0.0,
            "p": None,
            "decoder": None,
            "trials": None,
            "seed": None,
            "codebook": "",
            "sweep": "",
            "out": "",
            "threads": 0,
            "fresh_codebook": False,
        },
    )
    config = ExperimentConfig(
        n=int(params["n"]),
        rate=float(params["rate"]),
        alpha=float(params["alpha"]),
        p=float(params["p"]),
        decoder=str(params["decoder"]),
        trials=int(params["trials"]),
        seed=int(params["seed"]),
        codebook_path=str(params["codebook"]) or None,
        fresh_codebook=bool(params["fresh_codebook"]),
    )
    sweep = _parse_sweep(params["sweep"]) if params["sweep"] else None
    if sweep and sweep[0] == "n":
        sweep = (sweep[0], [int(v) for v in sweep[1]])
    threads = int(params["threads"]) or (os.cpu_count() or 1)
    rows = run_experiment(config, sweep=sweep, threads=threads)
    csv_text = rows_to_csv(rows)
    if params["out"]:
        out = Path(params["out"])
        _write_text(out, csv_text)
        _write_manifest(
            out.with_suffix(out.suffix + ".manifest.json"),
            "simulate", params, [out], started,
        )
    else:
        sys.stdout.write(csv_text)
    return EXIT_OK


def cmd_exact(args) -> int:
    started = time.monotonic()
    params = _merge_params(
        args,
        {
            "mode": "error",
            "n": 0,
            "m": 0,
            "k": 0,
            "p": None,
            "decoder": "independent",
            "codebook": "",
            "budget": 100_000_000,
            "out": "",
        },
    )
    mode = params["mode"]
    p = float(params["p"])
    budget = int(params["budget"])
    if mode == "error":
        if not params["codebook"]:
            raise ValueError("mode=error needs --codebook FILE")
        c = load_codebook(params["codebook"])
        res = exact_error_probability(
            c, p, int(params["k"]), str(params["decoder"]), budget=budget
        )
        payload = {
            "n": res.n,
            "m": res.m,
            "k": res.k,
            "p": res.p,
            "decoder": res.decoder,
            "exact_error": res.value,
        }
    elif mode == "pe":
        res = min_codebook_error(int(params["n"]), int(params["m"]), p, budget=budget)
        payload = {"n": res.n, "m": res.m, "p": res.p, "pe_min": res.value}
    elif mode == "dmin":
        res = min_bee_id_error(
            int(params["n"]), int(params["m"]), p, int(params["k"]), budget=budget
        )
        payload = {
            "n": res.n,
            "m": res.m,
            "k": res.k,
            "p": res.p,
            "dmin_bee_id": res.value,
        }
    else:
        raise ValueError(f"unknown mode {mode!r}, expected error|pe|dmin")
    text = json.dumps(payload) + "\n"
    if params["out"]:
        out = Path(params["out"])
        _write_text(out, text)
        _write_manifest(
            out.with_suffix(out.suffix + ".manifest.json"),
            "exact", params, [out], started,
        )
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_bounds(args) -> int:
    started = time.monotonic()
    params = _merge_params(
        args,
        {"p": None, "rmin": 0.001, "rmax": 0.5, "steps": 500, "out": ""},
    )
    rows = exponents.exponent_curve(
        float(params["p"]), float(params["rmin"]), float(params["rmax"]),
        int(params["steps"]),
    )
    csv_text = _curve_csv("R,lower,upper", rows)
    if params["out"]:
        out = Path(params["out"])
        _write_text(out, csv_text)
        _write_manifest(
            out.with_suffix(out.suffix + ".manifest.json"),
            "bounds", params, [out], started,
        )
    else:
        sys.stdout.write(csv_text)
    return EXIT_OK


def cmd_capacity(args) -> int:
    started = time.monotonic()
    params = _merge_params(
        args,
        {"pmin": 0.01, "pmax": 0.45, "steps": 45, "out": ""},
    )
    rows = exponents.capacity_curve(
        float(params["pmin"]), float(params["pmax"]), int(params["steps"])
    )
    csv_text = _curve_csv("p,cap_lower,cap_upper", rows)
    if params["out"]:
        out = Path(params["out"])
        _write_text(out, csv_text)
        _write_manifest(
            out.with_suffix(out.suffix + ".manifest.json"),
            "capacity", params, [out], started,
        )
    else:
        sys.stdout.write(csv_text)
    return EXIT_OK


def cmd_figures(args) -> int:
    started = time.monotonic()
    params = _merge_params(
        args,
        {"outdir": None, "p": 0.05, "no_plots": False},
    )
    outdir = Path(params["outdir"])
    outdir.mkdir(parents=True, exist_ok=True)
    p = float(params["p"])

    fig3_rows = exponents.exponent_curve(p, 1e-6, 0.4, 400)
    fig4_rows = exponents.capacity_curve(0.01, 0.45, 45)
    fig5_rows = exponents.check_fig5(np.arange(0.005, 0.4951, 0.005))
    fig6_rows = exponents.check_fig6(np.arange(0.001, 0.2501, 0.001))

    outputs = []

    def emit(name, header, rows):
        path = outdir / name
        _write_text(path, _curve_csv(header, rows))
        outputs.append(path)
        return path

    emit("fig3.csv", "R,lower,upper", fig3_rows)
    emit("fig4.csv", "p,cap_lower,cap_upper", fig4_rows)
    emit("fig5.csv", "p,lhs,rhs,holds", fig5_rows)
    emit("fig6.csv", "R,lhs,rhs,holds", fig6_rows)

    if not params["no_plots"]:
        from . import plots

        plots.render_exponent_bounds(fig3_rows, p, outdir / "fig3.png")
        plots.render_capacity_bounds(fig4_rows, outdir / "fig4.png")
        plots.render_fig5(fig5_rows, outdir / "fig5.png")
        plots.render_fig6(fig6_rows, outdir / "fig6.png")
        outputs.extend(outdir / f"fig{i}.png" for i in (3, 4, 5, 6))

    _write_manifest(outdir / "manifest.json", "figures", params, outputs, started)
    return EXIT_OK


def _verify_checks(self_test: bool = False):
    """Inequality suites on tiny instances; yields (name, passed, detail)."""
    rng = np.random.default_rng(20240917)
    eps = 1e-12

    # joint decoding never loses to independent decoding, exactly
    worst = None
    ok = True
    for _ in range(40):
        n = int(rng.integers(1, 4))
        m = int(rng.integers(2, 5))
        k = int(rng.integers(0, min(m, 3)))
        p = float(rng.uniform(0.05, 0.45))
        c = random_codebook(n, m, rng)
        ej = exact_error_probability(c, p, k, "joint").value
        ei = exact_error_probability(c, p, k, "independent").value
        if ej > ei + eps:
            ok = False
            worst = (n, m, k, round(p, 4), ej, ei)
            break
    yield ("ml-dominance", ok, f"violation at {worst}" if worst else "40 instances")

    # assignment solver agrees with brute force on total cost
    ok = True
    detail = "60 instances"
    for _ in range(60):
        n = int(rng.integers(1, 6))
        m = int(rng.integers(2, 7))
        k = int(rng.integers(0, m))
        c = random_codebook(n, m, rng)
        from .channel import ChannelParams, sample_injective_map, transmit

        mapping = sample_injective_map(m, k, rng)
        obs = transmit(c, mapping, ChannelParams(0.2, k), rng)
        ml = decode_joint_ml(obs, c)
        bf = decode_joint_bruteforce(obs, c)
        if assignment_cost(obs, c, ml.assignment) != assignment_cost(
            obs, c, bf.assignment
        ):
            ok = False
            detail = f"cost mismatch at n={n}, m={m}, k={k}"
            break
    yield ("solver-vs-bruteforce", ok, detail)

    # union bound on the optimum (small instance sweep)
    ok = True
    detail = "lemma-1 instances"
    sign = -1.0 if self_test else 1.0
    for n, m, k in [(1, 2, 0), (1, 2, 1), (1, 3, 1), (2, 2, 0), (2, 3, 1), (1, 4, 2)]:
        for p in (0.1, 0.3):
            dmin = min_bee_id_error(n, m, p, k).value
            pe = min_codebook_error(n, m, p).value
            rhs = min(1.0, (m - k) * pe)
            if sign * dmin > sign * rhs + eps:
                ok = False
                detail = f"violated at n={n}, m={m}, k={k}, p={p}"
                break
        if not ok:
            break
    name = "lemma-1-union-bound" + ("-self-test" if self_test else "")
    yield (name, ok, detail)

    # joint-decoding lower bounds at the smallest admissible size
    ok = True
    detail = "n=1, m=9, k=8, eps=1/4"
    for p in (0.05, 0.1, 0.2, 0.3):
        dmin = min_bee_id_error(1, 9, p, 8).value
        pe_small = min_codebook_error(1, 2, p).value
        _, rhs12, rhs13 = exponents.lemma_bound_values(1, 9, 8, 0.25, pe_small, 0.0)
        if not (dmin > rhs12 and dmin > rhs13):
            ok = False
            detail = f"violated at p={p}"
            break
    yield ("lemma-2-lower-bounds", ok, detail)

    # exponent breakpoints join continuously
    ok = True
    detail = "p grid 0.01..0.49"
    for p in np.arange(0.01, 0.4951, 0.01):
        rc = exponents.rate_constants(float(p))
        bp = exponents.bhattacharyya(float(p))
        gap1 = abs(exponents.delta_gv(rc.r_ex) * bp - (rc.r_0 - rc.r_ex))
        gap2 = abs(
            (rc.r_0 - rc.r_cr)
            - exponents.kl_bernoulli(exponents.delta_gv(rc.r_cr), float(p))
        )
        if gap1 > 1e-9 or gap2 > 1e-9:
            ok = False
            detail = f"gap {max(gap1, gap2):.2e} at p={p:.2f}"
            break
    yield ("exponent-breakpoints", ok, detail)

    # lower bound never exceeds upper bound
    ok = True
    detail = "sandwich grid"
    for p in (0.05, 0.1, 0.2, 0.4):
        for rate in np.linspace(0.01, 0.9, 60):
            if rate >= exponents.capacity(p):
                continue
            if exponents.e_tlc(float(rate), p) > exponents.e_upper(float(rate), p) + eps:
                ok = False
                detail = f"crossed at R={rate:.3f}, p={p}"
                break
        if not ok:
            break
    yield ("bound-sandwich", ok, detail)


def cmd_verify(args) -> int:
    self_test = bool(getattr(args, "self_test", False))
    as_json = bool(getattr(args, "json", False))
    results = list(_verify_checks(self_test=self_test))
    all_ok = all(passed for _, passed, _ in results)
    if as_json:
        payload = {
            "passed": all_ok,
            "checks": [
                {"name": name, "passed": passed, "detail": detail}
                for name, passed, detail in results
            ],
        }
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        for name, passed, detail in results:
            status = "PASS" if passed else "FAIL"
            sys.stdout.write(f"{status} {name}: {detail}\n")
        sys.stdout.write(
            ("all checks passed" if all_ok else "verification FAILED") + "\n"
        )
    return EXIT_OK if all_ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="beeid",
        description="Identification-channel simulator and bound calculator",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("simulate", help="Monte Carlo error estimation")
    ps.add_argument("--config", help="JSON config or manifest file")
    ps.add_argument("--n", type=int)
    ps.add_argument("--rate", type=float)
    ps.add_argument("--alpha", type=float)
    ps.add_argument("--p", type=float)
    ps.add_argument("--decoder", choices=("independent", "joint"))
    ps.add_argument("--trials", type=int)
    ps.add_argument("--seed", type=int)
    ps.add_argument("--codebook", help="codebook text file (one 0/1 row per line)")
    ps.add_argument("--sweep", help="axis=v1,v2,... with axis in {n,p,rate}")
    ps.add_argument("--out", help="CSV output path (default stdout)")
    ps.add_argument("--threads", type=int)
    ps.add_argument("--fresh-codebook", dest="fresh_codebook",
                    action="store_true", default=None)
    ps.set_defaults(func=cmd_simulate)

    pe = sub.add_parser("exact", help="exhaustive exact error computations")
    pe.add_argument("--config")
    pe.add_argument("--mode", choices=("error", "pe", "dmin"))
    pe.add_argument("--n", type=int)
    pe.add_argument("--m", type=int)
    pe.add_argument("--k", type=int)
    pe.add_argument("--p", type=float)
    pe.add_argument("--decoder", choices=("independent", "joint"))
    pe.add_argument("--codebook")
    pe.add_argument("--budget", type=int)
    pe.add_argument("--out")
    pe.set_defaults(func=cmd_exact)

    pb = sub.add_parser("bounds", help="identification exponent bound curve")
    pb.add_argument("--config")
    pb.add_argument("--p", type=float)
    pb.add_argument("--rmin", type=float)
    pb.add_argument("--rmax", type=float)
    pb.add_argument("--steps", type=int)
    pb.add_argument("--out")
    pb.set_defaults(func=cmd_bounds)

    pc = sub.add_parser("capacity", help="identification capacity bound curve")
    pc.add_argument("--config")
    pc.add_argument("--pmin", type=float)
    pc.add_argument("--pmax", type=float)
    pc.add_argument("--steps", type=int)
    pc.add_argument("--out")
    pc.set_defaults(func=cmd_capacity)

    pf = sub.add_parser("figures", help="emit the report figure data and plots")
    pf.add_argument("--config")
    pf.add_argument("--outdir")
    pf.add_argument("--p", type=float)
    pf.add_argument("--no-plots", dest="no_plots", action="store_true", default=None)
    pf.set_defaults(func=cmd_figures)

    pv = sub.add_parser("verify", help="run the built-in inequality suites")
    pv.add_argument("--json", action="store_true", default=False)
    pv.add_argument("--self-test", dest="self_test", action="store_true",
                    default=False, help="inject a flipped bound; must fail")
    pv.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
