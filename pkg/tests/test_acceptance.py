"""Acceptance criteria, one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see per-criterion
status and timing.  Tolerances are pinned; runtime limits are asserted
against wall-clock time.
"""

import math
import time

import numpy as np
import pytest

from beeid import exponents as ex
from beeid.core import Codebook, random_codebook
from beeid.montecarlo import ExperimentConfig, estimate_error, run_experiment
from beeid.oracle import (
    exact_error_probability,
    min_bee_id_error,
    min_codebook_error,
)


class Timer:
    def __init__(self, limit_s):
        self.limit = limit_s

    def __enter__(self):
        self.start = time.monotonic()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.monotonic() - self.start
        return False


def report(num, timer, detail):
    print(f"ACCEPTANCE {num}: PASS ({timer.elapsed:.2f}s) - {detail}")
    assert timer.elapsed < timer.limit, (
        f"criterion {num} exceeded its runtime limit "
        f"({timer.elapsed:.2f}s >= {timer.limit}s)"
    )


def test_criterion_1_zero_rate_limit():
    with Timer(1.0) as t:
        half_b = ex.bhattacharyya(0.05) / 2
        assert half_b == pytest.approx(0.599, abs=5e-4)
        # the bound curve approaches the limit as R -> 0
        rows = ex.exponent_curve(0.05, 0.001, 0.5, 500)
        r0, lo0, hi0 = rows[0]
        assert abs(hi0 - 0.599) < 0.03 and abs(lo0 - 0.599) < 0.03
        lo_tiny, hi_tiny = ex.bee_exponent_bounds(1e-9, 0.05)
        assert lo_tiny == pytest.approx(0.599, abs=5e-4)
        assert hi_tiny == pytest.approx(0.599, abs=5e-4)
    report(1, t, f"B_p/2 = {half_b:.6f}; curve head ({lo0:.4f}, {hi0:.4f})")


def test_criterion_2_breakpoint_continuity():
    with Timer(1.0) as t:
        worst = 0.0
        for p in np.arange(0.01, 0.4951, 0.01):
            p = float(p)
            rc = ex.rate_constants(p)
            bp = ex.bhattacharyya(p)
            g1 = abs(ex.delta_gv(rc.r_ex) * bp - (rc.r_0 - rc.r_ex))
            g2 = abs((rc.r_0 - rc.r_cr) - ex.kl_bernoulli(ex.delta_gv(rc.r_cr), p))
            worst = max(worst, g1, g2)
            assert g1 <= 1e-9 and g2 <= 1e-9
    report(2, t, f"worst breakpoint gap {worst:.2e} over p grid 0.01..0.49")


def test_criterion_3_capacity_consistency():
    with Timer(5.0) as t:
        cb = ex.capacity_bounds(0.05)
        rc = ex.rate_constants(0.05)
        assert cb.lower == pytest.approx(rc.r_0 / 2, abs=1e-4)
        assert cb.lower == pytest.approx(0.2390, abs=1e-4)
        assert abs(ex.e_tlc(cb.lower, 0.05) - cb.lower) <= 1e-8
        assert abs(ex.e_upper(cb.upper, 0.05) - cb.upper) <= 1e-8
        for p, lo, hi in ex.capacity_curve(0.01, 0.45, 45):
            assert lo <= hi < ex.rate_constants(p).r_cr
            assert abs(ex.e_tlc(lo, p) - lo) <= 1e-8
            assert abs(ex.e_upper(hi, p) - hi) <= 1e-8
    report(3, t, f"cap lower {cb.lower:.6f} = R_0/2; 45-point grid ordered")


def test_criterion_4_fig5_fig6_inequalities():
    with Timer(2.0) as t:
        f5 = ex.check_fig5(np.arange(0.005, 0.4951, 0.005))
        assert len(f5) == 99
        assert all(holds for _, _, _, holds in f5)
        f6 = ex.check_fig6(np.arange(0.001, 0.1681, 0.001))
        assert len(f6) == 168
        assert all(holds for _, _, _, holds in f6)
    report(4, t, "99 p-points and 168 R-points all hold")


def test_criterion_5_theorem3_strict_gap():
    with Timer(2.0) as t:
        checked = 0
        for p in np.arange(0.01, 0.1001, 0.01):
            p = float(p)
            hi = min(0.169, ex.rate_constants(p).r_ex / 2)
            for rate in np.linspace(1e-4, hi - 1e-9, 25):
                first, second = ex.theorem3_gap(float(rate), p)
                assert first < second, (rate, p)
                checked += 1
    report(5, t, f"strict gap at {checked} grid points")


def test_criterion_6_oracle_anchored_estimator():
    with Timer(1.0) as t:
        c = Codebook.from_strings(["0", "1"])
        exact = exact_error_probability(c, 0.2, 1, "independent").value
        assert exact == pytest.approx(0.2, abs=1e-12)
        est = estimate_error(c, 0.2, 1, "independent", 100_000, seed=60451)
        se = math.sqrt(0.2 * 0.8 / 100_000)
        assert abs(est.estimate - exact) <= 3 * se
        assert est == estimate_error(c, 0.2, 1, "independent", 100_000, seed=60451)
    report(6, t, f"exact 0.2, estimate {est.estimate:.5f} within 3 SE; deterministic")


def test_criterion_7_ml_dominance():
    with Timer(30.0) as t:
        rng = np.random.default_rng(888)
        budget = 10**9  # n=4, m=5, k=0 nominally needs 120 * 2^20 evaluations
        for _ in range(100):
            n = int(rng.integers(1, 5))
            m = int(rng.integers(2, 6))
            k = int(rng.integers(0, min(3, m)))
            p = float(rng.uniform(0.05, 0.45))
            c = random_codebook(n, m, rng)
            ej = exact_error_probability(c, p, k, "joint", budget=budget).value
            ei = exact_error_probability(c, p, k, "independent", budget=budget).value
            assert ej <= ei + 1e-12, (n, m, k, p)
        # assignment-solver optimality against brute force up to m = 6
        from beeid.channel import ChannelParams, sample_injective_map, transmit
        from beeid.decode import (
            assignment_cost,
            decode_joint_bruteforce,
            decode_joint_ml,
        )

        for _ in range(100):
            n = int(rng.integers(1, 8))
            m = int(rng.integers(2, 7))
            k = int(rng.integers(0, m))
            c = random_codebook(n, m, rng)
            obs = transmit(c, sample_injective_map(m, k, rng),
                           ChannelParams(0.25, k), rng)
            ml = decode_joint_ml(obs, c)
            bf = decode_joint_bruteforce(obs, c)
            assert assignment_cost(obs, c, ml.assignment) == assignment_cost(
                obs, c, bf.assignment
            )
    report(7, t, "joint <= independent on 100 exact instances; solver optimal")


def test_criterion_8_lemma_inequalities():
    with Timer(60.0) as t:
        # joint-decoding lower bounds at n=1, m=9, k=8, eps=1/4
        for p in (0.05, 0.1, 0.2, 0.3):
            dmin = min_bee_id_error(1, 9, p, 8).value
            pe_small = min_codebook_error(1, 2, p).value
            assert pe_small == pytest.approx(p, abs=1e-12)
            _, rhs12, rhs13 = ex.lemma_bound_values(1, 9, 8, 0.25, pe_small, 0.0)
            assert dmin > rhs12, p
            assert dmin > rhs13, p
        # union bound on every enumerable instance with n*m <= 12
        budget = 100_000_000
        instances = 0
        for n in range(1, 13):
            for m in range(2, 13):
                if n * m > 12:
                    continue
                for k in range(0, m):
                    nominal = (1 << (n * m)) * math.perm(m, m - k) * (
                        1 << (n * (m - k))
                    )
                    if nominal > budget:
                        continue
                    for p in (0.1, 0.3):
                        dmin = min_bee_id_error(n, m, p, k, budget=budget).value
                        pe = min_codebook_error(n, m, p, budget=budget).value
                        assert dmin <= min(1.0, (m - k) * pe) + 1e-12, (n, m, k, p)
                    instances += 1
    report(8, t, f"lemma-2 at 4 p values; lemma-1 on {instances} instances")


def test_criterion_9_strong_converse_trend():
    with Timer(120.0) as t:
        cap_upper = ex.capacity_bounds(0.1).upper
        rate = 1.2 * cap_upper
        cfg = ExperimentConfig(
            n=8, rate=rate, alpha=0.5, p=0.1, decoder="independent",
            trials=1000, seed=11, fresh_codebook=True,
        )
        rows = run_experiment(cfg, sweep=("n", [8, 12, 16]))
        ests = [r["estimate"] for r in rows]
        los = [r["ci_low"] for r in rows]
        his = [r["ci_high"] for r in rows]
        # non-decreasing within overlapping-CI tolerance
        for i in range(len(rows) - 1):
            assert his[i + 1] >= los[i], (rows[i], rows[i + 1])
        assert ests[-1] >= ests[0]
        assert all(e > 0 for e in ests)
    report(
        9, t,
        "estimates " + " -> ".join(f"{e:.3f}" for e in ests)
        + f" at R = 1.2 x {cap_upper:.4f}",
    )


def test_criterion_10_exponent_curve_shape():
    with Timer(2.0) as t:
        for p in (0.05, 0.1, 0.2):
            r_cr = ex.rate_constants(p).r_cr
            rates = np.linspace(0.001, 0.95, 500)
            vals = [ex.bee_exponent_bounds(float(r), p) for r in rates]
            lows = np.array([v[0] for v in vals])
            ups = np.array([v[1] for v in vals])
            assert np.all(np.diff(lows) <= 1e-12), p
            assert np.all(np.diff(ups) <= 1e-12), p
            for r, u in zip(rates, ups):
                if r >= r_cr:
                    assert u == 0.0, (r, p)
    report(10, t, "500-point grids monotone; upper bound 0 beyond Rcr")
