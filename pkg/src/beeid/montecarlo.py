"""Seeded, reproducible Monte Carlo estimation of the identification error.

Trials are processed in fixed-size batches; batch b draws all of its
randomness from an independent counter-based stream Philox(key=seed,
counter=b << 128).  The batch layout never changes with the worker count,
so an estimate is a pure function of (configuration, seed): runs are
bit-identical across thread counts and repeated invocations, and any batch
can be regenerated in isolation.

The per-trial pipeline matches the channel and decoder definitions exactly:
fresh uniform injective map, i.i.d. Bernoulli(p) bit flips, decode, compare.
Independent decoding is fully vectorized (integer costs plus U[0,1) jitter
give uniform tie breaks); joint decoding solves one rectangular assignment
per trial.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import Codebook, ResourceLimitError, random_codebook

BATCH_SIZE = 8192

_CODEBOOK_STREAM = 1 << 224

_DECODERS = ("independent", "joint")

CSV_COLUMNS = (
    "n,m,k,p,rate,alpha,decoder,trials,errors,estimate,ci_low,ci_high,seed"
)


@dataclass(frozen=True)
class ErrorEstimate:
    """Monte Carlo estimate with a 95% Wilson confidence interval."""

    trials: int
    errors: int
    estimate: float
    ci_low: float
    ci_high: float
    seed: int


def wilson_interval(errors: int, trials: int, z: float = 1.959963984540054):
    """95% Wilson score interval; well behaved at zero or full error counts."""
    if trials < 1:
        raise ValueError("interval needs at least one trial")
    phat = errors / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (phat + z2 / (2.0 * trials)) / denom
    half = (
        z
        * math.sqrt(phat * (1.0 - phat) / trials + z2 / (4.0 * trials * trials))
        / denom
    )
    # clamp away float dust so ci_low <= estimate <= ci_high holds exactly
    return max(0.0, min(center - half, phat)), min(1.0, max(center + half, phat))


def _batch_rng(seed: int, batch: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed, counter=batch << 128))


def _experiment_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed, counter=_CODEBOOK_STREAM))


def _decode_errors(cost: np.ndarray, maps: np.ndarray, decoder: str,
                   tie_keys: np.ndarray) -> np.ndarray:
    """Per-trial error flags from (trials, rows, m) costs and true maps."""
    if decoder == "independent":
        picked = np.argmin(cost + tie_keys, axis=2)
        return (picked != maps).any(axis=1)
    errs = np.empty(cost.shape[0], dtype=bool)
    for t in range(cost.shape[0]):
        rows, cols = linear_sum_assignment(cost[t])
        assignment = np.empty(cost.shape[1], dtype=np.int64)
        assignment[rows] = cols
        errs[t] = bool((assignment != maps[t]).any())
    return errs


def _batch_errors(
    bits: np.ndarray | None,
    n: int,
    m: int,
    k: int,
    p: float,
    decoder: str,
    seed: int,
    batch: int,
    count: int,
    fresh_codebook: bool,
) -> int:
    rng = _batch_rng(seed, batch)
    r = m - k
    # inner chunks bound the (trials, rows, m) work arrays
    cells = max(1, r * m * max(n, 8))
    step = max(1, min(count, (1 << 24) // cells))
    total = 0
    done = 0
    while done < count:
        t = min(step, count - done)
        maps = rng.permuted(np.tile(np.arange(m), (t, 1)), axis=1)[:, :r]
        if fresh_codebook:
            books = rng.integers(0, 2, size=(t, m, n), dtype=np.uint8)
        if p > 0.0:
            noise = (rng.random((t, r, n)) < p).astype(np.uint8)
        else:
            noise = np.zeros((t, r, n), dtype=np.uint8)
        if fresh_codebook:
            sent = np.take_along_axis(books, maps[:, :, None], axis=1)
            obs = (sent ^ noise).astype(np.float32)
            cost = np.einsum("tin,tjn->tij", obs, (1.0 - 2.0 * books).astype(np.float32))
            cost += books.sum(axis=2, dtype=np.int64)[:, None, :]
        else:
            obs = (bits[maps] ^ noise).astype(np.float32)
            # d(a, b) = |a| + |b| - 2 a.b for binary rows
            fb = bits.astype(np.float32)
            g = obs.reshape(t * r, n) @ fb.T
            cost = (
                obs.sum(axis=2).reshape(t * r, 1)
                + fb.sum(axis=1)[None, :]
                - 2.0 * g
            ).reshape(t, r, m)
        cost = np.rint(cost).astype(np.int32)
        # drawn for both decoders so paired runs share the map/noise stream
        tie_keys = rng.random(cost.shape)
        total += int(_decode_errors(cost, maps, decoder, tie_keys).sum())
        done += t
    return total


def estimate_error(
    c: Codebook,
    p: float,
    k: int,
    decoder: str,
    trials: int,
    seed: int,
    threads: int = 1,
    fresh_codebook: bool = False,
) -> ErrorEstimate:
    """Estimate the identification error for one codebook and decoder.

    Each trial draws a fresh injective map and noise realization, decodes,
    and records whether the decoded map differs from the truth.  The result
    depends only on (arguments, seed), never on the thread count.
    """
    if decoder not in _DECODERS:
        raise ValueError(f"unknown decoder {decoder!r}, expected one of {_DECODERS}")
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    if not 0.0 <= p < 0.5:
        raise ValueError(f"crossover probability must lie in [0, 0.5), got {p}")
    if not 0 <= k < c.m:
        raise ValueError(f"need 0 <= k < m, got k={k}, m={c.m}")
    bits = None if fresh_codebook else c.bit_matrix()
    jobs = []
    for b, lo in enumerate(range(0, trials, BATCH_SIZE)):
        jobs.append((b, min(BATCH_SIZE, trials - lo)))
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            counts = list(
                pool.map(
                    lambda job: _batch_errors(
                        bits, c.n, c.m, k, p, decoder, seed, job[0], job[1],
                        fresh_codebook,
                    ),
                    jobs,
                )
            )
    else:
        counts = [
            _batch_errors(
                bits, c.n, c.m, k, p, decoder, seed, b, cnt, fresh_codebook
            )
            for b, cnt in jobs
        ]
    errors = int(sum(counts))
    lo, hi = wilson_interval(errors, trials)
    return ErrorEstimate(
        trials=trials,
        errors=errors,
        estimate=errors / trials,
        ci_low=lo,
        ci_high=hi,
        seed=seed,
    )


@dataclass
class ExperimentConfig:
    """A sweep point: blocklength, rate, absentee fraction, noise, decoder.

    The row count scales as m = ceil(2^(n*rate)) and the absentee count as
    k = floor(alpha * m).
    """

    n: int
    rate: float
    alpha: float
    p: float
    decoder: str
    trials: int
    seed: int
    codebook_path: str | None = None
    fresh_codebook: bool = False
    m_cap: int = field(default=1 << 20)

    def derived_mk(self) -> tuple[int, int]:
        if self.n < 1:
            raise ValueError(f"blocklength must be >= 1, got {self.n}")
        if self.rate <= 0.0:
            raise ValueError(f"rate must be positive, got {self.rate}")
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError(
                f"absentee fraction must lie in [0, 1), got {self.alpha}"
            )
        exponent = self.n * self.rate
        if exponent > math.log2(self.m_cap):
            raise ResourceLimitError(
                f"m = ceil(2^{exponent:.3f}) exceeds the cap {self.m_cap}"
            )
        m = math.ceil(2.0**exponent)
        # nudge guards against 0.3 * 10 = 2.9999... style float dust
        k = int(math.floor(self.alpha * m + 1e-9))
        if k >= m:
            k = m - 1
        return m, k


def run_experiment(
    config: ExperimentConfig,
    sweep: tuple[str, list] | None = None,
    threads: int = 1,
) -> list[dict]:
    """One ErrorEstimate row per sweep point.

    ``sweep`` is (axis, values) with axis in {"n", "p", "rate"}; without it
    a single point is run.  Each point gets its own codebook (drawn once
    from a per-point stream unless a codebook file is supplied) and its own
    derived trial seed, so rows are reproducible independently.
    """
    if config.decoder not in _DECODERS:
        raise ValueError(
            f"unknown decoder {config.decoder!r}, expected one of {_DECODERS}"
        )
    if sweep is None:
        points = [config]
    else:
        axis, values = sweep
        if axis not in ("n", "p", "rate"):
            raise ValueError(f"sweep axis must be n, p, or rate, got {axis!r}")
        points = []
        for v in values:
            kwargs = {
                "n": config.n,
                "rate": config.rate,
                "alpha": config.alpha,
                "p": config.p,
                "decoder": config.decoder,
                "trials": config.trials,
                "seed": config.seed,
                "codebook_path": config.codebook_path,
                "fresh_codebook": config.fresh_codebook,
                "m_cap": config.m_cap,
            }
            kwargs[axis] = int(v) if axis == "n" else float(v)
            points.append(ExperimentConfig(**kwargs))
    rows = []
    for q, point in enumerate(points):
        m, k = point.derived_mk()
        point_seed = int(
            np.random.SeedSequence(entropy=(point.seed, q)).generate_state(
                1, np.uint64
            )[0]
        )
        if point.codebook_path is not None:
            from .core import load_codebook

            c = load_codebook(point.codebook_path)
            if c.n != point.n or c.m != m:
                raise ValueError(
                    f"codebook file is {c.m}x{c.n} but the sweep point needs "
                    f"{m}x{point.n}"
                )
        else:
            c = random_codebook(point.n, m, _experiment_rng(point_seed))
        est = estimate_error(
            c,
            point.p,
            k,
            point.decoder,
            point.trials,
            point_seed,
            threads=threads,
            fresh_codebook=point.fresh_codebook,
        )
        rows.append(
            {
                "n": point.n,
                "m": m,
                "k": k,
                "p": point.p,
                "rate": point.rate,
                "alpha": point.alpha,
                "decoder": point.decoder,
                "trials": est.trials,
                "errors": est.errors,
                "estimate": est.estimate,
                "ci_low": est.ci_low,
                "ci_high": est.ci_high,
                "seed": point.seed,
            }
        )
    return rows


def format_csv_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def rows_to_csv(rows: list[dict]) -> str:
    """Serialize experiment rows with the fixed column order."""
    cols = CSV_COLUMNS.split(",")
    lines = [CSV_COLUMNS]
    for row in rows:
        lines.append(",".join(format_csv_value(row[c]) for c in cols))
    return "\n".join(lines) + "\n"
