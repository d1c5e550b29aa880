"""Exhaustive exact error probabilities on tiny instances.

These computations anchor every bound and estimator test.  Two exact
reductions keep the enumeration tractable while preserving the uniform
tie-splitting semantics bit for bit:

* Independent decoding: the error event factorizes over rows, so the exact
  error is 1 - E_map[prod_i a_{map(i)}] where a_j is the probability that a
  single transmission of codeword j is decoded back to j (ties split
  uniformly).  Each a_j needs only a 2^n output sweep.

* Joint minimum-cost decoding: every optimal map for a given observation
  has the same total cost, hence the same likelihood, so the uniform tie
  split contributes exactly the optimum's weight once.  The exact error is
  1 - (1/|maps|) * sum over observations Y of p^T*(Y) (1-p)^(N-T*(Y)),
  where T*(Y) is the minimum assignment cost and N = n*(m-k).
  Observations that are row permutations of each other share T*, so row
  multisets are enumerated with multinomial multiplicities.

The test suite cross-checks both reductions against a literal map-by-noise
enumeration with explicit tie counting on the smallest instances.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import Codebook, ResourceLimitError

DEFAULT_BUDGET = 100_000_000

DECODERS = ("independent", "joint")

_MAX_EXACT_N = 16
_MAX_MULTISETS = 1 << 22


@dataclass(frozen=True)
class ExactError:
    """An exactly computed error probability with its instance descriptor."""

    value: float
    n: int
    m: int
    k: int | None
    p: float
    decoder: str


def _check_probability(p: float) -> float:
    if not 0.0 <= p < 0.5:
        raise ValueError(f"crossover probability must lie in [0, 0.5), got {p}")
    return float(p)


def _row_values(c: Codebook) -> np.ndarray:
    if c.n > _MAX_EXACT_N:
        raise ResourceLimitError(
            f"exact enumeration limited to n <= {_MAX_EXACT_N}, got {c.n}"
        )
    bits = c.bit_matrix().astype(np.int64)
    return bits @ (1 << np.arange(c.n, dtype=np.int64))


def _weight_table(p: float, total_bits: int) -> np.ndarray:
    """w[t] = p^t (1-p)^(total_bits - t) for t = 0..total_bits."""
    t = np.arange(total_bits + 1)
    return np.power(p, t) * np.power(1.0 - p, total_bits - t)


def _per_codeword_correct(values: np.ndarray, n: int, p: float) -> np.ndarray:
    """a[j]: probability a lone transmission of row j decodes back to j."""
    ys = np.arange(1 << n, dtype=np.int64)
    dist = np.bitwise_count(ys[:, None] ^ values[None, :]).astype(np.int64)
    dmin = dist.min(axis=1)
    ties = dist == dmin[:, None]
    tcount = ties.sum(axis=1)
    wy = _weight_table(p, n)[dmin]
    return (wy / tcount) @ ties


def _independent_exact(values: np.ndarray, n: int, k: int, p: float) -> float:
    m = values.size
    r = m - k
    a = _per_codeword_correct(values, n, p)
    prods = [math.prod(a[list(sub)]) for sub in itertools.combinations(range(m), r)]
    val = 1.0 - math.fsum(prods) / len(prods)
    return min(1.0, max(0.0, val))


def _observation_multisets(n_values: int, r: int) -> tuple[np.ndarray, np.ndarray]:
    """Nondecreasing value tuples plus their multinomial multiplicities."""
    if r == 1:
        ym = np.arange(n_values, dtype=np.int64).reshape(n_values, 1)
        return ym, np.ones(n_values)
    count = math.comb(n_values + r - 1, r)
    if count > _MAX_MULTISETS:
        raise ResourceLimitError(
            f"{count} observation multisets exceed the enumeration limit"
        )
    tuples = list(itertools.combinations_with_replacement(range(n_values), r))
    ym = np.array(tuples, dtype=np.int64)
    r_fact = math.factorial(r)
    mult = np.empty(len(tuples), dtype=np.float64)
    for b, tup in enumerate(tuples):
        denom = 1
        for _, grp in itertools.groupby(tup):
            denom *= math.factorial(sum(1 for _ in grp))
        mult[b] = r_fact // denom
    return ym, mult


def _joint_exact(values: np.ndarray, n: int, k: int, p: float) -> float:
    m = values.size
    r = m - k
    perms = np.array(
        list(itertools.permutations(range(m), r)), dtype=np.int64
    ).reshape(-1, r)
    n_maps = perms.shape[0]
    ys = np.arange(1 << n, dtype=np.int64)
    dist = np.bitwise_count(ys[:, None] ^ values[None, :]).astype(np.int32)
    ym, mult = _observation_multisets(1 << n, r)
    wtab = _weight_table(p, n * r)
    chunk = max(1, (1 << 23) // max(1, n_maps))
    partials = []
    for lo in range(0, ym.shape[0], chunk):
        ymc = ym[lo : lo + chunk]
        cost = np.zeros((ymc.shape[0], n_maps), dtype=np.int32)
        for i in range(r):
            cost += dist[ymc[:, i]][:, perms[:, i]]
        t_min = cost.min(axis=1)
        partials.append(float(mult[lo : lo + chunk] @ wtab[t_min]))
    correct = math.fsum(partials) / n_maps
    return min(1.0, max(0.0, 1.0 - correct))


def exact_error_probability(
    c: Codebook,
    p: float,
    k: int,
    decoder: str,
    budget: int = DEFAULT_BUDGET,
) -> ExactError:
    """Exact expected identification error for one codebook and decoder.

    Averages over the uniform injective map and all noise patterns with
    exact probability weights; decoder ties are split uniformly.
    """
    p = _check_probability(p)
    if decoder not in DECODERS:
        raise ValueError(f"unknown decoder {decoder!r}, expected one of {DECODERS}")
    if not 0 <= k < c.m:
        raise ValueError(f"need 0 <= k < m, got k={k}, m={c.m}")
    r = c.m - k
    n_maps = math.perm(c.m, r)
    if c.n * r > 62 or n_maps * (1 << (c.n * r)) > budget:
        raise ResourceLimitError(
            f"instance needs {n_maps} maps x 2^{c.n * r} noise patterns, "
            f"over budget {budget}"
        )
    values = _row_values(c)
    if decoder == "independent":
        value = _independent_exact(values, c.n, k, p)
    else:
        value = _joint_exact(values, c.n, k, p)
    return ExactError(value=value, n=c.n, m=c.m, k=k, p=p, decoder=decoder)


def _iter_codebook_chunks(n_values: int, m: int, prune: bool, chunk: int):
    if prune:
        it = itertools.combinations_with_replacement(range(n_values), m)
    else:
        it = itertools.product(range(n_values), repeat=m)
    while True:
        batch = list(itertools.islice(it, chunk))
        if not batch:
            return
        yield np.array(batch, dtype=np.int64).reshape(len(batch), m)


def min_codebook_error(
    n: int,
    m: int,
    p: float,
    budget: int = DEFAULT_BUDGET,
    prune: bool = False,
) -> ExactError:
    """Minimum exact block error over all 2^(nm) codebooks (uniform prior ML).

    With ties split uniformly, each received word contributes the weight of
    its minimum distance exactly once, so the block error of a codebook is
    1 - (1/m) * sum_y p^dmin(y) (1-p)^(n-dmin(y)).

    ``prune`` restricts the sweep to row-sorted representatives; the error
    is invariant under row reordering so the minimizing value is unchanged.
    """
    p = _check_probability(p)
    if n < 1 or m < 1:
        raise ValueError(f"need n >= 1 and m >= 1, got n={n}, m={m}")
    if n > _MAX_EXACT_N or n * m > 62 or (1 << (n * m)) * (1 << n) * m > budget:
        raise ResourceLimitError(
            f"2^{n * m} codebooks x 2^{n} outputs exceed budget {budget}"
        )
    if m == 1:
        return ExactError(value=0.0, n=n, m=m, k=None, p=p, decoder="block")
    wtab = _weight_table(p, n)
    ys = np.arange(1 << n, dtype=np.int64)
    best = 1.0
    for cb in _iter_codebook_chunks(1 << n, m, prune, chunk=4096):
        dist = np.bitwise_count(ys[:, None, None] ^ cb[None, :, :])
        dmin = dist.min(axis=2)
        correct = wtab[dmin].sum(axis=0) / m
        err = 1.0 - correct.max()
        best = min(best, float(err))
    return ExactError(value=max(0.0, best), n=n, m=m, k=None, p=p, decoder="block")


def _joint_error_batch(
    cb_values: np.ndarray,
    perms: np.ndarray,
    ym: np.ndarray,
    mult: np.ndarray,
    pc: np.ndarray,
    wtab: np.ndarray,
) -> np.ndarray:
    """Exact joint-decoding error for a batch of codebooks (rows as values)."""
    n_cb = cb_values.shape[0]
    n_maps, r = perms.shape
    rows_perm = cb_values[:, perms]  # (n_cb, n_maps, r)
    cost = np.zeros((ym.shape[0], n_cb, n_maps), dtype=np.int32)
    for i in range(r):
        cost += pc[ym[:, i]][:, rows_perm[:, :, i]]
    t_min = cost.min(axis=2)
    correct = (mult[:, None] * wtab[t_min]).sum(axis=0) / n_maps
    return np.clip(1.0 - correct, 0.0, 1.0)


def min_bee_id_error(
    n: int,
    m: int,
    p: float,
    k: int,
    budget: int = DEFAULT_BUDGET,
    prune: bool = False,
) -> ExactError:
    """Minimum exact identification error over all codebooks (joint decoding).

    Joint minimum-cost decoding attains the optimum for every codebook, so
    minimizing its exact error over the full codebook sweep yields the
    minimum over all decoders as well.
    """
    p = _check_probability(p)
    if n < 1 or m < 1:
        raise ValueError(f"need n >= 1 and m >= 1, got n={n}, m={m}")
    if not 0 <= k < m:
        raise ValueError(f"need 0 <= k < m, got k={k}, m={m}")
    r = m - k
    n_maps = math.perm(m, r)
    if n > _MAX_EXACT_N or n * m > 62 or n * r > 62:
        raise ResourceLimitError("instance too large for exact enumeration")
    nominal = (1 << (n * m)) * n_maps * (1 << (n * r))
    if nominal > budget:
        raise ResourceLimitError(
            f"2^{n * m} codebooks x {n_maps} maps x 2^{n * r} noise patterns "
            f"exceed budget {budget}"
        )
    perms = np.array(
        list(itertools.permutations(range(m), r)), dtype=np.int64
    ).reshape(-1, r)
    ym, mult = _observation_multisets(1 << n, r)
    vals = np.arange(1 << n, dtype=np.int64)
    pc = np.bitwise_count(vals[:, None] ^ vals[None, :]).astype(np.int32)
    wtab = _weight_table(p, n * r)
    # chunk the codebook sweep so the (obs, codebook, map) cost block stays small
    chunk = max(1, (1 << 23) // max(1, ym.shape[0] * n_maps))
    best = 1.0
    for cb in _iter_codebook_chunks(1 << n, m, prune, chunk=chunk):
        err = _joint_error_batch(cb, perms, ym, mult, pc, wtab)
        best = min(best, float(err.min()))
    return ExactError(value=max(0.0, best), n=n, m=m, k=k, p=p, decoder="joint")
