"""Closed-form exponent and capacity bounds for the identification problem.

All rates, entropies, and exponents are in base-2 units (bits).  The
reliability function itself has no closed form; everything here evaluates
the computable sandwich around it:

* lower route: the typical-linear-codes exponent, a three-piece curve whose
  pieces join continuously at the expurgated and critical rates;
* upper route: the pointwise minimum of the sphere-packing exponent, the
  linear-programming distance bound times the Bhattacharyya parameter, and
  straight-line chords joining the two.

Chord endpoints are drawn from a fixed per-p grid rather than a grid that
moves with the query rate: every chord is a valid upper bound on its own
interval, entering chords start above the LP-distance component and leaving
chords hand off to the sphere-packing component continuously, so the
resulting envelope is provably continuous and non-increasing (the property
the curve tests pin down to 1e-12).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_LOG2 = math.log(2.0)

_GV_TOL = 1e-12
_GV_MAX_ITER = 96

_CHORD_POINTS = 200
_ROOT_TOL = 1e-13


def binary_entropy(x: float) -> float:
    """H(x) = -x log2 x - (1-x) log2 (1-x), with 0 log 0 = 0."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"entropy argument must lie in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -(x * math.log2(x) + (1.0 - x) * math.log2(1.0 - x))


def delta_gv(rate: float) -> float:
    """Gilbert-Varshamov distance: the delta in [0, 0.5] with H(delta) = 1 - rate.

    Bisection on the monotone branch; endpoints extend by continuity
    (rate 0 -> 0.5, rate 1 -> 0).
    """
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"rate must lie in [0, 1], got {rate}")
    if rate == 0.0:
        return 0.5
    if rate == 1.0:
        return 0.0
    target = 1.0 - rate
    lo, hi = 0.0, 0.5
    for _ in range(_GV_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if binary_entropy(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-17 and abs(binary_entropy(0.5 * (lo + hi)) - target) <= _GV_TOL:
            break
    return 0.5 * (lo + hi)


def delta_lp(rate: float) -> float:
    """Linear-programming upper bound on the best relative minimum distance."""
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"rate must lie in [0, 1], got {rate}")
    d = delta_gv(1.0 - rate)
    return 0.5 - math.sqrt(d * (1.0 - d))


def bhattacharyya(p: float) -> float:
    """B_p = -log2 sqrt(4 p (1-p)) for the binary symmetric channel."""
    if not 0.0 < p < 0.5:
        raise ValueError(f"crossover probability must lie in (0, 0.5), got {p}")
    return -0.5 * math.log2(4.0 * p * (1.0 - p))


def kl_bernoulli(x: float, y: float) -> float:
    """Base-2 KL divergence D(x||y) between Bernoulli parameters."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"first argument must lie in [0, 1], got {x}")
    if not 0.0 < y < 1.0:
        raise ValueError(f"second argument must lie in (0, 1), got {y}")
    total = 0.0
    if x > 0.0:
        total += x * math.log2(x / y)
    if x < 1.0:
        total += (1.0 - x) * math.log2((1.0 - x) / (1.0 - y))
    return total


@dataclass(frozen=True)
class RateConstants:
    """Breakpoints of the typical-linear-codes exponent (bits)."""

    r_ex: float
    r_cr: float
    r_0: float


def rate_constants(p: float) -> RateConstants:
    """Expurgated rate, critical rate, and cutoff-style rate for BSC(p)."""
    if not 0.0 < p < 0.5:
        raise ValueError(f"crossover probability must lie in (0, 0.5), got {p}")
    s = math.sqrt(4.0 * p * (1.0 - p))
    r_ex = 1.0 - binary_entropy(s / (1.0 + s))
    sp, sq = math.sqrt(p), math.sqrt(1.0 - p)
    r_cr = 1.0 - binary_entropy(sp / (sp + sq))
    r_0 = 1.0 - math.log1p(s) / _LOG2
    return RateConstants(r_ex=r_ex, r_cr=r_cr, r_0=r_0)


def capacity(p: float) -> float:
    """Shannon capacity 1 - H(p) of BSC(p)."""
    if not 0.0 < p < 0.5:
        raise ValueError(f"crossover probability must lie in (0, 0.5), got {p}")
    return 1.0 - binary_entropy(p)


def e_tlc(rate: float, p: float) -> float:
    """Typical-linear-codes exponent: the best known reliability lower bound.

    delta_GV(R)*B_p up to the expurgated rate, then the linear piece
    R_0 - R up to the critical rate, then D(delta_GV(R)||p) up to capacity;
    zero beyond capacity.
    """
    if rate <= 0.0:
        raise ValueError(f"rate must be positive, got {rate}")
    rc = rate_constants(p)
    if rate >= capacity(p):
        return 0.0
    if rate <= rc.r_ex:
        return delta_gv(rate) * bhattacharyya(p)
    if rate <= rc.r_cr:
        return rc.r_0 - rate
    return kl_bernoulli(delta_gv(rate), p)


def e_sp(rate: float, p: float) -> float:
    """Sphere-packing exponent D(delta_GV(R)||p); zero at and above capacity."""
    if rate <= 0.0:
        raise ValueError(f"rate must be positive, got {rate}")
    if not 0.0 < p < 0.5:
        raise ValueError(f"crossover probability must lie in (0, 0.5), got {p}")
    if rate >= capacity(p):
        return 0.0
    return kl_bernoulli(delta_gv(rate), p)


_chord_cache: dict = {}


def _chord_grid(p: float, points: int) -> tuple[np.ndarray, np.ndarray]:
    """Fixed endpoint grid and precomputed curve values for chord bounds.

    Returns (grid, left_vals, right_vals): left_vals[i] is the LP-distance
    bound at grid[i] (chord left endpoints), right_vals[j] the
    sphere-packing exponent at grid[j] (chord right endpoints).
    """
    key = (p, points)
    cached = _chord_cache.get(key)
    if cached is not None:
        return cached
    cap = capacity(p)
    low = cap * np.array([1e-7, 1e-6, 1e-5, 1e-4, 1e-3])
    grid = np.unique(
        np.concatenate([low, np.linspace(cap / points, cap * (1.0 - 0.5 / points), points)])
    )
    bp = bhattacharyya(p)
    left = np.array([delta_lp(r) * bp for r in grid])
    right = np.array([e_sp(r, p) for r in grid])
    result = (grid, left, right)
    _chord_cache[key] = result
    return result


def e_upper(rate: float, p: float, chord_points: int = _CHORD_POINTS) -> float:
    """Best available reliability upper bound at the given rate.

    Pointwise minimum of the sphere-packing exponent, delta_LP(R)*B_p, and
    straight-line chords joining the LP bound at R1 < R to the
    sphere-packing bound at R2 > R over the fixed endpoint grid.
    """
    if rate <= 0.0:
        raise ValueError(f"rate must be positive, got {rate}")
    if rate >= capacity(p):
        return 0.0
    best = min(e_sp(rate, p), delta_lp(rate) * bhattacharyya(p))
    grid, left, right = _chord_grid(p, chord_points)
    li = grid < rate
    rj = grid > rate
    if li.any() and rj.any():
        r1, a1 = grid[li], left[li]
        r2, b2 = grid[rj], right[rj]
        t = (rate - r1[:, None]) / (r2[None, :] - r1[:, None])
        chords = a1[:, None] + t * (b2[None, :] - a1[:, None])
        best = min(best, float(chords.min()))
    return max(0.0, best)


def bee_exponent_bounds(rate: float, p: float) -> tuple[float, float]:
    """Lower and upper bounds on the identification exponent |E(R,p) - R|+."""
    lower = max(0.0, e_tlc(rate, p) - rate)
    upper = max(0.0, e_upper(rate, p) - rate)
    return lower, upper


@dataclass(frozen=True)
class CapacityBounds:
    """Bracketing values for the identification capacity (root of E(R,p)=R)."""

    lower: float
    upper: float


def _bisect_root(f, lo: float, hi: float, tol: float = _ROOT_TOL) -> float:
    """Root of a strictly decreasing f with f(lo) > 0 > f(hi)."""
    flo, fhi = f(lo), f(hi)
    if flo <= 0.0:
        return lo
    if fhi >= 0.0:
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def capacity_bounds(p: float) -> CapacityBounds:
    """Roots of e_tlc(R,p) = R and e_upper(R,p) = R.

    Both curves are continuous and non-increasing while R is strictly
    increasing, so each difference has a unique sign change on
    (0, 1 - H(p)); bisection brackets it to ~1e-13.
    """
    cap = capacity(p)
    lo = cap * 1e-9
    lower = _bisect_root(lambda r: e_tlc(r, p) - r, lo, cap)
    upper = _bisect_root(lambda r: e_upper(r, p) - r, lo, cap)
    return CapacityBounds(lower=lower, upper=upper)


def no_absentee_bounds(rate: float, p: float) -> tuple[float, float]:
    """Exponent bounds for the k = 0 problem, valid for 0 < R < R_ex/2."""
    rc = rate_constants(p)
    if not 0.0 < rate < rc.r_ex / 2.0:
        raise ValueError(
            f"no-absentee bounds require 0 < R < R_ex/2 = {rc.r_ex / 2.0:.6g}, "
            f"got {rate}"
        )
    bp = bhattacharyya(p)
    lower = 2.0 * delta_gv(2.0 * rate) * bp
    upper = 2.0 * delta_lp(rate) * bp + rate
    return lower, upper


def theorem3_gap(rate: float, p: float) -> tuple[float, float]:
    """Vanishing-absentee-fraction exponent limit vs. the k = 0 lower bound.

    Returns (max(0, delta_LP(R)*B_p - R), 2*delta_GV(2R)*B_p); the first
    strictly below the second certifies the exponent discontinuity at a
    zero absentee fraction.
    """
    rc = rate_constants(p)
    hi = min(0.169, rc.r_ex / 2.0)
    if not 0.0 < rate < hi:
        raise ValueError(
            f"gap certificate requires 0 < R < min(0.169, R_ex/2) = {hi:.6g}, "
            f"got {rate}"
        )
    bp = bhattacharyya(p)
    absentee_limit_upper = max(0.0, delta_lp(rate) * bp - rate)
    no_absentee_lower = 2.0 * delta_gv(2.0 * rate) * bp
    return absentee_limit_upper, no_absentee_lower


def check_fig5(p_grid) -> list[tuple[float, float, float, bool]]:
    """Evaluate delta_GV(R_ex/2)*B_p vs R_ex/2 across crossover probabilities."""
    out = []
    for p in p_grid:
        rc = rate_constants(p)
        lhs = delta_gv(rc.r_ex / 2.0) * bhattacharyya(p)
        rhs = rc.r_ex / 2.0
        out.append((float(p), lhs, rhs, lhs > rhs))
    return out


def check_fig6(r_grid) -> list[tuple[float, float, float, bool]]:
    """Evaluate delta_LP(R) vs 2*delta_GV(2R) across rates below 0.5."""
    out = []
    for rate in r_grid:
        if not 0.0 < rate < 0.5:
            raise ValueError(f"rate must lie in (0, 0.5), got {rate}")
        lhs = delta_lp(rate)
        rhs = 2.0 * delta_gv(2.0 * rate)
        out.append((float(rate), lhs, rhs, lhs < rhs))
    return out


def lemma_bound_values(
    n: int,
    m: int,
    k: int,
    eps: float,
    pe_small: float,
    pe_full: float,
) -> tuple[float, float, float]:
    """Finite-length bound right-hand sides from the block error probabilities.

    pe_full is the minimum block error with m codewords; pe_small the one
    with floor(k*eps) codewords.  Returns the union-bound RHS and the two
    joint-decoding lower-bound RHS variants (the second uses the natural
    exponential, as stated).
    """
    if not 0.0 < eps < 0.5:
        raise ValueError(f"eps must lie in (0, 0.5), got {eps}")
    if k <= 1.0 / eps:
        raise ValueError(f"need k > 1/eps, got k={k}, 1/eps={1.0 / eps}")
    if not 0 <= k < m:
        raise ValueError(f"need 0 <= k < m, got k={k}, m={m}")
    for name, pe in (("pe_small", pe_small), ("pe_full", pe_full)):
        if not 0.0 <= pe <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {pe}")
    lemma1_rhs = min(1.0, (m - k) * pe_full)
    x = (m - k) * eps * pe_small
    lemma2_rhs_12 = 0.5 * (1.0 - 2.0 * eps) * min(1.0, x)
    lemma2_rhs_13 = (1.0 - 2.0 * eps) * (1.0 - math.exp(-x))
    return lemma1_rhs, lemma2_rhs_12, lemma2_rhs_13


@dataclass(frozen=True)
class ExponentCurve:
    """A sampled bound curve: strictly increasing rates with values >= 0."""

    rates: tuple
    values: tuple
    kind: str

    def __post_init__(self):
        r = np.asarray(self.rates)
        if r.size and np.any(np.diff(r) <= 0):
            raise ValueError("rates must be strictly increasing")
        if any(v < 0 for v in self.values):
            raise ValueError("curve values must be non-negative")

    def to_csv(self) -> str:
        lines = [f"R,{self.kind}"]
        for r, v in zip(self.rates, self.values):
            lines.append(f"{r:.12g},{v:.12g}")
        return "\n".join(lines) + "\n"


def single_bound_curve(
    p: float, rmin: float, rmax: float, steps: int, kind: str
) -> ExponentCurve:
    """One side of the exponent sandwich as an ExponentCurve."""
    if kind not in ("lower", "upper"):
        raise ValueError(f"kind must be 'lower' or 'upper', got {kind!r}")
    rows = exponent_curve(p, rmin, rmax, steps)
    idx = 1 if kind == "lower" else 2
    return ExponentCurve(
        rates=tuple(r for r, _, _ in rows),
        values=tuple(row[idx] for row in rows),
        kind=kind,
    )


def exponent_curve(
    p: float, rmin: float, rmax: float, steps: int
) -> list[tuple[float, float, float]]:
    """Rows (R, lower, upper) of the identification exponent bounds."""
    if not rmin > 0.0 or not rmax > rmin or steps < 1:
        raise ValueError(
            f"need 0 < rmin < rmax and steps >= 1, got rmin={rmin}, "
            f"rmax={rmax}, steps={steps}"
        )
    rates = np.linspace(rmin, rmax, steps)
    return [(float(r),) + bee_exponent_bounds(float(r), p) for r in rates]


def capacity_curve(
    pmin: float, pmax: float, steps: int
) -> list[tuple[float, float, float]]:
    """Rows (p, cap_lower, cap_upper) of the identification capacity bounds."""
    if not 0.0 < pmin <= pmax < 0.5 or steps < 1:
        raise ValueError(
            f"need 0 < pmin <= pmax < 0.5 and steps >= 1, got pmin={pmin}, "
            f"pmax={pmax}, steps={steps}"
        )
    ps = np.linspace(pmin, pmax, steps)
    rows = []
    for p in ps:
        cb = capacity_bounds(float(p))
        rows.append((float(p), cb.lower, cb.upper))
    return rows
