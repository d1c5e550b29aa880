"""Decoders: per-row nearest codeword, joint minimum-cost assignment, brute force.

The joint decoder solves a rectangular (m-k) x m assignment problem on the
integer Hamming-cost matrix; scipy's linear_sum_assignment (a shortest
augmenting path / Jonker-Volgenant style solver) returns a deterministic
optimum.  The brute-force variant enumerates all injective maps and is the
ground-truth oracle for small m.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .channel import InjectiveMap, Observation
from .core import Codebook, ResourceLimitError, distance_matrix


@dataclass(frozen=True)
class DecodeResult:
    """Decoder output: assignment[i] is the codebook index for observed row i.

    ``injective`` is True iff all entries are distinct.  Joint decoders
    always produce injective results; the independent decoder may repeat.
    """

    assignment: tuple
    injective: bool

    @classmethod
    def from_array(cls, assignment) -> "DecodeResult":
        arr = tuple(int(x) for x in assignment)
        return cls(arr, len(set(arr)) == len(arr))


def _cost_matrix(obs: Observation, c: Codebook) -> np.ndarray:
    if obs.n != c.n:
        raise ValueError(f"length mismatch: observation n={obs.n}, codebook n={c.n}")
    return distance_matrix(obs.words, c.words)


def decode_independent(
    obs: Observation, c: Codebook, rng: np.random.Generator
) -> DecodeResult:
    """Nearest codeword per row; ties broken uniformly at random.

    Costs are integers, so adding U[0,1) jitter before the argmin selects
    uniformly among tied minima without crossing cost classes.
    """
    cost = _cost_matrix(obs, c)
    if cost.size == 0:
        return DecodeResult.from_array([])
    keys = cost + rng.random(cost.shape)
    return DecodeResult.from_array(np.argmin(keys, axis=1))


def decode_joint_ml(obs: Observation, c: Codebook) -> DecodeResult:
    """Injective assignment minimizing total Hamming cost (deterministic optimum)."""
    if obs.count > c.m:
        raise ValueError(
            f"more observation rows ({obs.count}) than codewords ({c.m})"
        )
    cost = _cost_matrix(obs, c)
    row_ind, col_ind = linear_sum_assignment(cost)
    assignment = np.empty(obs.count, dtype=np.int64)
    assignment[row_ind] = col_ind
    return DecodeResult.from_array(assignment)


def decode_joint_bruteforce(
    obs: Observation, c: Codebook, budget: int = 10_000_000
) -> DecodeResult:
    """Exact argmin over all injective maps; lexicographically smallest on ties."""
    if obs.count > c.m:
        raise ValueError(
            f"more observation rows ({obs.count}) than codewords ({c.m})"
        )
    n_maps = math.perm(c.m, obs.count)
    if n_maps > budget:
        raise ResourceLimitError(
            f"{n_maps} injective maps exceed brute-force budget {budget}"
        )
    cost = _cost_matrix(obs, c)
    best = None
    best_cost = None
    for perm in itertools.permutations(range(c.m), obs.count):
        total = sum(cost[i, j] for i, j in enumerate(perm))
        if best_cost is None or total < best_cost:
            best, best_cost = perm, total
    return DecodeResult.from_array(best if best is not None else [])


def assignment_cost(obs: Observation, c: Codebook, assignment) -> int:
    """Total Hamming cost of an assignment (0-based codebook indices)."""
    cost = _cost_matrix(obs, c)
    return int(sum(cost[i, j] for i, j in enumerate(assignment)))


def is_error(result: DecodeResult, truth: InjectiveMap) -> bool:
    """True iff the decoded map differs from the channel map in any position."""
    decoded = np.asarray(result.assignment, dtype=np.int64)
    if decoded.size != truth.image.size:
        raise ValueError(
            f"length mismatch: decoded {decoded.size}, truth {truth.image.size}"
        )
    return bool(np.any(decoded != truth.image))
