"""The effective channel: uniform injective row mapping, row deletion, BSC noise.

A transmission selects m-k distinct codebook rows via a uniformly random
injective map, then flips each bit of the selected rows independently with
probability p.  The observation likelihood depends on the per-row Hamming
distances only, so maximizing it over candidate maps is the same as
minimizing total distance.
"""

from __future__ import annotations

import math

import numpy as np

from .core import Codebook, pack_bits, rowwise_distance, unpack_bits


class InjectiveMap:
    """An injective assignment of observed row positions to codebook rows.

    ``image[i]`` is the (0-based) codebook index transmitted in observed row
    i.  All entries are distinct and lie in ``range(m)``.
    """

    __slots__ = ("m", "image")

    def __init__(self, image, m: int):
        image = np.ascontiguousarray(image, dtype=np.int64)
        if image.ndim != 1:
            raise ValueError("image must be one-dimensional")
        if image.size > m:
            raise ValueError(f"domain size {image.size} exceeds m={m}")
        if image.size:
            if image.min() < 0 or image.max() >= m:
                raise ValueError(f"image indices must lie in [0, {m})")
            if np.unique(image).size != image.size:
                raise ValueError("image indices must be distinct")
        image.flags.writeable = False
        self.m = m
        self.image = image

    def __len__(self) -> int:
        return self.image.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, InjectiveMap):
            return NotImplemented
        return self.m == other.m and bool(np.array_equal(self.image, other.image))

    def __repr__(self) -> str:
        return f"InjectiveMap({list(self.image)}, m={self.m})"


class ChannelParams:
    """Crossover probability p in [0, 0.5) and absentee count k >= 0.

    p = 0 is permitted purely for deterministic tests; the model of interest
    has 0 < p < 0.5.
    """

    __slots__ = ("p", "k")

    def __init__(self, p: float, k: int):
        if not 0.0 <= p < 0.5:
            raise ValueError(f"crossover probability must lie in [0, 0.5), got {p}")
        if k < 0:
            raise ValueError(f"absentee count must be >= 0, got {k}")
        self.p = float(p)
        self.k = int(k)

    def __repr__(self) -> str:
        return f"ChannelParams(p={self.p}, k={self.k})"


class Observation:
    """The noisy channel output: m-k packed rows of length n."""

    __slots__ = ("n", "count", "words")

    def __init__(self, words: np.ndarray, n: int):
        words = np.ascontiguousarray(words, dtype=np.uint64)
        if words.ndim != 2:
            raise ValueError("observation needs a (rows, words) array")
        words.flags.writeable = False
        self.n = n
        self.count = words.shape[0]
        self.words = words

    @classmethod
    def from_bit_matrix(cls, bits) -> "Observation":
        bits = np.asarray(bits, dtype=np.uint8)
        return cls(pack_bits(bits), bits.shape[1])

    def bit_matrix(self) -> np.ndarray:
        return unpack_bits(self.words, self.n)

    def __repr__(self) -> str:
        return f"Observation(rows={self.count}, n={self.n})"


def sample_injective_map(m: int, k: int, rng: np.random.Generator) -> InjectiveMap:
    """Uniform draw from all m!/k! injective maps of size m-k.

    Partial Fisher-Yates: only the first m-k swaps are performed, which is
    exactly uniform over prefixes of uniform permutations.
    """
    if not 0 <= k < m:
        raise ValueError(f"need 0 <= k < m, got k={k}, m={m}")
    arr = np.arange(m, dtype=np.int64)
    r = m - k
    for i in range(r):
        j = int(rng.integers(i, m))
        arr[i], arr[j] = arr[j], arr[i]
    return InjectiveMap(arr[:r], m)


def transmit(
    c: Codebook,
    mapping: InjectiveMap,
    params: ChannelParams,
    rng: np.random.Generator,
) -> Observation:
    """Apply the map and per-bit Bernoulli(p) flips to produce an observation."""
    if mapping.m != c.m:
        raise ValueError(f"map is over m={mapping.m} but codebook has m={c.m} rows")
    if len(mapping) != c.m - params.k:
        raise ValueError(
            f"map size {len(mapping)} inconsistent with m-k={c.m - params.k}"
        )
    bits = c.bit_matrix()[mapping.image]
    if params.p > 0.0:
        flips = rng.random(bits.shape) < params.p
        bits = bits ^ flips.astype(np.uint8)
    return Observation.from_bit_matrix(bits)


def observation_log_likelihood(
    obs: Observation, c: Codebook, mapping: InjectiveMap, p: float
) -> float:
    """Natural-log likelihood of obs given the codebook and a candidate map.

    Sum over rows of d_i*ln(p) + (n-d_i)*ln(1-p) with d_i the Hamming
    distance between observed row i and codebook row mapping.image[i].
    """
    if not 0.0 < p < 0.5:
        raise ValueError(f"likelihood requires 0 < p < 0.5, got {p}")
    if obs.n != c.n:
        raise ValueError(f"length mismatch: observation n={obs.n}, codebook n={c.n}")
    if mapping.m != c.m or len(mapping) != obs.count:
        raise ValueError("map dimensions inconsistent with observation/codebook")
    total = int(rowwise_distance(obs.words, c.words[mapping.image]).sum())
    n_total = obs.count * obs.n
    return total * math.log(p) + (n_total - total) * math.log(1.0 - p)
