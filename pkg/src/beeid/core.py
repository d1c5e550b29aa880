"""Bit-packed binary codewords and codebooks.

Rows are stored as little-endian-packed uint64 words so that Hamming
distance reduces to XOR plus a population count, which is where nearly all
of the simulation time goes.  Padding bits past the declared length are
kept at zero, so popcounts over whole words are always valid.

All objects are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import numpy as np

_WORD_BITS = 64


class ResourceLimitError(RuntimeError):
    """Requested computation exceeds the configured enumeration budget."""


def _num_words(n: int) -> int:
    return (n + _WORD_BITS - 1) // _WORD_BITS


def _tail_mask(n: int) -> np.uint64:
    r = n % _WORD_BITS
    if r == 0:
        return np.uint64(0xFFFFFFFFFFFFFFFF)
    return np.uint64((1 << r) - 1)


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a (..., n) array of 0/1 values into (..., ceil(n/64)) uint64 words."""
    bits = np.asarray(bits, dtype=np.uint8)
    n = bits.shape[-1]
    pad = _num_words(n) * _WORD_BITS - n
    if pad:
        bits = np.concatenate(
            [bits, np.zeros(bits.shape[:-1] + (pad,), dtype=np.uint8)], axis=-1
        )
    packed = np.packbits(bits, axis=-1, bitorder="little")
    return packed.view(np.uint64)


def unpack_bits(words: np.ndarray, n: int) -> np.ndarray:
    """Inverse of pack_bits; returns a (..., n) uint8 array."""
    raw = np.unpackbits(words.view(np.uint8), axis=-1, bitorder="little")
    return raw[..., :n]


def popcount(words: np.ndarray) -> np.ndarray:
    return np.bitwise_count(words)


class Codeword:
    """A fixed-length binary row, bit-packed into uint64 words."""

    __slots__ = ("n", "words")

    def __init__(self, words: np.ndarray, n: int):
        if n < 1:
            raise ValueError(f"blocklength must be >= 1, got {n}")
        words = np.ascontiguousarray(words, dtype=np.uint64)
        if words.shape != (_num_words(n),):
            raise ValueError(
                f"expected {_num_words(n)} words for n={n}, got shape {words.shape}"
            )
        if words[-1] & ~_tail_mask(n):
            raise ValueError("padding bits beyond n must be zero")
        words.flags.writeable = False
        self.n = n
        self.words = words

    @classmethod
    def from_bits(cls, bits) -> "Codeword":
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.ndim != 1:
            raise ValueError("bits must be one-dimensional")
        if bits.size and bits.max() > 1:
            raise ValueError("bits must be 0 or 1")
        return cls(pack_bits(bits), bits.size)

    @classmethod
    def from_string(cls, s: str) -> "Codeword":
        if set(s) - {"0", "1"}:
            raise ValueError(f"codeword string must contain only '0'/'1': {s!r}")
        return cls.from_bits([int(ch) for ch in s])

    def bits(self) -> np.ndarray:
        return unpack_bits(self.words, self.n)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Codeword):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.words, other.words))

    def __hash__(self) -> int:
        return hash((self.n, self.words.tobytes()))

    def __str__(self) -> str:
        return "".join("1" if b else "0" for b in self.bits())

    def __repr__(self) -> str:
        return f"Codeword({self})"


class Codebook:
    """Ordered collection of m codewords of common length n.

    Row order is significant: the row index is the identity (0-based in
    code, 1-based in text formats and documentation).
    """

    __slots__ = ("n", "m", "words")

    def __init__(self, words: np.ndarray, n: int):
        words = np.ascontiguousarray(words, dtype=np.uint64)
        if words.ndim != 2 or words.shape[0] < 1:
            raise ValueError("codebook needs a (m, words) array with m >= 1")
        if n < 1:
            raise ValueError(f"blocklength must be >= 1, got {n}")
        if words.shape[1] != _num_words(n):
            raise ValueError(
                f"expected {_num_words(n)} words per row for n={n}, "
                f"got {words.shape[1]}"
            )
        if np.any(words[:, -1] & ~_tail_mask(n)):
            raise ValueError("padding bits beyond n must be zero")
        words.flags.writeable = False
        self.n = n
        self.m = words.shape[0]
        self.words = words

    @classmethod
    def from_bit_matrix(cls, bits) -> "Codebook":
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.ndim != 2:
            raise ValueError("bit matrix must be two-dimensional")
        if bits.size and bits.max() > 1:
            raise ValueError("bits must be 0 or 1")
        return cls(pack_bits(bits), bits.shape[1])

    @classmethod
    def from_rows(cls, rows) -> "Codebook":
        rows = list(rows)
        if not rows:
            raise ValueError("codebook needs at least one row")
        n = rows[0].n
        if any(r.n != n for r in rows):
            raise ValueError("all rows must have the same length")
        return cls(np.stack([r.words for r in rows]), n)

    @classmethod
    def from_strings(cls, lines) -> "Codebook":
        return cls.from_rows(Codeword.from_string(s) for s in lines)

    def row(self, i: int) -> Codeword:
        return Codeword(self.words[i].copy(), self.n)

    def bit_matrix(self) -> np.ndarray:
        return unpack_bits(self.words, self.n)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Codebook):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.words, other.words))

    def __repr__(self) -> str:
        return f"Codebook(m={self.m}, n={self.n})"


def hamming_distance(a: Codeword, b: Codeword) -> int:
    """Number of positions where a and b differ."""
    if a.n != b.n:
        raise ValueError(f"length mismatch: {a.n} != {b.n}")
    return int(popcount(a.words ^ b.words).sum())


def distance_matrix(rows_a: np.ndarray, rows_b: np.ndarray) -> np.ndarray:
    """Pairwise Hamming distances between packed row sets.

    rows_a: (r, W) uint64, rows_b: (m, W) uint64 -> (r, m) int64.
    Processed in row blocks so the XOR intermediate stays bounded.
    """
    r, w = rows_a.shape
    m = rows_b.shape[0]
    out = np.empty((r, m), dtype=np.int64)
    block = max(1, (1 << 22) // max(1, m * w))
    for lo in range(0, r, block):
        x = rows_a[lo : lo + block, None, :] ^ rows_b[None, :, :]
        out[lo : lo + block] = popcount(x).sum(axis=2, dtype=np.int64)
    return out


def rowwise_distance(rows_a: np.ndarray, rows_b: np.ndarray) -> np.ndarray:
    """Per-row Hamming distances between aligned packed row sets (r, W)."""
    return popcount(rows_a ^ rows_b).sum(axis=1, dtype=np.int64)


def random_codebook(n: int, m: int, rng: np.random.Generator) -> Codebook:
    """Codebook with m rows of n i.i.d. uniform bits, deterministic given rng state."""
    if n < 1:
        raise ValueError(f"blocklength must be >= 1, got {n}")
    if m < 1:
        raise ValueError(f"row count must be >= 1, got {m}")
    bits = rng.integers(0, 2, size=(m, n), dtype=np.uint8)
    return Codebook.from_bit_matrix(bits)


def codebook_min_distance(c: Codebook) -> int:
    """Minimum pairwise Hamming distance over distinct row indices."""
    if c.m < 2:
        raise ValueError("minimum distance needs at least 2 rows")
    d = distance_matrix(c.words, c.words)
    iu = np.triu_indices(c.m, k=1)
    return int(d[iu].min())


def load_codebook(path) -> Codebook:
    """Read a codebook from text: one row of '0'/'1' per line, equal lengths.

    Malformed input raises ValueError naming the offending line number.
    """
    lines = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if set(line) - {"0", "1"}:
                raise ValueError(
                    f"{path}:{lineno}: rows must contain only '0'/'1' characters"
                )
            if lines and len(line) != len(lines[0][1]):
                raise ValueError(
                    f"{path}:{lineno}: row length {len(line)} differs from "
                    f"line {lines[0][0]} length {len(lines[0][1])}"
                )
            lines.append((lineno, line))
    if not lines:
        raise ValueError(f"{path}: no codebook rows found")
    return Codebook.from_strings(line for _, line in lines)


def save_codebook(c: Codebook, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for i in range(c.m):
            fh.write(str(c.row(i)) + "\n")
