"""Bee-identification channel: simulation, exact oracles, and exponent bounds.

The package models identification of binary barcodes observed through an
effective channel that permutes codebook rows, deletes k of them, and adds
BSC(p) noise.  It provides the two decoders (per-row nearest codeword and
joint minimum-cost assignment), exhaustive exact error computations on tiny
instances, reproducible Monte Carlo estimation, and the numerical machinery
for the error-exponent and capacity bound curves.
"""

__version__ = "0.1.0"

from .core import (
    Codebook,
    Codeword,
    ResourceLimitError,
    codebook_min_distance,
    hamming_distance,
    load_codebook,
    random_codebook,
)
from .channel import (
    ChannelParams,
    InjectiveMap,
    Observation,
    observation_log_likelihood,
    sample_injective_map,
    transmit,
)
from .decode import (
    DecodeResult,
    decode_independent,
    decode_joint_bruteforce,
    decode_joint_ml,
    is_error,
)
from .oracle import (
    ExactError,
    exact_error_probability,
    min_bee_id_error,
    min_codebook_error,
)
from .montecarlo import (
    ErrorEstimate,
    ExperimentConfig,
    estimate_error,
    run_experiment,
)
from . import exponents

__all__ = [
    "Codebook",
    "Codeword",
    "ResourceLimitError",
    "ChannelParams",
    "InjectiveMap",
    "Observation",
    "DecodeResult",
    "ExactError",
    "ErrorEstimate",
    "ExperimentConfig",
    "codebook_min_distance",
    "decode_independent",
    "decode_joint_bruteforce",
    "decode_joint_ml",
    "estimate_error",
    "exact_error_probability",
    "exponents",
    "hamming_distance",
    "is_error",
    "load_codebook",
    "min_bee_id_error",
    "min_codebook_error",
    "observation_log_likelihood",
    "random_codebook",
    "run_experiment",
    "sample_injective_map",
    "transmit",
]
