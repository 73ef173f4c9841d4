"""Statistically binding commitments from a pseudorandom generator, and an
oblivious transfer protocol that audits its receiver with them."""

from .commitments import (
    SCHEME_IDS,
    Commitment,
    Opening,
    commit_exchange,
    get_scheme,
    preproc_commit,
    preproc_offline,
    preproc_verify,
)
from .expansion import PRODUCTION, TOY, KeystreamRandom, enumerate_seeds, expand
from .gf2 import BitVector, F2Polynomial, circulant_is_full_rank, generate_vectors, rank_f2
from .hexio import format_bits, parse_bits

__version__ = "0.1.0"
