"""Naor-style commitment schemes and the preprocessing wrapper."""

from .base import Commitment, Opening
from .circulant import StringParams, string_commit, string_params, string_verify, string_width
from .interactive import ExchangeResult, commit_exchange, expected_payload_bits
from .kilian import KilianParams, kilian_commit, kilian_params, kilian_verify
from .naor import NaorParams, naor_challenge, naor_commit, naor_verify
from .preproc import (
    PreprocBatch,
    pack_messages,
    unpack_element,
    PreprocCommitment,
    PreprocPublic,
    PreprocRecord,
    PreprocScheme,
    PreprocStore,
    RecordReuseError,
    preproc_commit,
    preproc_offline,
    preproc_verify,
)
from .schemes import (
    SCHEME_IDS,
    CirculantStringScheme,
    KilianScheme,
    NaorBitScheme,
    TwoBitScheme,
    get_scheme,
)
from .twobit import TwoBitParams, twobit_challenge, twobit_commit, twobit_verify

__all__ = [
    "Commitment", "Opening",
    "NaorParams", "naor_challenge", "naor_commit", "naor_verify",
    "TwoBitParams", "twobit_challenge", "twobit_commit", "twobit_verify",
    "StringParams", "string_params", "string_commit", "string_verify", "string_width",
    "KilianParams", "kilian_params", "kilian_commit", "kilian_verify",
    "PreprocRecord", "PreprocPublic", "PreprocCommitment", "PreprocScheme", "PreprocStore",
    "RecordReuseError", "PreprocBatch", "pack_messages", "unpack_element", "preproc_offline", "preproc_commit", "preproc_verify",
    "SCHEME_IDS", "NaorBitScheme", "TwoBitScheme", "CirculantStringScheme", "KilianScheme",
    "get_scheme",
    "ExchangeResult", "commit_exchange", "expected_payload_bits",
]
