"""Types shared by every commitment scheme."""

from __future__ import annotations

import secrets
from dataclasses import dataclass

from ..gf2 import BitVector


@dataclass(frozen=True)
class Commitment:
    c: BitVector
    c2: BitVector | None = None  # Kilian only: the masked message


@dataclass(frozen=True)
class Opening:
    message: BitVector
    x: BitVector
    s: BitVector | None = None  # Kilian only: the inner PRG seed


def default_rng(rng=None):
    """Anything with ``getrandbits`` works; the default is the OS CSPRNG."""
    return secrets.SystemRandom() if rng is None else rng


def random_bits(rng, length: int) -> BitVector:
    return BitVector(length, rng.getrandbits(length) if length else 0)


def as_message(b, arity: int | None = None) -> BitVector:
    """Accept an int bit, a bit tuple/list, a ``"01"`` string or a BitVector."""
    if isinstance(b, BitVector):
        v = b
    elif isinstance(b, (int, bool)) and arity in (None, 1):
        if b not in (0, 1):
            raise ValueError(f"not a bit: {b!r}")
        v = BitVector(1, int(b))
    elif isinstance(b, str):
        v = BitVector.from_str(b)
    else:
        v = BitVector.from_bits(b)
    if arity is not None and len(v) != arity:
        raise ValueError(f"message must have {arity} bits, got {len(v)}")
    return v


def smallest_power_of_two_above(bound: int) -> int:
    """Smallest ``2**q`` strictly greater than ``bound``."""
    z = 1
    while z <= bound:
        z <<= 1
    return z


def combine(vectors: list[BitVector], coefficients: BitVector) -> int:
    """Packed ``sum_i coefficients[i] * vectors[i]`` over GF(2)."""
    acc = 0
    bits = coefficients.bits
    i = 0
    while bits:
        if bits & 1:
            acc ^= vectors[i].bits
        bits >>= 1
        i += 1
    return acc
