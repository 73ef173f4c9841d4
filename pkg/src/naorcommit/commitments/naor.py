"""Naor's bit commitment: ``c = G(x)`` for 0, ``c = G(x) xor r`` for 1."""

from __future__ import annotations

from dataclasses import dataclass

from ..expansion import PRODUCTION, ExpansionFunction
from ..gf2 import BitVector
from .base import Commitment, as_message, default_rng, random_bits


@dataclass(frozen=True)
class NaorParams:
    n: int
    r: BitVector
    prg: ExpansionFunction = PRODUCTION

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if len(self.r) != 3 * self.n:
            raise ValueError(f"challenge must have 3n = {3 * self.n} bits, got {len(self.r)}")


def naor_challenge(n: int, randomness=None, prg: ExpansionFunction = PRODUCTION) -> NaorParams:
    rng = default_rng(randomness)
    return NaorParams(n, random_bits(rng, 3 * n), prg)


def naor_commit(p: NaorParams, b, x: BitVector) -> Commitment:
    bit = as_message(b, 1)
    if len(x) != p.n:
        raise ValueError(f"seed must have n = {p.n} bits, got {len(x)}")
    g = p.prg(x, 3 * p.n)
    return Commitment(g ^ p.r if bit.bits else g)


def naor_verify(p: NaorParams, c: Commitment, b, x: BitVector) -> bool:
    try:
        bit = as_message(b, 1)
    except (ValueError, TypeError):
        return False
    if len(x) != p.n or c.c2 is not None:
        return False
    g = p.prg(x, 3 * p.n)
    expected = g ^ (p.r if bit.bits else BitVector.zeros(3 * p.n))
    return expected == c.c
