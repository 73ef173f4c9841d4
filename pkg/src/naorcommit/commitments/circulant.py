"""String commitment with circulant challenge vectors.

The verifier sends one odd-weight ``r1`` of width ``z``, the smallest power of
two above ``6n + 2t``; both sides expand it into ``r1 .. rt`` by successive
right rotations and ``c = G(x) xor sum b_i * r_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from ..expansion import PRODUCTION, ExpansionFunction
from ..gf2 import BitVector, generate_vectors
from .base import Commitment, as_message, combine, default_rng, random_bits, smallest_power_of_two_above


def string_width(n: int, t: int) -> int:
    return smallest_power_of_two_above(6 * n + 2 * t)


def sample_odd_weight(rng, z: int) -> BitVector:
    # Rejection sampling keeps the draw exactly uniform on odd-weight vectors.
    while True:
        r1 = random_bits(rng, z)
        if r1.weight() & 1:
            return r1


@dataclass(frozen=True)
class StringParams:
    n: int
    t: int
    z: int
    r1: BitVector
    prg: ExpansionFunction = PRODUCTION

    def __post_init__(self):
        if self.n < 1 or self.t < 1:
            raise ValueError("n and t must be at least 1")
        if self.z != string_width(self.n, self.t):
            raise ValueError(f"z must be {string_width(self.n, self.t)} for n={self.n}, t={self.t}")
        if len(self.r1) != self.z:
            raise ValueError(f"challenge must have z = {self.z} bits, got {len(self.r1)}")
        if not self.r1.weight() & 1:
            raise ValueError("challenge must have odd Hamming weight")

    @cached_property
    def vectors(self) -> list[BitVector]:
        return generate_vectors(self.r1, self.t)


def string_params(n: int, t: int, randomness=None, prg: ExpansionFunction = PRODUCTION) -> StringParams:
    rng = default_rng(randomness)
    z = string_width(n, t)
    return StringParams(n, t, z, sample_odd_weight(rng, z), prg)


def _padded(p: StringParams, b) -> BitVector:
    msg = as_message(b)
    if len(msg) > p.t:
        raise ValueError(f"message has {len(msg)} bits, more than t = {p.t}")
    return msg.pad_to(p.t)


def string_commit(p: StringParams, b, x: BitVector) -> Commitment:
    msg = _padded(p, b)
    if len(x) != p.n:
        raise ValueError(f"seed must have n = {p.n} bits, got {len(x)}")
    g = p.prg(x, p.z)
    return Commitment(BitVector(p.z, g.bits ^ combine(p.vectors, msg)))


def string_verify(p: StringParams, c: Commitment, b, x: BitVector) -> bool:
    try:
        msg = _padded(p, b)
    except (ValueError, TypeError):
        return False
    if len(x) != p.n or c.c2 is not None:
        return False
    g = p.prg(x, p.z)
    return BitVector(p.z, g.bits ^ combine(p.vectors, msg)) == c.c
