"""Kilian-style amortization on top of the circulant string commitment.

The ``l``-bit seed ``s`` is committed with the circulant scheme and the
``t``-bit message is masked with ``G(s)``::

    c1 = G(x) xor sum s_i * r_i      (z bits)
    c2 = G(s) xor b                  (t bits)
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from ..expansion import PRODUCTION, ExpansionFunction
from ..gf2 import BitVector, generate_vectors
from .base import Commitment, as_message, combine, default_rng, random_bits
from .circulant import sample_odd_weight, string_width


@dataclass(frozen=True)
class KilianParams:
    n: int
    l: int  # noqa: E741 - matches the usual name of the inner seed length
    t: int
    z: int
    r1: BitVector
    prg: ExpansionFunction = PRODUCTION

    def __post_init__(self):
        if min(self.n, self.l, self.t) < 1:
            raise ValueError("n, l and t must be at least 1")
        if self.z != string_width(self.n, self.l):
            raise ValueError(f"z must be {string_width(self.n, self.l)} for n={self.n}, l={self.l}")
        if len(self.r1) != self.z:
            raise ValueError(f"challenge must have z = {self.z} bits, got {len(self.r1)}")
        if not self.r1.weight() & 1:
            raise ValueError("challenge must have odd Hamming weight")

    @cached_property
    def vectors(self) -> list[BitVector]:
        return generate_vectors(self.r1, self.l)


def kilian_params(n: int, t: int, l: int | None = None, randomness=None,
                  prg: ExpansionFunction = PRODUCTION) -> KilianParams:
    rng = default_rng(randomness)
    l = n if l is None else l  # noqa: E741
    z = string_width(n, l)
    return KilianParams(n, l, t, z, sample_odd_weight(rng, z), prg)


def kilian_commit(p: KilianParams, b, x: BitVector, s: BitVector) -> Commitment:
    msg = as_message(b, p.t)
    if len(x) != p.n:
        raise ValueError(f"seed must have n = {p.n} bits, got {len(x)}")
    if len(s) != p.l:
        raise ValueError(f"inner seed must have l = {p.l} bits, got {len(s)}")
    c1 = BitVector(p.z, p.prg(x, p.z).bits ^ combine(p.vectors, s))
    c2 = p.prg(s, p.t) ^ msg
    return Commitment(c1, c2)


def kilian_verify(p: KilianParams, c: Commitment, b, x: BitVector, s: BitVector) -> bool:
    try:
        msg = as_message(b, p.t)
    except (ValueError, TypeError):
        return False
    if len(x) != p.n or len(s) != p.l or c.c2 is None:
        return False
    c1 = BitVector(p.z, p.prg(x, p.z).bits ^ combine(p.vectors, s))
    c2 = p.prg(s, p.t) ^ msg
    # Both halves are always recomputed; no early exit.
    ok1 = c1 == c.c
    ok2 = c2 == c.c2
    return ok1 & ok2


def kilian_random_inner_seed(p: KilianParams, randomness=None) -> BitVector:
    return random_bits(default_rng(randomness), p.l)
