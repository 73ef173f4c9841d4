"""Two-bit extension of Naor's scheme, the one committed per qubit in qOT.

``c = G(x) xor b1*r1 xor b2*r2`` with ``G`` stretching to ``3n + 3`` bits and
``r2`` the right rotation of ``r1`` by one place.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..expansion import PRODUCTION, ExpansionFunction
from ..gf2 import BitVector
from .base import Commitment, as_message, default_rng, random_bits


@dataclass(frozen=True)
class TwoBitParams:
    n: int
    r1: BitVector
    prg: ExpansionFunction = PRODUCTION

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        width = 3 * self.n + 3
        if len(self.r1) != width:
            raise ValueError(f"challenge must have 3n+3 = {width} bits, got {len(self.r1)}")
        if self.r1 in (BitVector.zeros(width), BitVector.ones(width)):
            raise ValueError("challenge must be neither all-zero nor all-one")

    @property
    def width(self) -> int:
        return 3 * self.n + 3

    @property
    def r2(self) -> BitVector:
        return self.r1.rotate_right(1)


def twobit_challenge(n: int, randomness=None, prg: ExpansionFunction = PRODUCTION) -> TwoBitParams:
    rng = default_rng(randomness)
    width = 3 * n + 3
    forbidden = (0, (1 << width) - 1)
    while True:
        r1 = random_bits(rng, width)
        if r1.bits not in forbidden:
            return TwoBitParams(n, r1, prg)


def _mask(p: TwoBitParams, b: BitVector) -> int:
    acc = 0
    if b[0]:
        acc ^= p.r1.bits
    if b[1]:
        acc ^= p.r2.bits
    return acc


def twobit_commit(p: TwoBitParams, b, x: BitVector) -> Commitment:
    msg = as_message(b, 2)
    if len(x) != p.n:
        raise ValueError(f"seed must have n = {p.n} bits, got {len(x)}")
    g = p.prg(x, p.width)
    return Commitment(BitVector(p.width, g.bits ^ _mask(p, msg)))


def twobit_verify(p: TwoBitParams, c: Commitment, b, x: BitVector) -> bool:
    try:
        msg = as_message(b, 2)
    except (ValueError, TypeError):
        return False
    if len(x) != p.n or c.c2 is not None:
        return False
    g = p.prg(x, p.width)
    return BitVector(p.width, g.bits ^ _mask(p, msg)) == c.c
