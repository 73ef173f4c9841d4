"""Ideal noiseless BB84 channel, simulated classically.

A qubit prepared as bit ``x`` in basis ``theta`` and measured in basis
``theta'`` yields ``x`` when the bases agree and a fresh uniform bit
otherwise.  Bases are bits: 0 for the rectilinear basis, 1 for diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..gf2 import BitVector


@dataclass(frozen=True)
class QubitBatch:
    """States in flight.  Only :func:`measure` should look inside."""

    bits: BitVector
    bases: BitVector

    def __len__(self):
        return len(self.bits)


def prepare(n: int, rng) -> QubitBatch:
    return QubitBatch(BitVector(n, rng.getrandbits(n) if n else 0), BitVector(n, rng.getrandbits(n) if n else 0))


def measure(qubits: QubitBatch, bases: BitVector, channel_rng) -> BitVector:
    n = len(qubits)
    if len(bases) != n:
        raise ValueError(f"need {n} measurement bases, got {len(bases)}")
    agree = ~(qubits.bases.bits ^ bases.bits) & ((1 << n) - 1)
    noise = channel_rng.getrandbits(n) if n else 0
    return BitVector(n, (qubits.bits.bits & agree) | (noise & ~agree & ((1 << n) - 1)))
