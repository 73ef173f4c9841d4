"""Toeplitz matrices over GF(2) as a two-universal hash family."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..gf2 import BitVector


@dataclass(frozen=True)
class ToeplitzHash:
    """``rows x cols`` Toeplitz matrix with ``T[i][j] = diagonal[i - j + cols - 1]``."""

    rows: int
    cols: int
    diagonal: BitVector

    def __post_init__(self):
        if self.rows < 1 or self.cols < 0:
            raise ValueError("need rows >= 1 and cols >= 0")
        if len(self.diagonal) != self.rows + self.cols - 1:
            raise ValueError(
                f"diagonal must have rows + cols - 1 = {self.rows + self.cols - 1} bits, got {len(self.diagonal)}"
            )

    def __call__(self, v: BitVector) -> BitVector:
        return toeplitz_hash(self, v)

    def matrix(self) -> np.ndarray:
        d = np.array(list(self.diagonal), dtype=np.uint8)
        i = np.arange(self.rows)[:, None]
        j = np.arange(self.cols)[None, :]
        return d[i - j + self.cols - 1]


def random_toeplitz(rows: int, cols: int, rng) -> ToeplitzHash:
    length = rows + cols - 1
    return ToeplitzHash(rows, cols, BitVector(length, rng.getrandbits(length) if length else 0))


def toeplitz_hash(f: ToeplitzHash, v: BitVector) -> BitVector:
    if len(v) != f.cols:
        raise ValueError(f"input must have {f.cols} bits, got {len(v)}")
    if f.cols == 0:
        return BitVector.zeros(f.rows)
    # Row i of T is diagonal[i : i + cols] read backwards, so reverse v once
    # and each output bit is the parity of a shifted window AND the reversed input.
    w = int(format(v.bits, f"0{f.cols}b")[::-1], 2)
    d = f.diagonal.bits
    mask = (1 << f.cols) - 1
    out = 0
    for i in range(f.rows):
        out |= (((d >> i) & mask & w).bit_count() & 1) << i
    return BitVector(f.rows, out)
