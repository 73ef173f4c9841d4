"""Seed expansion: the pseudorandom generator behind every commitment.

The production instantiation is the AES counter-mode keystream keyed by the
seed, zero-padded on the right to the next AES key size (128, 192 or 256
bits), with an all-zero initial counter block.  Output bit ``i`` is bit
``i % 8`` (MSB first) of keystream byte ``i // 8``, so shorter outputs are
prefixes of longer ones.

The toy instantiation runs the identical code path but refuses seeds longer
than 16 bits, which keeps the seed space enumerable for the binding oracles.
"""

from __future__ import annotations

import hashlib
import random
from collections.abc import Iterator
from dataclasses import dataclass
from importlib import resources

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

from .gf2 import BitVector

__all__ = [
    "ExpansionFunction",
    "PRODUCTION",
    "TOY",
    "TOY_MAX_SEED_BITS",
    "expand",
    "enumerate_seeds",
    "KeystreamRandom",
    "load_golden_vectors",
]

TOY_MAX_SEED_BITS = 16
MAX_SEED_BITS = 256
_ZERO_BLOCK = bytes(16)


def _aes_key(seed: BitVector) -> bytes:
    n = len(seed)
    if n > MAX_SEED_BITS:
        raise ValueError(f"seed of {n} bits exceeds the {MAX_SEED_BITS}-bit key limit")
    key_bits = 128 if n <= 128 else (192 if n <= 192 else 256)
    return seed.pad_to(key_bits).to_bytes()


def _keystream(key: bytes, nbytes: int) -> bytes:
    enc = Cipher(algorithms.AES(key), modes.CTR(_ZERO_BLOCK)).encryptor()
    return enc.update(bytes(nbytes))


@dataclass(frozen=True)
class ExpansionFunction:
    """Deterministic map ``(seed, L) -> L`` pseudorandom bits."""

    name: str
    max_seed_bits: int = MAX_SEED_BITS

    def __call__(self, seed: BitVector, out_len: int) -> BitVector:
        return expand(self, seed, out_len)


PRODUCTION = ExpansionFunction("production")
TOY = ExpansionFunction("toy", TOY_MAX_SEED_BITS)


def expand(f: ExpansionFunction, seed: BitVector, out_len: int) -> BitVector:
    if out_len < 1:
        raise ValueError("out_len must be at least 1")
    if len(seed) < 1:
        raise ValueError("seed must have at least one bit")
    if len(seed) > f.max_seed_bits:
        raise ValueError(
            f"{f.name} expansion accepts seeds of at most {f.max_seed_bits} bits, got {len(seed)}"
        )
    stream = _keystream(_aes_key(seed), (out_len + 7) // 8)
    return BitVector.from_bytes(stream, out_len)


def enumerate_seeds(n: int) -> Iterator[BitVector]:
    """All ``2**n`` seeds in lexicographic order (index 0 is the most significant)."""
    if not 1 <= n <= TOY_MAX_SEED_BITS:
        raise ValueError(f"can only enumerate seeds of 1..{TOY_MAX_SEED_BITS} bits, got {n}")
    for k in range(1 << n):
        yield _seed_from_rank(n, k)


def _seed_from_rank(n: int, k: int) -> BitVector:
    # Lexicographic rank k: bit 0 of the seed is the top bit of k.
    return BitVector.from_bits((k >> (n - 1 - i)) & 1 for i in range(n))


class KeystreamRandom(random.Random):
    """``random.Random`` driven by an AES-CTR keystream.

    The key is SHA-256 of the root seed and a label, so every party and every
    role in a session gets an independent, replayable stream from one root.
    """

    _CHUNK = 4096

    def __new__(cls, root=0, label: str = ""):
        # random.Random.__new__ rejects a second positional argument.
        return super().__new__(cls)

    def __init__(self, root: int | bytes | str = 0, label: str = ""):
        self._label = label
        super().__init__(root)

    def seed(self, a=None, version=2):
        if isinstance(a, int):
            a = a.to_bytes((a.bit_length() + 8) // 8, "big")
        elif isinstance(a, str):
            a = a.encode()
        elif a is None:
            a = b""
        self._key = hashlib.sha256(bytes(a) + b"\x00" + self._label.encode()).digest()
        self._buf = b""
        self._pos = 0
        self._counter = 0

    def derive(self, label: str) -> KeystreamRandom:
        """Independent child stream for ``label``."""
        return KeystreamRandom(self._key, label)

    def _take(self, nbytes: int) -> bytes:
        out = bytearray()
        while nbytes:
            if self._pos == len(self._buf):
                nonce = self._counter.to_bytes(16, "big")
                enc = Cipher(algorithms.AES(self._key), modes.CTR(nonce)).encryptor()
                self._buf = enc.update(bytes(self._CHUNK))
                self._pos = 0
                self._counter += self._CHUNK // 16
            take = min(nbytes, len(self._buf) - self._pos)
            out += self._buf[self._pos : self._pos + take]
            self._pos += take
            nbytes -= take
        return bytes(out)

    def getrandbits(self, k: int) -> int:
        if k < 0:
            raise ValueError("number of bits must be non-negative")
        if k == 0:
            return 0
        nbytes = (k + 7) // 8
        return int.from_bytes(self._take(nbytes), "little") & ((1 << k) - 1)

    def random(self) -> float:
        return (self.getrandbits(53)) * (2.0**-53)

    def randbytes(self, n: int) -> bytes:
        return self._take(n)

    def getstate(self):
        return (self._key, self._counter, self._buf, self._pos)

    def setstate(self, state):
        self._key, self._counter, self._buf, self._pos = state

    def bitvector(self, length: int) -> BitVector:
        return BitVector(length, self.getrandbits(length))


def load_golden_vectors() -> list[tuple[BitVector, int, BitVector]]:
    """Parse the shipped ``len:hex out_len len:hex`` expansion vectors."""
    from .hexio import parse_bits

    text = resources.files("naorcommit").joinpath("data/expansion_golden.txt").read_text()
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        seed_s, out_len, output_s = line.split()
        out.append((parse_bits(seed_s), int(out_len), parse_bits(output_s)))
    return out
