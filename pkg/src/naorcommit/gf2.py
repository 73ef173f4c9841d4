"""Bit vectors and GF(2) linear algebra.

A :class:`BitVector` packs its bits into a Python ``int`` with index 0 in the
least significant bit.  Index 0 is also coefficient ``a_0`` of the associated
polynomial and row/column 1 of the circulant generation matrix, so no
transposition is needed between the polynomial and matrix views.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

__all__ = [
    "BitVector",
    "F2Polynomial",
    "xor",
    "rotate_right",
    "generate_vectors",
    "weight",
    "rank_f2",
    "poly_gcd_f2",
    "circulant_rows",
    "circulant_is_full_rank",
    "is_power_of_two",
]


class BitVector:
    """Immutable fixed-length bit string over GF(2)."""

    __slots__ = ("_len", "_bits")

    def __init__(self, length: int, bits: int = 0):
        if length < 0:
            raise ValueError("length must be non-negative")
        if bits < 0 or bits >> length:
            raise ValueError(f"bits do not fit in {length} positions")
        self._len = length
        self._bits = bits

    @classmethod
    def zeros(cls, length: int) -> BitVector:
        return cls(length, 0)

    @classmethod
    def ones(cls, length: int) -> BitVector:
        return cls(length, (1 << length) - 1)

    @classmethod
    def unit(cls, length: int, index: int) -> BitVector:
        if not 0 <= index < length:
            raise IndexError(index)
        return cls(length, 1 << index)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> BitVector:
        """Build from a sequence of 0/1 values, first element is index 0."""
        value = 0
        length = 0
        for i, b in enumerate(bits):
            if b not in (0, 1, True, False):
                raise ValueError(f"not a bit: {b!r}")
            if b:
                value |= 1 << i
            length = i + 1
        return cls(length, value)

    @classmethod
    def from_str(cls, text: str) -> BitVector:
        """Parse ``"1010"`` (first character is index 0)."""
        return cls.from_bits(int(ch) for ch in text if ch not in " _")

    @classmethod
    def from_bytes(cls, data: bytes, length: int | None = None) -> BitVector:
        """Unpack MSB-first bytes; bit 0 is the top bit of ``data[0]``."""
        if length is None:
            length = 8 * len(data)
        if length > 8 * len(data):
            raise ValueError("not enough bytes for requested length")
        # MSB-first packing is the bit-reversal of our LSB-first int.
        raw = int.from_bytes(data, "big") >> (8 * len(data) - length) if length else 0
        return cls(length, _reverse_bits(raw, length))

    @classmethod
    def from_int(cls, length: int, value: int) -> BitVector:
        return cls(length, value & ((1 << length) - 1))

    def __len__(self) -> int:
        return self._len

    @property
    def bits(self) -> int:
        """Packed content, index ``i`` at ``1 << i``."""
        return self._bits

    def __getitem__(self, index):
        if isinstance(index, slice):
            return BitVector.from_bits(list(self)[index])
        if index < 0:
            index += self._len
        if not 0 <= index < self._len:
            raise IndexError(index)
        return (self._bits >> index) & 1

    def __iter__(self):
        b = self._bits
        for _ in range(self._len):
            yield b & 1
            b >>= 1

    def __eq__(self, other):
        if not isinstance(other, BitVector):
            return NotImplemented
        return self._len == other._len and self._bits == other._bits

    def __hash__(self):
        return hash((self._len, self._bits))

    def __xor__(self, other: BitVector) -> BitVector:
        if self._len != other._len:
            raise ValueError(f"length mismatch: {self._len} != {other._len}")
        return _new(self._len, self._bits ^ other._bits)

    def __and__(self, other: BitVector) -> BitVector:
        if self._len != other._len:
            raise ValueError(f"length mismatch: {self._len} != {other._len}")
        return _new(self._len, self._bits & other._bits)

    def __add__(self, other: BitVector) -> BitVector:
        """Concatenation."""
        return BitVector(self._len + other._len, self._bits | (other._bits << self._len))

    def __repr__(self):
        if self._len <= 64:
            return f"BitVector('{self.to_str()}')"
        return f"BitVector(len={self._len}, weight={self.weight()})"

    def to_str(self) -> str:
        return "".join("1" if b else "0" for b in self)

    def to_bytes(self) -> bytes:
        """MSB-first packing, zero padding in the low bits of the last byte."""
        nbytes = (self._len + 7) // 8
        if not nbytes:
            return b""
        raw = _reverse_bits(self._bits, self._len) << (8 * nbytes - self._len)
        return raw.to_bytes(nbytes, "big")

    def weight(self) -> int:
        return self._bits.bit_count()

    def any(self) -> bool:
        return self._bits != 0

    def parity(self) -> int:
        return self.weight() & 1

    def rotate_right(self, k: int = 1) -> BitVector:
        n = self._len
        if n == 0:
            return self
        k %= n
        if k == 0:
            return self
        mask = (1 << n) - 1
        return _new(n, ((self._bits << k) | (self._bits >> (n - k))) & mask)

    def pad_to(self, length: int) -> BitVector:
        """Zero-extend on the right."""
        if length < self._len:
            raise ValueError("cannot pad to a shorter length")
        return BitVector(length, self._bits)

    def select(self, indices: Sequence[int]) -> BitVector:
        """Sub-vector at ``indices``, in the order given."""
        b = self._bits
        out = 0
        for j, i in enumerate(indices):
            if (b >> i) & 1:
                out |= 1 << j
        return BitVector(len(indices), out)

    def support(self) -> list[int]:
        return [i for i, bit in enumerate(self) if bit]


def _new(length: int, bits: int) -> BitVector:
    # Unchecked constructor for results that are valid by construction.
    obj = object.__new__(BitVector)
    obj._len = length
    obj._bits = bits
    return obj


def _reverse_bits(value: int, length: int) -> int:
    if length == 0:
        return 0
    # format/int round trip is much faster than a Python loop for long vectors
    return int(format(value, f"0{length}b")[::-1], 2)


class F2Polynomial:
    """Polynomial over GF(2); bit ``i`` of ``value`` is the coefficient of x^i."""

    __slots__ = ("value",)

    def __init__(self, value: int):
        if value < 0:
            raise ValueError("coefficients must be a non-negative bitmask")
        self.value = value

    @classmethod
    def from_bitvector(cls, v: BitVector) -> F2Polynomial:
        return cls(v.bits)

    @classmethod
    def x_n_minus_1(cls, n: int) -> F2Polynomial:
        return cls((1 << n) | 1)

    @property
    def degree(self) -> float:
        """Index of the highest set coefficient; ``-inf`` for the zero polynomial."""
        return self.value.bit_length() - 1 if self.value else float("-inf")

    def is_zero(self) -> bool:
        return self.value == 0

    def __eq__(self, other):
        if not isinstance(other, F2Polynomial):
            return NotImplemented
        return self.value == other.value

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        if not self.value:
            return "F2Polynomial(0)"
        terms = []
        for i in range(self.value.bit_length() - 1, -1, -1):
            if (self.value >> i) & 1:
                terms.append("1" if i == 0 else ("x" if i == 1 else f"x^{i}"))
        return f"F2Polynomial({' + '.join(terms)})"

    def __mod__(self, other: F2Polynomial) -> F2Polynomial:
        if not other.value:
            raise ZeroDivisionError("polynomial division by zero")
        a = self.value
        db = other.value.bit_length()
        while a and a.bit_length() >= db:
            a ^= other.value << (a.bit_length() - db)
        return F2Polynomial(a)


def xor(a: BitVector, b: BitVector) -> BitVector:
    return a ^ b


def rotate_right(v: BitVector, k: int) -> BitVector:
    """``out[j] = v[(j - k) mod len]``."""
    if len(v) < 1:
        raise ValueError("cannot rotate an empty vector")
    return v.rotate_right(k)


def generate_vectors(r1: BitVector, count: int) -> list[BitVector]:
    """``r1`` followed by its successive right rotations, ``count`` vectors in all.

    Stacked as columns these reproduce the circulant generation matrix whose
    column ``i`` is ``r1`` rotated ``i - 1`` places.
    """
    if count > len(r1):
        raise ValueError(f"count {count} exceeds vector length {len(r1)}")
    if count < 0:
        raise ValueError("count must be non-negative")
    out = []
    v = r1
    for _ in range(count):
        out.append(v)
        v = v.rotate_right(1)
    return out


def weight(v: BitVector) -> int:
    return v.weight()


def rank_f2(rows: Sequence[BitVector]) -> int:
    """Rank over GF(2) by Gaussian elimination on packed rows."""
    if not rows:
        return 0
    n = len(rows[0])
    if any(len(r) != n for r in rows):
        raise ValueError("rows must all have the same length")
    # Keep a basis keyed by leading bit; each insertion is word-parallel XOR.
    basis: dict[int, int] = {}
    for r in rows:
        v = r.bits
        while v:
            top = v.bit_length() - 1
            pivot = basis.get(top)
            if pivot is None:
                basis[top] = v
                break
            v ^= pivot
    return len(basis)


def poly_gcd_f2(f: F2Polynomial, g: F2Polynomial) -> F2Polynomial:
    """Monic gcd in GF(2)[x] (every nonzero polynomial over GF(2) is monic)."""
    if f.is_zero() and g.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    return a


def circulant_rows(v: BitVector) -> list[BitVector]:
    """Rows of the circulant matrix generated by ``v``: row ``i`` is ``v`` rotated ``i``."""
    return generate_vectors(v, len(v))


def is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def circulant_is_full_rank(v: BitVector) -> bool:
    """Full-rank test for a circulant of order ``2**t`` via gcd with ``x**n - 1``."""
    n = len(v)
    if not is_power_of_two(n):
        raise ValueError(f"order must be a power of two, got {n}")
    if not v.any():
        return False
    g = poly_gcd_f2(F2Polynomial.from_bitvector(v), F2Polynomial.x_n_minus_1(n))
    return g.degree == 0
