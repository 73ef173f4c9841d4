"""``len:hex`` text form of bit vectors, shared by the CLI and fixture files.

``9:a080`` is the 9-bit vector ``101000001``: the hex digits are the
MSB-first packed bytes and the prefix removes any padding ambiguity.
"""

from __future__ import annotations

from .gf2 import BitVector


def format_bits(v: BitVector) -> str:
    return f"{len(v)}:{v.to_bytes().hex()}"


def parse_bits(text: str) -> BitVector:
    try:
        length_s, hex_s = text.strip().split(":", 1)
        length = int(length_s)
        data = bytes.fromhex(hex_s)
    except ValueError as exc:
        raise ValueError(f"malformed bit string {text!r}, expected len:hex") from exc
    if length < 0 or len(data) != (length + 7) // 8:
        raise ValueError(f"{text!r}: {len(data)} bytes cannot hold exactly {length} bits")
    v = BitVector.from_bytes(data, length)
    if v.to_bytes() != data:
        raise ValueError(f"{text!r}: nonzero padding bits")
    return v
