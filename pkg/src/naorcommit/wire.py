"""Bit-exact serialization, framing and transcript accounting.

Bit vector encoding::

    u32 little-endian bit length | ceil(len/8) bytes, bit 0 = MSB of byte 0

Frame layout::

    u8 tag | u32 little-endian payload byte count | payload

Payloads of every tag except ``ABORT`` are a concatenation of encoded bit
vectors.  Transcripts count the *bit lengths* of those vectors, which is what
the communication formulas are stated in; framing and length prefixes are
tracked separately as wire bytes.
"""

from __future__ import annotations

import enum
import queue
import socket
import struct
import threading
from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .gf2 import BitVector

__all__ = [
    "Tag",
    "Frame",
    "WireError",
    "TruncatedError",
    "PaddingError",
    "LengthOverflowError",
    "UnknownTagError",
    "OversizeFrameError",
    "TransportError",
    "encode_bitvector",
    "decode_bitvector",
    "read_bitvector",
    "pack_vectors",
    "unpack_vectors",
    "encode_frame",
    "FrameDecoder",
    "read_frame",
    "Transcript",
    "PHASES",
    "transcript_bits",
    "Endpoint",
    "QueueEndpoint",
    "SocketEndpoint",
    "duplex_pair",
]

HEADER_SIZE = 5
MAX_FRAME_BYTES = 1 << 24
# A vector must fit inside one frame payload.
MAX_VECTOR_BITS = 8 * MAX_FRAME_BYTES


class Tag(enum.IntEnum):
    CHALLENGE = 0x01
    COMMITMENT = 0x02
    OPENING = 0x03
    BASES_REVEAL = 0x10
    CUT_CHOOSE_REQUEST = 0x11
    CUT_CHOOSE_OPENINGS = 0x12
    INDEX_SET = 0x13
    TRANSFER_PAYLOAD = 0x14
    # Simulated quantum transmission; carries no classical transcript bits.
    QUBITS = 0x20
    ABORT = 0x7F


class WireError(ValueError):
    pass


class TruncatedError(WireError):
    pass


class PaddingError(WireError):
    pass


class LengthOverflowError(WireError):
    pass


class UnknownTagError(WireError):
    pass


class OversizeFrameError(WireError):
    pass


class TransportError(ConnectionError):
    pass


def encode_bitvector(v: BitVector) -> bytes:
    return struct.pack("<I", len(v)) + v.to_bytes()


def read_bitvector(data: bytes, offset: int = 0) -> tuple[BitVector, int]:
    """Decode one vector starting at ``offset``; returns it and the next offset."""
    if len(data) - offset < 4:
        raise TruncatedError("bit vector length prefix truncated")
    (nbits,) = struct.unpack_from("<I", data, offset)
    if nbits > MAX_VECTOR_BITS:
        raise LengthOverflowError(f"bit vector of {nbits} bits exceeds the {MAX_VECTOR_BITS}-bit limit")
    nbytes = (nbits + 7) // 8
    start = offset + 4
    if len(data) - start < nbytes:
        raise TruncatedError(f"bit vector body truncated: need {nbytes} bytes, have {len(data) - start}")
    body = data[start : start + nbytes]
    pad = 8 * nbytes - nbits
    if pad and body[-1] & ((1 << pad) - 1):
        raise PaddingError("nonzero padding bits")
    return BitVector.from_bytes(body, nbits), start + nbytes


def decode_bitvector(data: bytes) -> BitVector:
    v, end = read_bitvector(data)
    if end != len(data):
        raise WireError(f"{len(data) - end} trailing bytes after bit vector")
    return v


def pack_vectors(vectors: Iterable[BitVector]) -> bytes:
    return b"".join(encode_bitvector(v) for v in vectors)


def unpack_vectors(data: bytes) -> list[BitVector]:
    out = []
    offset = 0
    while offset < len(data):
        v, offset = read_bitvector(data, offset)
        out.append(v)
    return out


@dataclass(frozen=True)
class Frame:
    tag: Tag
    payload: bytes = b""

    @classmethod
    def of_vectors(cls, tag: Tag, vectors: Iterable[BitVector]) -> Frame:
        return cls(Tag(tag), pack_vectors(vectors))

    @classmethod
    def abort(cls, reason: str, code: int = 0) -> Frame:
        return cls(Tag.ABORT, bytes([code]) + reason.encode())

    def vectors(self) -> list[BitVector]:
        if self.tag == Tag.ABORT:
            raise WireError("abort frames do not carry bit vectors")
        return unpack_vectors(self.payload)

    def abort_reason(self) -> tuple[int, str]:
        if self.tag != Tag.ABORT:
            raise WireError("not an abort frame")
        if not self.payload:
            return 0, ""
        return self.payload[0], self.payload[1:].decode(errors="replace")

    def payload_bits(self) -> int:
        """Logical payload size: total bit length of the carried vectors."""
        if self.tag == Tag.ABORT:
            return 8 * len(self.payload)
        return sum(len(v) for v in self.vectors())


def encode_frame(frame: Frame) -> bytes:
    if len(frame.payload) > MAX_FRAME_BYTES:
        raise OversizeFrameError(f"payload of {len(frame.payload)} bytes exceeds {MAX_FRAME_BYTES}")
    return struct.pack("<BI", int(frame.tag), len(frame.payload)) + frame.payload


def _parse_header(header: bytes) -> tuple[Tag, int]:
    tag_byte, length = struct.unpack("<BI", header)
    try:
        tag = Tag(tag_byte)
    except ValueError:
        raise UnknownTagError(f"unknown frame tag 0x{tag_byte:02x}") from None
    if length > MAX_FRAME_BYTES:
        raise OversizeFrameError(f"frame of {length} bytes exceeds {MAX_FRAME_BYTES}")
    return tag, length


class FrameDecoder:
    """Incremental deframer for an ordered byte stream; partial input is buffered."""

    def __init__(self):
        self._buf = bytearray()

    def feed(self, data: bytes) -> list[Frame]:
        self._buf += data
        frames = []
        while len(self._buf) >= HEADER_SIZE:
            tag, length = _parse_header(bytes(self._buf[:HEADER_SIZE]))
            if len(self._buf) < HEADER_SIZE + length:
                break
            payload = bytes(self._buf[HEADER_SIZE : HEADER_SIZE + length])
            del self._buf[: HEADER_SIZE + length]
            frames.append(Frame(tag, payload))
        return frames

    @property
    def pending(self) -> int:
        return len(self._buf)

    def close(self) -> None:
        if self._buf:
            raise TruncatedError(f"stream ended inside a frame ({len(self._buf)} bytes buffered)")


def read_frame(stream) -> Frame | None:
    """Blocking read of one frame from a file-like object; ``None`` on clean EOF."""
    header = _read_exact(stream, HEADER_SIZE, allow_eof=True)
    if header is None:
        return None
    tag, length = _parse_header(header)
    payload = _read_exact(stream, length, allow_eof=False) if length else b""
    return Frame(tag, payload)


def _read_exact(stream, n: int, allow_eof: bool) -> bytes | None:
    buf = bytearray()
    while len(buf) < n:
        chunk = stream.read(n - len(buf))
        if not chunk:
            if allow_eof and not buf:
                return None
            raise TruncatedError(f"stream ended after {len(buf)} of {n} bytes")
        buf += chunk
    return bytes(buf)


PHASES = ("preproc", "challenge", "commit", "open", "bb84", "cut-choose", "okeys", "transfer")


@dataclass
class _Counter:
    payload_bits: int = 0
    wire_bytes: int = 0
    messages: int = 0


@dataclass
class Transcript:
    """Per-(phase, direction) traffic counters plus an ordered message log."""

    counters: dict = field(default_factory=lambda: defaultdict(_Counter))
    log: list = field(default_factory=list)
    qubits: int = 0

    def record(self, phase: str, direction: str, frame: Frame) -> None:
        if phase not in PHASES:
            raise ValueError(f"unknown phase {phase!r}")
        if frame.tag == Tag.QUBITS:
            # Quantum side-band: counted in qubits, not classical payload.
            self.qubits += len(frame.vectors()[0])
            self.log.append((phase, direction, frame.tag, 0))
            return
        bits = frame.payload_bits()
        c = self.counters[(phase, direction)]
        c.payload_bits += bits
        c.wire_bytes += HEADER_SIZE + len(frame.payload)
        c.messages += 1
        self.log.append((phase, direction, frame.tag, bits))

    def bits(self, phase: str | None = None, direction: str | None = None) -> int:
        return transcript_bits(self, phase, direction)

    def wire_bytes(self, phase: str | None = None, direction: str | None = None) -> int:
        return sum(
            c.wire_bytes for (p, d), c in self.counters.items() if _match(p, d, phase, direction)
        )

    def messages(self) -> int:
        return sum(c.messages for c in self.counters.values())

    def summary(self) -> dict:
        out = {}
        for (p, d), c in sorted(self.counters.items()):
            out[f"{p}/{d}"] = {"payload_bits": c.payload_bits, "wire_bytes": c.wire_bytes, "messages": c.messages}
        out["qubits"] = self.qubits
        return out


def _match(p, d, phase, direction):
    return (phase is None or p == phase) and (direction is None or d == direction)


def transcript_bits(t: Transcript, phase: str | None = None, direction: str | None = None) -> int:
    """Payload bits sent in ``phase``/``direction`` (``None`` means all)."""
    if phase is not None and phase not in PHASES:
        raise ValueError(f"unknown phase {phase!r}")
    return sum(c.payload_bits for (p, d), c in t.counters.items() if _match(p, d, phase, direction))


class Endpoint:
    """One party's end of a frame transport, optionally feeding a transcript.

    ``direction`` labels frames this endpoint sends; received frames are
    recorded under ``peer_direction`` when ``record_received`` is set (used
    when each process keeps its own transcript).
    """

    def __init__(self, direction: str, peer_direction: str, transcript: Transcript | None = None,
                 record_received: bool = False):
        self.direction = direction
        self.peer_direction = peer_direction
        self.transcript = transcript
        self.record_received = record_received

    def send(self, frame: Frame, phase: str) -> None:
        if self.transcript is not None:
            self.transcript.record(phase, self.direction, frame)
        self._send_bytes(encode_frame(frame))

    def send_vectors(self, tag: Tag, vectors: Sequence[BitVector], phase: str) -> None:
        self.send(Frame.of_vectors(tag, vectors), phase)

    def recv(self, timeout: float | None = None) -> Frame:
        return self._recv_frame(timeout)

    def note_received(self, frame: Frame, phase: str) -> None:
        """Record an incoming frame when this endpoint keeps its own transcript."""
        if self.record_received and self.transcript is not None:
            self.transcript.record(phase, self.peer_direction, frame)

    def _send_bytes(self, data: bytes) -> None:
        raise NotImplementedError

    def _recv_frame(self, timeout: float | None) -> Frame:
        raise NotImplementedError

    def close(self) -> None:
        pass


class QueueEndpoint(Endpoint):
    """In-process endpoint; bytes really go through encode/deframe."""

    def __init__(self, outbox: queue.Queue, inbox: queue.Queue, direction: str, peer_direction: str,
                 transcript: Transcript | None = None):
        super().__init__(direction, peer_direction, transcript)
        self._outbox = outbox
        self._inbox = inbox
        self._decoder = FrameDecoder()
        self._ready: list[Frame] = []

    def _send_bytes(self, data: bytes) -> None:
        self._outbox.put(data)

    def _recv_frame(self, timeout: float | None) -> Frame:
        while not self._ready:
            try:
                data = self._inbox.get(timeout=timeout)
            except queue.Empty:
                raise TransportError("timed out waiting for a frame") from None
            if data is None:
                self._decoder.close()
                raise TransportError("peer closed the connection")
            self._ready.extend(self._decoder.feed(data))
        return self._ready.pop(0)

    def pending(self) -> bool:
        return bool(self._ready) or not self._inbox.empty()

    def close(self) -> None:
        self._outbox.put(None)


def duplex_pair(transcript: Transcript | None = None, directions=("S->R", "R->S")):
    """Two connected in-process endpoints sharing one transcript."""
    a_to_b: queue.Queue = queue.Queue()
    b_to_a: queue.Queue = queue.Queue()
    a = QueueEndpoint(a_to_b, b_to_a, directions[0], directions[1], transcript)
    b = QueueEndpoint(b_to_a, a_to_b, directions[1], directions[0], transcript)
    return a, b


class SocketEndpoint(Endpoint):
    def __init__(self, sock: socket.socket, direction: str, peer_direction: str,
                 transcript: Transcript | None = None):
        super().__init__(direction, peer_direction, transcript, record_received=True)
        self._sock = sock
        self._file = sock.makefile("rb")
        self._lock = threading.Lock()

    def _send_bytes(self, data: bytes) -> None:
        try:
            with self._lock:
                self._sock.sendall(data)
        except OSError as exc:
            raise TransportError(str(exc)) from exc

    def _recv_frame(self, timeout: float | None) -> Frame:
        self._sock.settimeout(timeout)
        try:
            frame = read_frame(self._file)
        except (OSError, TruncatedError) as exc:
            raise TransportError(str(exc)) from exc
        if frame is None:
            raise TransportError("peer closed the connection")
        return frame

    def close(self) -> None:
        try:
            self._file.close()
            self._sock.close()
        except OSError:
            pass
