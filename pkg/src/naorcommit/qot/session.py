"""Running a whole transfer: lockstep in one thread, or one party per socket."""

from __future__ import annotations

import json
import math
import socket
from dataclasses import asdict, dataclass, field

import numpy as np

from ..expansion import KeystreamRandom
from ..gf2 import BitVector
from ..wire import SocketEndpoint, Transcript, TransportError, WireError, duplex_pair
from .protocol import (
    ABORT_CHECK,
    ABORT_PROTOCOL,
    ProtocolError,
    Receiver,
    Sender,
    SessionConfig,
    make_receiver,
    measurement_mismatch,
)


class SessionError(RuntimeError):
    """Transport failure underneath a session."""


@dataclass
class SessionReport:
    adversary: str
    n: int
    l_msg: int
    scheme: str
    reuse_challenge: bool
    seed: int
    b: int | None = None
    completed: bool = False
    aborted: bool = False
    abort_code: int | None = None
    abort_phase: str | None = None
    abort_reason: str | None = None
    abort_index: int | None = None
    audit_size: int = 0
    i0_size: int | None = None
    i1_size: int | None = None
    output: BitVector | None = None
    expected: BitVector | None = None
    other_output: BitVector | None = None
    other_message: BitVector | None = None
    keys_agree_on_i0: bool | None = None
    transcript: dict = field(default_factory=dict)
    payload_bits: int = 0
    qubits: int = 0

    @property
    def correct(self) -> bool | None:
        if self.output is None or self.expected is None:
            return None
        return self.output == self.expected

    @property
    def learned_other(self) -> bool | None:
        if self.other_output is None or self.other_message is None:
            return None
        return self.other_output == self.other_message

    def to_dict(self) -> dict:
        d = asdict(self)
        for k in ("output", "expected", "other_output", "other_message"):
            v = getattr(self, k)
            d[k] = None if v is None else v.to_str()
        d["correct"] = self.correct
        d["learned_other"] = self.learned_other
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def format(self) -> str:
        d = self.to_dict()
        transcript = d.pop("transcript")
        lines = [f"{k}: {d[k]}" for k in sorted(d)]
        for k in sorted(transcript):
            lines.append(f"transcript.{k}: {transcript[k]}")
        return "\n".join(lines)


def _inputs(config: SessionConfig, root: KeystreamRandom, b, m0, m1):
    # Draw all three in a fixed order so overriding one leaves the others unchanged.
    rng = root.derive("inputs")
    drawn = rng.getrandbits(1), rng.bitvector(config.l_msg), rng.bitvector(config.l_msg)
    return tuple(d if v is None else v for v, d in zip((b, m0, m1), drawn))


def _fill_report(report: SessionReport, sender: Sender | None, receiver: Receiver | None,
                 transcript: Transcript) -> SessionReport:
    parties = [p for p in (sender, receiver) if p is not None]
    aborter = next((p for p in parties if p.abort is not None), None)
    if aborter is not None:
        code, phase, reason = aborter.abort
        report.aborted = True
        report.abort_code = code
        report.abort_phase = phase
        report.abort_reason = reason
        report.abort_index = next((p.abort_index for p in parties if p.abort_index is not None), None)
    if receiver is not None:
        st = receiver.state
        report.audit_size = len(st.audit)
        if st.output is not None:
            report.i0_size, report.i1_size = len(st.I0), len(st.I1)
            report.output = st.output
            report.other_output = st.other_output
    if sender is not None:
        report.audit_size = len(sender.state.audit)
        if report.b is not None:
            report.expected = (sender.state.m0, sender.state.m1)[report.b]
            report.other_message = (sender.state.m1, sender.state.m0)[report.b]
    if sender is not None and receiver is not None and receiver.state.okR is not None and sender.state.okS is not None:
        idx = receiver.state.I0
        report.keys_agree_on_i0 = receiver.state.okR.select(idx) == sender.state.okS.select(idx)
    report.completed = not report.aborted and all(p.done for p in parties)
    report.transcript = transcript.summary()
    report.payload_bits = transcript.bits()
    report.qubits = transcript.qubits
    return report


def run_session(config: SessionConfig, adversary: str = "honest", b: int | None = None,
                m0: BitVector | None = None, m1: BitVector | None = None, seed: int = 0,
                keep_parties: bool = False):
    """Run both parties interleaved on this thread over an in-process framed channel.

    Every random choice derives from ``seed``, so a session replays exactly.
    With ``keep_parties`` the return value is ``(report, sender, receiver)``.
    """
    root = KeystreamRandom(seed)
    b, m0, m1 = _inputs(config, root, b, m0, m1)
    transcript = Transcript()
    s_end, r_end = duplex_pair(transcript)
    sender = Sender(config, root.derive("sender"), m0, m1)
    receiver = make_receiver(adversary, config, root.derive("receiver"), b, root.derive("channel"))

    for frame, phase in sender.start():
        s_end.send(frame, phase)
    for frame, phase in receiver.start():
        r_end.send(frame, phase)
    try:
        while True:
            if r_end.pending() and not receiver.done:
                frame = r_end.recv()
                for out, phase in receiver.handle(frame):
                    r_end.send(out, phase)
            elif s_end.pending() and not sender.done:
                frame = s_end.recv()
                for out, phase in sender.handle(frame):
                    s_end.send(out, phase)
            else:
                break
    except (TransportError, WireError) as exc:
        raise SessionError(str(exc)) from exc

    report = SessionReport(adversary, config.n, config.l_msg, config.scheme, config.reuse_challenge, seed, b)
    _fill_report(report, sender, receiver, transcript)
    if keep_parties:
        return report, sender, receiver
    return report


def parse_addr(addr: str) -> tuple[str, int]:
    host, sep, port = addr.rpartition(":")
    if not sep or not port.isdigit():
        raise ValueError(f"address must be host:port, got {addr!r}")
    return host or "127.0.0.1", int(port)


def run_party(role: str, config: SessionConfig, addr: str, adversary: str = "honest",
              b: int | None = None, m0: BitVector | None = None, m1: BitVector | None = None,
              seed: int = 0, timeout: float = 30.0, ready=None) -> SessionReport:
    """One party over TCP.  The sender listens on ``addr``; the receiver connects.

    Inputs not given are drawn from ``seed``, so two processes started with
    the same seed agree on ``m0, m1, b`` without exchanging them.  ``ready``
    is called with the bound port once the sender is listening.
    """
    if role not in ("sender", "receiver"):
        raise ValueError("role must be sender or receiver")
    root = KeystreamRandom(seed)
    b, m0, m1 = _inputs(config, root, b, m0, m1)
    transcript = Transcript()
    host, port = parse_addr(addr)
    try:
        if role == "sender":
            with socket.create_server((host, port)) as server:
                server.settimeout(timeout)
                if ready is not None:
                    ready(server.getsockname()[1])
                sock, _ = server.accept()
            party = Sender(config, root.derive("sender"), m0, m1)
            end = SocketEndpoint(sock, "S->R", "R->S", transcript)
        else:
            sock = socket.create_connection((host, port), timeout=timeout)
            party = make_receiver(adversary, config, root.derive("receiver"), b, root.derive("channel"))
            end = SocketEndpoint(sock, "R->S", "S->R", transcript)
    except OSError as exc:
        raise SessionError(f"cannot connect: {exc}") from exc

    try:
        for frame, phase in party.start():
            end.send(frame, phase)
        while not party.done:
            frame = end.recv(timeout)
            end.note_received(frame, party.incoming_phase(frame))
            for out, phase in party.handle(frame):
                end.send(out, phase)
    except (TransportError, WireError) as exc:
        raise SessionError(str(exc)) from exc
    finally:
        end.close()

    report = SessionReport(adversary if role == "receiver" else "n/a", config.n, config.l_msg, config.scheme,
                           config.reuse_challenge, seed, b if role == "receiver" else None)
    if role == "sender":
        return _fill_report(report, party, None, transcript)
    return _fill_report(report, None, party, transcript)


@dataclass(frozen=True)
class MonteCarloRate:
    accepts: int
    trials: int
    expected: float

    @property
    def rate(self) -> float:
        return self.accepts / self.trials

    @property
    def standard_error(self) -> float:
        return math.sqrt(self.expected * (1 - self.expected) / self.trials)

    def within(self, k: float = 3.0) -> bool:
        return abs(self.rate - self.expected) <= k * self.standard_error


def delaying_accept_rate(n: int, t_size: int, trials: int, seed: int = 0, chunk: int = 20000) -> MonteCarloRate:
    """Accept rate of the audit against a receiver that commits to uniform guesses.

    Vectorised over trials; the audit predicate is the protocol's own
    :func:`measurement_mismatch`.
    """
    if not 0 <= t_size <= n:
        raise ValueError("audit size must lie in [0, n]")
    gen = np.random.default_rng(KeystreamRandom(seed).derive("monte-carlo").getrandbits(128))
    accepts = 0
    done = 0
    while done < trials:
        k = min(chunk, trials - done)
        theta_s = gen.integers(0, 2, (k, n), dtype=np.uint8)
        x_s = gen.integers(0, 2, (k, n), dtype=np.uint8)
        theta_r = gen.integers(0, 2, (k, n), dtype=np.uint8)
        x_r = gen.integers(0, 2, (k, n), dtype=np.uint8)
        # Uniform t_size-subset per trial: first t_size of a random permutation.
        audit = np.argsort(gen.random((k, n)), axis=1)[:, :t_size]
        rows = np.arange(k)[:, None]
        bad = measurement_mismatch(theta_s[rows, audit], x_s[rows, audit], theta_r[rows, audit], x_r[rows, audit])
        accepts += int(np.count_nonzero(~bad.any(axis=1)))
        done += k
    return MonteCarloRate(accepts, trials, 0.75**t_size)


__all__ = [
    "ABORT_CHECK",
    "ABORT_PROTOCOL",
    "MonteCarloRate",
    "ProtocolError",
    "SessionError",
    "SessionReport",
    "delaying_accept_rate",
    "parse_addr",
    "run_party",
    "run_session",
]
