"""BBCS oblivious transfer with committed measurements and cut-and-choose.

Message flow (S = sender, R = receiver; R is the committer, S the verifier)::

    S -> R  CHALLENGE            commitment challenge(s)
   [R -> S  COMMITMENT           offline mask commitments, preprocessing only]
    S -> R  QUBITS               simulated quantum transmission
    R -> S  COMMITMENT           one commitment per (basis, outcome) record
    S -> R  CUT_CHOOSE_REQUEST   membership mask of the audited set T
    R -> S  CUT_CHOOSE_OPENINGS  openings for T in ascending index order
    S -> R  BASES_REVEAL         sender bases
    R -> S  INDEX_SET            membership mask of I_b
    S -> R  TRANSFER_PAYLOAD     f0, f1 diagonals and s0, s1

Either side may answer with ABORT at any point.  Indices opened in the audit
are public afterwards and take no part in the oblivious keys.

Parties are single-threaded state machines: ``start()`` and
``handle(frame)`` return the frames to send, each paired with the transcript
phase it belongs to.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..commitments import Commitment, Opening, get_scheme
from ..commitments.preproc import (
    PreprocBatch,
    PreprocPublic,
    PreprocScheme,
    pack_messages,
    preproc_offline,
    preproc_verify,
)
from ..commitments.base import random_bits
from ..expansion import enumerate_seeds
from ..gf2 import BitVector
from ..wire import Frame, Tag
from . import channel
from .toeplitz import ToeplitzHash, random_toeplitz, toeplitz_hash

ADVERSARIES = ("honest", "delaying", "equivocating", "outcome-flipper")

ABORT_CHECK = 1  # cut-and-choose caught the receiver
ABORT_PROTOCOL = 2  # malformed or inconsistent message


class ProtocolError(Exception):
    """Peer sent something that does not fit the protocol."""


class CheckFailed(Exception):
    def __init__(self, index: int, cause: str):
        super().__init__(f"{cause} at index {index}")
        self.index = index
        self.cause = cause


@dataclass
class SessionConfig:
    n: int = 1024
    seed_bits: int = 128
    l_msg: int = 32
    scheme: str = "naor-2bit"
    cut_fraction: float = 0.5
    reuse_challenge: bool = True

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if not 0 <= self.cut_fraction <= 1:
            raise ValueError("cut fraction must lie in [0, 1]")
        if self.l_msg < 1:
            raise ValueError("l_msg must be at least 1")
        scheme = self.build_scheme()
        if scheme.arity != 2:
            raise ValueError(f"measurement records are 2 bits; {self.scheme} has arity {scheme.arity}")

    @property
    def audit_size(self) -> int:
        return math.floor(self.n * self.cut_fraction)

    @property
    def preproc(self) -> bool:
        return self.scheme.startswith("preproc(")

    def build_scheme(self):
        return get_scheme(self.scheme, self.seed_bits)

    def base_scheme(self):
        s = self.build_scheme()
        return s.base if isinstance(s, PreprocScheme) else s


@dataclass
class SenderState:
    xS: BitVector
    thetaS: BitVector
    m0: BitVector
    m1: BitVector
    okS: BitVector | None = None
    audit: list[int] = field(default_factory=list)
    live: list[int] = field(default_factory=list)
    received_set: list[int] = field(default_factory=list)
    phase: str = "challenge"


@dataclass
class ReceiverState:
    b: int
    thetaR: BitVector | None = None
    xR: BitVector | None = None
    okR: BitVector | None = None
    records: list[BitVector] = field(default_factory=list)  # committed (basis, outcome)
    openings: list[Opening] = field(default_factory=list)
    commitments: list = field(default_factory=list)
    audit: list[int] = field(default_factory=list)
    I0: list[int] = field(default_factory=list)
    I1: list[int] = field(default_factory=list)
    output: BitVector | None = None
    other_output: BitVector | None = None
    phase: str = "challenge"


# -- protocol steps as plain functions ---------------------------------------

def bb84_simulate(n: int, rng, channel_rng=None, theta_r: BitVector | None = None):
    """Sender prepares, receiver measures.  Returns ``(x_s, theta_s, theta_r, x_r)``."""
    qubits = channel.prepare(n, rng)
    if theta_r is None:
        theta_r = random_bits(rng, n)
    x_r = channel.measure(qubits, theta_r, channel_rng if channel_rng is not None else rng)
    return qubits.bits, qubits.bases, theta_r, x_r


def measurement_record(basis: int, outcome: int) -> BitVector:
    return BitVector(2, (basis & 1) | ((outcome & 1) << 1))


def measurement_mismatch(theta_s, x_s, theta_r, x_r):
    """True where the bases agree but the outcomes differ (scalars or arrays)."""
    return (theta_s == theta_r) & (x_s != x_r)


def commit_measurements(records: list[BitVector], scheme, params, rng):
    """Commit to every record; ``params`` is one challenge or a list of per-record challenges."""
    if scheme.arity != 2:
        raise ValueError("measurement records need a 2-bit scheme")
    commitments, openings = [], []
    for i, rec in enumerate(records):
        p = params[i] if isinstance(params, list) else params
        c, o = scheme.commit(p, rec, rng)
        commitments.append(c)
        openings.append(o)
    return commitments, openings


@dataclass
class CutChooseResult:
    accepted: bool
    index: int | None = None
    cause: str | None = None


def cut_and_choose(audit: list[int], open_record, theta_s: BitVector, x_s: BitVector) -> CutChooseResult:
    """Sender-side audit.

    ``open_record(i)`` returns the verified (basis, outcome) record for index
    ``i`` or ``None`` when the opening does not verify.  Fails at the first
    index whose opening is bad or whose outcome contradicts the sender's bit
    in a matching basis.
    """
    for i in sorted(audit):
        rec = open_record(i)
        if rec is None:
            return CutChooseResult(False, i, "opening-invalid")
        if measurement_mismatch(theta_s[i], x_s[i], rec[0], rec[1]):
            return CutChooseResult(False, i, "measurement-mismatch")
    return CutChooseResult(True)


def choose_audit(n: int, size: int, rng) -> list[int]:
    return sorted(rng.sample(range(n), size))


def partition(theta_r: BitVector, theta_s: BitVector, live: list[int]) -> tuple[list[int], list[int]]:
    """``I0`` = live indices with matching bases, ``I1`` = the rest."""
    i0, i1 = [], []
    for i in live:
        (i1 if theta_r[i] ^ theta_s[i] else i0).append(i)
    return i0, i1


def oblivious_key_phase(sender: SenderState, receiver: ReceiverState, theta_s: BitVector,
                        audit: list[int]) -> None:
    """Set both oblivious keys and split the unopened indices into ``I0``/``I1``."""
    n = len(theta_s)
    opened = set(audit)
    live = [i for i in range(n) if i not in opened]
    sender.okS = sender.xS
    sender.live = live
    receiver.okR = receiver.xR
    receiver.I0, receiver.I1 = partition(receiver.thetaR, theta_s, live)


def sender_transfer(ok_s: BitVector, m0: BitVector, m1: BitVector, received: list[int],
                    live: list[int], rng) -> tuple[ToeplitzHash, ToeplitzHash, BitVector, BitVector]:
    """Hash the received set for slot 0 and its complement for slot 1.

    The sender never learns ``b``: whatever set arrives is labelled 0.
    """
    received_set = set(received)
    if not received_set <= set(live):
        raise ProtocolError("index set contains audited or out-of-range indices")
    sets = (sorted(received_set), [i for i in live if i not in received_set])
    l_msg = len(m0)
    out = []
    for msg, idx in zip((m0, m1), sets):
        f = random_toeplitz(l_msg, len(idx), rng)
        out.append((f, msg ^ toeplitz_hash(f, ok_s.select(idx))))
    (f0, s0), (f1, s1) = out
    return f0, f1, s0, s1


def receiver_output(ok_r: BitVector, indices: list[int], f: ToeplitzHash, s: BitVector) -> BitVector:
    return s ^ toeplitz_hash(f, ok_r.select(indices))


def mask_of(indices, n: int) -> BitVector:
    bits = 0
    for i in indices:
        bits |= 1 << i
    return BitVector(n, bits)


# -- parties ------------------------------------------------------------------

class Party:
    role = "?"

    def __init__(self, config: SessionConfig, rng):
        self.config = config
        self.rng = rng
        self.scheme = config.build_scheme()
        self.base = config.base_scheme()
        self.done = False
        self.abort: tuple[int, str, str] | None = None  # (code, phase, reason)
        self.abort_index: int | None = None

    def start(self) -> list[tuple[Frame, str]]:
        return []

    def handle(self, frame: Frame) -> list[tuple[Frame, str]]:
        if self.done:
            raise ProtocolError(f"{self.role}: frame 0x{frame.tag:02x} after the session ended")
        if frame.tag == Tag.ABORT:
            code, reason = frame.abort_reason()
            self.abort = (code, self.state.phase, reason)
            self.done = True
            return []
        try:
            return self._dispatch(frame)
        except CheckFailed as exc:
            return self._abort(ABORT_CHECK, f"{exc.cause} at index {exc.index}", exc.index)
        except (ProtocolError, ValueError) as exc:
            return self._abort(ABORT_PROTOCOL, str(exc))

    def _abort(self, code: int, reason: str, index: int | None = None):
        self.abort = (code, self.state.phase, reason)
        self.abort_index = index
        self.done = True
        return [(Frame.abort(reason, code), self.state.phase)]

    def _expect(self, frame: Frame, tag: Tag, count: int | None = None) -> list[BitVector]:
        if frame.tag != tag:
            raise ProtocolError(f"{self.role} expected {tag.name} in phase {self.state.phase}, got {frame.tag.name}")
        vectors = frame.vectors()
        if count is not None and len(vectors) != count:
            raise ProtocolError(f"{tag.name}: expected {count} vectors, got {len(vectors)}")
        return vectors

    def incoming_phase(self, frame: Frame) -> str:
        return _INCOMING_PHASE.get(frame.tag, self.state.phase) if frame.tag != Tag.COMMITMENT else self.state.phase


_INCOMING_PHASE = {
    Tag.CHALLENGE: "challenge",
    Tag.QUBITS: "bb84",
    Tag.CUT_CHOOSE_REQUEST: "cut-choose",
    Tag.CUT_CHOOSE_OPENINGS: "open",
    Tag.BASES_REVEAL: "okeys",
    Tag.INDEX_SET: "transfer",
    Tag.TRANSFER_PAYLOAD: "transfer",
}


class Sender(Party):
    role = "sender"

    def __init__(self, config: SessionConfig, rng, m0: BitVector, m1: BitVector):
        super().__init__(config, rng)
        if len(m0) != config.l_msg or len(m1) != config.l_msg:
            raise ValueError(f"messages must have l_msg = {config.l_msg} bits")
        qubits = channel.prepare(config.n, rng)
        self.qubits = qubits
        self.state = SenderState(qubits.bits, qubits.bases, m0, m1)
        self.params = None
        self.commitments: list = []
        self.preproc_commitments: list[Commitment] = []
        self.online: BitVector | None = None
        self.check: CutChooseResult | None = None
        self.hashes = None

    def start(self):
        cfg = self.config
        if cfg.reuse_challenge:
            self.params = self.base.challenge(self.rng)
            vectors = self.base.challenge_vectors(self.params)
        else:
            self.params = [self.base.challenge(self.rng) for _ in range(cfg.n)]
            vectors = [v for p in self.params for v in self.base.challenge_vectors(p)]
        out = [(Frame.of_vectors(Tag.CHALLENGE, vectors), "challenge")]
        if cfg.preproc:
            self.state.phase = "preproc"
        else:
            out.append(self._send_qubits())
        return out

    def _send_qubits(self):
        self.state.phase = "commit"
        return Frame.of_vectors(Tag.QUBITS, [self.qubits.bits, self.qubits.bases]), "bb84"

    def _params(self, i):
        return self.params[i] if isinstance(self.params, list) else self.params

    def _dispatch(self, frame):
        st = self.state
        n = self.config.n
        width = self.base.commitment_width()
        if st.phase == "preproc":
            vectors = self._expect(frame, Tag.COMMITMENT, n)
            if any(len(v) != width for v in vectors):
                raise ProtocolError(f"preprocessing commitments must be {width} bits")
            self.preproc_commitments = [Commitment(v) for v in vectors]
            return [self._send_qubits()]
        if st.phase == "commit":
            if self.config.preproc:
                (online,) = self._expect(frame, Tag.COMMITMENT, 1)
                if len(online) != 2 * n:
                    raise ProtocolError(f"online commitment must be {2 * n} bits, got {len(online)}")
                self.online = online
            else:
                vectors = self._expect(frame, Tag.COMMITMENT, n)
                if any(len(v) != width for v in vectors):
                    raise ProtocolError(f"commitments must be {width} bits")
                self.commitments = [Commitment(v) for v in vectors]
            st.audit = choose_audit(n, self.config.audit_size, self.rng)
            audit_set = set(st.audit)
            st.live = [i for i in range(n) if i not in audit_set]
            st.phase = "open"
            return [(Frame.of_vectors(Tag.CUT_CHOOSE_REQUEST, [mask_of(st.audit, n)]), "cut-choose")]
        if st.phase == "open":
            vectors = self._expect(frame, Tag.CUT_CHOOSE_OPENINGS, 2 * len(st.audit))
            openings = {i: Opening(vectors[2 * k], vectors[2 * k + 1]) for k, i in enumerate(st.audit)}
            self.check = cut_and_choose(st.audit, lambda i: self._open(i, openings[i]), st.thetaS, st.xS)
            if not self.check.accepted:
                raise CheckFailed(self.check.index, self.check.cause)
            st.okS = st.xS
            st.phase = "transfer"
            return [(Frame.of_vectors(Tag.BASES_REVEAL, [st.thetaS]), "okeys")]
        if st.phase == "transfer":
            (mask,) = self._expect(frame, Tag.INDEX_SET, 1)
            if len(mask) != n:
                raise ProtocolError(f"index set mask must be {n} bits")
            st.received_set = mask.support()
            f0, f1, s0, s1 = sender_transfer(st.okS, st.m0, st.m1, st.received_set, st.live, self.rng)
            self.hashes = (f0, f1)
            self.done = True
            st.phase = "done"
            return [(Frame.of_vectors(Tag.TRANSFER_PAYLOAD, [f0.diagonal, f1.diagonal, s0, s1]), "transfer")]
        raise ProtocolError(f"sender got {frame.tag.name} in phase {st.phase}")

    def _open(self, i: int, opening: Opening) -> BitVector | None:
        if len(opening.message) != 2:
            return None
        if self.config.preproc:
            online_i = BitVector.from_int(2, self.online.bits >> (2 * i))
            public = PreprocPublic(self.base, self._params(i), self.preproc_commitments[i])
            ok, rec = preproc_verify(public, online_i, opening)
            return rec if ok else None
        ok = self.base.verify(self._params(i), self.commitments[i], opening)
        return opening.message if ok else None


class Receiver(Party):
    """Honest receiver; adversaries override the hooks below."""

    role = "receiver"
    adversary = "honest"

    def __init__(self, config: SessionConfig, rng, b: int, channel_rng=None):
        super().__init__(config, rng)
        if b not in (0, 1):
            raise ValueError("choice bit must be 0 or 1")
        self.state = ReceiverState(b)
        if channel_rng is None:
            channel_rng = rng.derive("channel") if hasattr(rng, "derive") else rng
        self.channel_rng = channel_rng
        self.params = None
        self.records_pre = None
        self.batch: PreprocBatch | None = None
        self.qubits = None
        self.thetaS: BitVector | None = None

    # hooks ------------------------------------------------------------------
    def measure(self, qubits) -> None:
        st = self.state
        st.thetaR = random_bits(self.rng, len(qubits))
        st.xR = channel.measure(qubits, st.thetaR, self.channel_rng)

    def committed_records(self) -> list[BitVector]:
        st = self.state
        return [measurement_record(st.thetaR[i], st.xR[i]) for i in range(self.config.n)]

    def open_one(self, i: int) -> Opening:
        return self.state.openings[i]

    def after_bases(self, theta_s: BitVector) -> None:
        pass

    # protocol ---------------------------------------------------------------
    def _params(self, i):
        return self.params[i] if isinstance(self.params, list) else self.params

    def _dispatch(self, frame):
        st = self.state
        cfg = self.config
        n = cfg.n
        if st.phase == "challenge":
            vectors = self._expect(frame, Tag.CHALLENGE)
            if cfg.reuse_challenge:
                if len(vectors) != 1:
                    raise ProtocolError("expected a single reusable challenge")
                self.params = self.base.params_from_vectors(vectors)
            else:
                if len(vectors) != n:
                    raise ProtocolError(f"expected {n} challenges, got {len(vectors)}")
                self.params = [self.base.params_from_vectors([v]) for v in vectors]
            if cfg.preproc:
                self.records_pre = []
                for i in range(n):
                    self.records_pre.extend(preproc_offline(self.base, 1, self.rng, self._params(i)))
                st.phase = "bb84"
                vectors = [r.public.commitment.c for r in self.records_pre]
                return [(Frame.of_vectors(Tag.COMMITMENT, vectors), "preproc")]
            st.phase = "bb84"
            return []
        if st.phase == "bb84":
            xs, bases = self._expect(frame, Tag.QUBITS, 2)
            if len(xs) != n or len(bases) != n:
                raise ProtocolError(f"expected {n} qubits, got {len(xs)}")
            self.qubits = channel.QubitBatch(xs, bases)
            self.measure(self.qubits)
            st.records = self.committed_records()
            st.phase = "cut-choose"
            if cfg.preproc:
                self.batch = PreprocBatch(self.records_pre)
                online = self.batch.commit(pack_messages(st.records))
                st.openings = [r.opening for r in self.records_pre]
                return [(Frame.of_vectors(Tag.COMMITMENT, [online]), "commit")]
            st.commitments, st.openings = commit_measurements(st.records, self.base, self.params, self.rng)
            return [(Frame.of_vectors(Tag.COMMITMENT, [c.c for c in st.commitments]), "commit")]
        if st.phase == "cut-choose":
            (mask,) = self._expect(frame, Tag.CUT_CHOOSE_REQUEST, 1)
            if len(mask) != n:
                raise ProtocolError(f"audit mask must be {n} bits")
            st.audit = mask.support()
            vectors = []
            for i in st.audit:
                o = self.open_one(i)
                vectors += [o.message, o.x]
            st.phase = "okeys"
            return [(Frame.of_vectors(Tag.CUT_CHOOSE_OPENINGS, vectors), "open")]
        if st.phase == "okeys":
            (theta_s,) = self._expect(frame, Tag.BASES_REVEAL, 1)
            if len(theta_s) != n:
                raise ProtocolError(f"bases must be {n} bits")
            self.thetaS = theta_s
            self.after_bases(theta_s)
            st.okR = st.xR
            audit = set(st.audit)
            live = [i for i in range(n) if i not in audit]
            st.I0, st.I1 = partition(st.thetaR, theta_s, live)
            chosen = st.I1 if st.b else st.I0
            st.phase = "transfer"
            return [(Frame.of_vectors(Tag.INDEX_SET, [mask_of(chosen, n)]), "transfer")]
        if st.phase == "transfer":
            d0, d1, s0, s1 = self._expect(frame, Tag.TRANSFER_PAYLOAD, 4)
            l_msg = cfg.l_msg
            if len(s0) != l_msg or len(s1) != l_msg:
                raise ProtocolError(f"transfer strings must be {l_msg} bits")
            # Slot b was hashed over I0 from the receiver's view, the other slot over I1.
            own, other = (st.I0, st.I1)
            f_own = ToeplitzHash(l_msg, len(own), (d0, d1)[st.b])
            f_other = ToeplitzHash(l_msg, len(other), (d1, d0)[st.b])
            st.output = receiver_output(st.okR, own, f_own, (s0, s1)[st.b])
            st.other_output = receiver_output(st.okR, other, f_other, (s1, s0)[st.b])
            st.phase = "done"
            self.done = True
            return []
        raise ProtocolError(f"receiver got {frame.tag.name} in phase {st.phase}")


class DelayingReceiver(Receiver):
    """Stores the qubits, commits to random guesses, measures after the bases are revealed."""

    adversary = "delaying"

    def measure(self, qubits) -> None:
        st = self.state
        st.thetaR = random_bits(self.rng, len(qubits))
        st.xR = random_bits(self.rng, len(qubits))

    def after_bases(self, theta_s: BitVector) -> None:
        # Measuring every held qubit in the revealed basis recovers x_S exactly.
        st = self.state
        st.xR = channel.measure(self.qubits, theta_s, self.channel_rng)


class OutcomeFlipper(Receiver):
    """Measures honestly but commits to the complement of every outcome."""

    adversary = "outcome-flipper"

    def committed_records(self) -> list[BitVector]:
        st = self.state
        return [measurement_record(st.thetaR[i], 1 ^ st.xR[i]) for i in range(self.config.n)]


class EquivocatingReceiver(Receiver):
    """Commits honestly, then tries to open each audited record to a flipped outcome.

    With a seed space small enough to enumerate it searches for a seed that
    makes the false opening verify; otherwise it reuses the original seed.
    """

    adversary = "equivocating"
    search_limit_bits = 16

    def open_one(self, i: int) -> Opening:
        honest = self.state.openings[i]
        # Flip the outcome bit.  Under preprocessing the opening is of the mask,
        # and flipping the mask flips the recovered record the same way.
        claimed = honest.message ^ BitVector(2, 0b10)
        if self.config.preproc:
            commitment = self.records_pre[i].public.commitment
        else:
            commitment = self.state.commitments[i]
        params = self._params(i)
        if self.config.seed_bits <= self.search_limit_bits:
            for x in enumerate_seeds(self.config.seed_bits):
                if self.base.verify(params, commitment, Opening(claimed, x)):
                    return Opening(claimed, x)
        return Opening(claimed, honest.x)


RECEIVERS = {
    "honest": Receiver,
    "delaying": DelayingReceiver,
    "equivocating": EquivocatingReceiver,
    "outcome-flipper": OutcomeFlipper,
}


def make_receiver(adversary: str, config: SessionConfig, rng, b: int, channel_rng=None) -> Receiver:
    try:
        cls = RECEIVERS[adversary]
    except KeyError:
        raise ValueError(f"unknown adversary {adversary!r}; choose from {', '.join(ADVERSARIES)}") from None
    return cls(config, rng, b, channel_rng)
