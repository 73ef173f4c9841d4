"""Preprocessing wrapper: commit offline to random masks, XOR online.

Offline, the prover commits to a uniformly random mask ``m`` under a base
scheme.  Online, committing to ``b`` is publishing ``b xor m``; opening
reveals the base opening of ``m``, and the verifier recovers ``b``.
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass

from ..gf2 import BitVector
from .base import Commitment, Opening, as_message, default_rng, random_bits


class RecordReuseError(RuntimeError):
    pass


@dataclass(frozen=True)
class PreprocPublic:
    """What the verifier holds for one record: base scheme, params, commitment to the mask."""

    scheme: object
    params: object
    commitment: Commitment


class PreprocRecord:
    """Prover-side record; single use."""

    __slots__ = ("public", "mask", "opening", "consumed")

    def __init__(self, public: PreprocPublic, mask: BitVector, opening: Opening):
        self.public = public
        self.mask = mask
        self.opening = opening
        self.consumed = False

    def __repr__(self):
        return f"PreprocRecord(arity={len(self.mask)}, consumed={self.consumed})"


def preproc_offline(base_scheme, count: int, randomness=None, params=None) -> list[PreprocRecord]:
    """``count`` records, each a fresh random mask committed under ``base_scheme``.

    ``params`` is the base scheme's challenge; a fresh one is drawn when omitted.
    """
    rng = default_rng(randomness)
    if params is None:
        params = base_scheme.challenge(rng)
    records = []
    for _ in range(count):
        mask = random_bits(rng, base_scheme.arity)
        commitment, opening = base_scheme.commit(params, mask, rng)
        records.append(PreprocRecord(PreprocPublic(base_scheme, params, commitment), mask, opening))
    return records


def preproc_commit(rec: PreprocRecord, b) -> BitVector:
    """Online commitment: ``b xor m``.  Consumes the record."""
    if rec.consumed:
        raise RecordReuseError("preprocessing record already used")
    rec.consumed = True
    return rec.mask ^ (b if isinstance(b, BitVector) else as_message(b, len(rec.mask)))


def preproc_verify(rec_public: PreprocPublic, online_c: BitVector, opening: Opening):
    """Check the base opening of the mask and recover ``b = m xor c``.

    Returns ``(True, b)`` or ``(False, None)``.
    """
    scheme = rec_public.scheme
    try:
        ok = scheme.verify(rec_public.params, rec_public.commitment, opening)
    except (ValueError, TypeError):
        ok = False
    if not ok or len(opening.message) != len(online_c):
        return False, None
    return True, opening.message ^ online_c


class PreprocBatch:
    """Records packed side by side so one XOR commits to all of them.

    Record ``i`` occupies bits ``[i*a, (i+1)*a)`` of the packed mask, where
    ``a`` is the base arity.  Building the batch claims the records; the
    batch itself commits exactly once.
    """

    def __init__(self, records):
        records = list(records)
        if not records:
            raise ValueError("empty batch")
        self.arity = len(records[0].mask)
        packed = 0
        for i, rec in enumerate(records):
            if rec.consumed:
                raise RecordReuseError("preprocessing record already used")
            if len(rec.mask) != self.arity:
                raise ValueError("records in a batch must share one arity")
            rec.consumed = True
            packed |= rec.mask.bits << (i * self.arity)
        self.records = records
        self.masks = BitVector(len(records) * self.arity, packed)
        self.used = False

    def __len__(self):
        return len(self.records)

    def commit(self, messages: BitVector) -> BitVector:
        """Online commitment to all packed messages at once."""
        if self.used:
            raise RecordReuseError("preprocessing batch already used")
        self.used = True
        return self.masks ^ messages

    def element(self, online: BitVector, i: int) -> BitVector:
        a = self.arity
        return BitVector.from_int(a, online.bits >> (i * a))


def pack_messages(messages) -> BitVector:
    out = BitVector(0)
    for m in messages:
        out = out + m
    return out


def unpack_element(online: BitVector, i: int, arity: int) -> BitVector:
    return BitVector.from_int(arity, online.bits >> (i * arity))


class PreprocStore:
    """Hands out unused records under a lock, one owner per record."""

    def __init__(self, records=()):
        self._records = deque(records)
        self._lock = threading.Lock()

    def add(self, records) -> None:
        with self._lock:
            self._records.extend(records)

    def take(self) -> PreprocRecord:
        with self._lock:
            if not self._records:
                raise LookupError("preprocessing store is empty")
            return self._records.popleft()

    def __len__(self):
        with self._lock:
            return len(self._records)


@dataclass(frozen=True)
class PreprocScheme:
    """``preproc(<base>)`` in the scheme registry.

    ``challenge`` returns the base params; ``commit`` runs a whole
    offline+online cycle on a fresh record, which is what completeness sweeps
    need.  Protocols that separate the phases use the functions above.
    """

    base: object

    @property
    def id(self) -> str:
        return f"preproc({self.base.id})"

    @property
    def arity(self) -> int:
        return self.base.arity

    @property
    def n(self) -> int:
        return self.base.n

    def challenge(self, rng=None):
        return self.base.challenge(rng)

    def challenge_vectors(self, params):
        return self.base.challenge_vectors(params)

    def params_from_vectors(self, vectors):
        return self.base.params_from_vectors(vectors)

    def commit(self, params, message, rng=None):
        (rec,) = preproc_offline(self.base, 1, rng, params)
        online = preproc_commit(rec, as_message(message, self.arity))
        return PreprocCommitment(rec.public, online), rec.opening

    def verify(self, params, commitment, opening) -> bool:
        ok, _ = preproc_verify(commitment.public, commitment.online, opening)
        return ok

    def recover(self, commitment, opening):
        return preproc_verify(commitment.public, commitment.online, opening)

    def commitment_width(self) -> int:
        return self.arity


@dataclass(frozen=True)
class PreprocCommitment:
    public: PreprocPublic
    online: BitVector
