"""Commit/open exchanges over the framed transport, for cost accounting.

The verifier sends a challenge, the prover sends its commitments, and later
the openings; every frame goes through the real encoder and is counted in a
:class:`~naorcommit.wire.Transcript`.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..gf2 import BitVector
from ..wire import Frame, Tag, Transcript, duplex_pair
from .base import Commitment, Opening, default_rng
from .preproc import PreprocScheme
from .schemes import CirculantStringScheme, KilianScheme, NaorBitScheme, TwoBitScheme


@dataclass
class ExchangeResult:
    transcript: Transcript
    accepted: list[bool]

    @property
    def payload_bits(self) -> int:
        return self.transcript.bits()

    @property
    def all_accepted(self) -> bool:
        return all(self.accepted)


def _commitment_vectors(c: Commitment) -> list[BitVector]:
    return [c.c] if c.c2 is None else [c.c, c.c2]


def _opening_vectors(o: Opening) -> list[BitVector]:
    return [o.message, o.x] if o.s is None else [o.message, o.x, o.s]


def commit_exchange(scheme, messages, reuse_challenge: bool = True, rng=None,
                    transcript: Transcript | None = None, tamper=None) -> ExchangeResult:
    """Commit to each of ``messages`` and open them all.

    With ``reuse_challenge`` one challenge covers every commitment; otherwise
    each commitment gets its own.  ``tamper(i, opening)`` may replace an
    opening before it is sent, for negative tests.
    """
    if isinstance(scheme, PreprocScheme):
        raise ValueError("preprocessing splits commit into two phases; use the preproc functions directly")
    rng = default_rng(rng)
    transcript = transcript if transcript is not None else Transcript()
    verifier, prover = duplex_pair(transcript, ("V->P", "P->V"))
    messages = list(messages)
    k = len(messages)

    n_challenges = 1 if reuse_challenge else k
    v_params = [scheme.challenge(rng) for _ in range(n_challenges)]
    for p in v_params:
        verifier.send(Frame.of_vectors(Tag.CHALLENGE, scheme.challenge_vectors(p)), "challenge")
    p_params = [scheme.params_from_vectors(prover.recv().vectors()) for _ in range(n_challenges)]

    openings = []
    for i, m in enumerate(messages):
        c, o = scheme.commit(p_params[0 if reuse_challenge else i], m, rng)
        openings.append(o)
        prover.send(Frame.of_vectors(Tag.COMMITMENT, _commitment_vectors(c)), "commit")
    received = [Commitment(*verifier.recv().vectors()) for _ in range(k)]

    for i, o in enumerate(openings):
        if tamper is not None:
            o = tamper(i, o)
        prover.send(Frame.of_vectors(Tag.OPENING, _opening_vectors(o)), "open")
    accepted = []
    for i in range(k):
        opening = Opening(*verifier.recv().vectors())
        accepted.append(scheme.verify(v_params[0 if reuse_challenge else i], received[i], opening))
    return ExchangeResult(transcript, accepted)


def expected_payload_bits(scheme, k: int = 1, reuse_challenge: bool = True) -> int:
    """Closed-form payload cost of :func:`commit_exchange` for ``k`` commitments."""
    n = scheme.n
    if isinstance(scheme, NaorBitScheme):
        challenge, per = 3 * n, 3 * n + 1 + n
    elif isinstance(scheme, TwoBitScheme):
        challenge, per = 3 * n + 3, (3 * n + 3) + (n + 2)
    elif isinstance(scheme, CirculantStringScheme):
        z = scheme.commitment_width()
        challenge, per = z, z + scheme.t + n
    elif isinstance(scheme, KilianScheme):
        z = scheme.commitment_width()
        challenge, per = z, (z + scheme.t) + (scheme.t + n + scheme.seed_len)
    else:
        raise ValueError(f"no cost formula for {scheme!r}")
    return (challenge + k * per) if reuse_challenge else k * (challenge + per)
