"""Uniform (challenge, commit, verify) view over the concrete schemes.

Each scheme object is bound to its size parameters; ``challenge`` plays the
verifier's setup move and returns the params every later call needs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..expansion import PRODUCTION, ExpansionFunction
from ..gf2 import BitVector
from .base import Commitment, Opening, as_message, default_rng, random_bits
from .circulant import StringParams, string_commit, string_params, string_verify, string_width
from .kilian import KilianParams, kilian_commit, kilian_params, kilian_verify
from .naor import NaorParams, naor_challenge, naor_commit, naor_verify
from .twobit import TwoBitParams, twobit_challenge, twobit_commit, twobit_verify

SCHEME_IDS = ("naor-bit", "naor-2bit", "circulant-string", "kilian")


@dataclass(frozen=True)
class NaorBitScheme:
    n: int
    prg: ExpansionFunction = PRODUCTION
    id = "naor-bit"

    @property
    def arity(self) -> int:
        return 1

    def challenge(self, rng=None) -> NaorParams:
        return naor_challenge(self.n, rng, self.prg)

    def challenge_vectors(self, params: NaorParams) -> list[BitVector]:
        return [params.r]

    def params_from_vectors(self, vectors: list[BitVector]) -> NaorParams:
        (r,) = vectors
        return NaorParams(self.n, r, self.prg)

    def commit(self, params, message, rng=None) -> tuple[Commitment, Opening]:
        msg = as_message(message, 1)
        x = random_bits(default_rng(rng), self.n)
        return naor_commit(params, msg, x), Opening(msg, x)

    def verify(self, params, commitment: Commitment, opening: Opening) -> bool:
        return naor_verify(params, commitment, opening.message, opening.x)

    def commitment_width(self) -> int:
        return 3 * self.n


@dataclass(frozen=True)
class TwoBitScheme:
    n: int
    prg: ExpansionFunction = PRODUCTION
    id = "naor-2bit"

    @property
    def arity(self) -> int:
        return 2

    def challenge(self, rng=None) -> TwoBitParams:
        return twobit_challenge(self.n, rng, self.prg)

    def challenge_vectors(self, params: TwoBitParams) -> list[BitVector]:
        return [params.r1]

    def params_from_vectors(self, vectors: list[BitVector]) -> TwoBitParams:
        (r1,) = vectors
        return TwoBitParams(self.n, r1, self.prg)

    def commit(self, params, message, rng=None) -> tuple[Commitment, Opening]:
        msg = as_message(message, 2)
        x = random_bits(default_rng(rng), self.n)
        return twobit_commit(params, msg, x), Opening(msg, x)

    def verify(self, params, commitment: Commitment, opening: Opening) -> bool:
        return twobit_verify(params, commitment, opening.message, opening.x)

    def commitment_width(self) -> int:
        return 3 * self.n + 3


@dataclass(frozen=True)
class CirculantStringScheme:
    n: int
    t: int
    prg: ExpansionFunction = PRODUCTION
    id = "circulant-string"

    @property
    def arity(self) -> int:
        return self.t

    def challenge(self, rng=None) -> StringParams:
        return string_params(self.n, self.t, rng, self.prg)

    def challenge_vectors(self, params: StringParams) -> list[BitVector]:
        return [params.r1]

    def params_from_vectors(self, vectors: list[BitVector]) -> StringParams:
        (r1,) = vectors
        return StringParams(self.n, self.t, string_width(self.n, self.t), r1, self.prg)

    def commit(self, params, message, rng=None) -> tuple[Commitment, Opening]:
        msg = as_message(message).pad_to(self.t)
        x = random_bits(default_rng(rng), self.n)
        return string_commit(params, msg, x), Opening(msg, x)

    def verify(self, params, commitment: Commitment, opening: Opening) -> bool:
        return string_verify(params, commitment, opening.message, opening.x)

    def commitment_width(self) -> int:
        return string_width(self.n, self.t)


@dataclass(frozen=True)
class KilianScheme:
    n: int
    t: int
    l: int | None = None  # noqa: E741
    prg: ExpansionFunction = PRODUCTION
    id = "kilian"

    @property
    def arity(self) -> int:
        return self.t

    @property
    def seed_len(self) -> int:
        return self.n if self.l is None else self.l

    def challenge(self, rng=None) -> KilianParams:
        return kilian_params(self.n, self.t, self.seed_len, rng, self.prg)

    def challenge_vectors(self, params: KilianParams) -> list[BitVector]:
        return [params.r1]

    def params_from_vectors(self, vectors: list[BitVector]) -> KilianParams:
        (r1,) = vectors
        return KilianParams(self.n, self.seed_len, self.t, string_width(self.n, self.seed_len), r1, self.prg)

    def commit(self, params, message, rng=None) -> tuple[Commitment, Opening]:
        rng = default_rng(rng)
        msg = as_message(message, self.t)
        x = random_bits(rng, self.n)
        s = random_bits(rng, self.seed_len)
        return kilian_commit(params, msg, x, s), Opening(msg, x, s)

    def verify(self, params, commitment: Commitment, opening: Opening) -> bool:
        if opening.s is None:
            return False
        return kilian_verify(params, commitment, opening.message, opening.x, opening.s)

    def commitment_width(self) -> int:
        return string_width(self.n, self.seed_len)


_PREPROC_RE = re.compile(r"^preproc\((.+)\)$")


def get_scheme(scheme_id: str, n: int, t: int | None = None, l: int | None = None,  # noqa: E741
               prg: ExpansionFunction = PRODUCTION):
    """Build a scheme from its stable identifier, e.g. ``"preproc(naor-2bit)"``."""
    m = _PREPROC_RE.match(scheme_id)
    if m:
        from .preproc import PreprocScheme

        return PreprocScheme(get_scheme(m.group(1), n, t, l, prg))
    if scheme_id == "naor-bit":
        return NaorBitScheme(n, prg)
    if scheme_id == "naor-2bit":
        return TwoBitScheme(n, prg)
    if scheme_id == "circulant-string":
        if t is None:
            raise ValueError("circulant-string needs a message length t")
        return CirculantStringScheme(n, t, prg)
    if scheme_id == "kilian":
        if t is None:
            raise ValueError("kilian needs a message length t")
        return KilianScheme(n, t, l, prg)
    raise ValueError(f"unknown scheme {scheme_id!r}; known: {', '.join(SCHEME_IDS)} and preproc(<base>)")
