"""Payload-size and timing tables for the commitment schemes."""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass

from .commitments import (
    PreprocBatch,
    PreprocScheme,
    commit_exchange,
    expected_payload_bits,
    get_scheme,
    pack_messages,
    preproc_commit,
    preproc_offline,
)
from .commitments.base import random_bits
from .expansion import KeystreamRandom

FORMULAS = {
    "naor-bit": "7n+1",
    "naor-2bit": "7n+8",
    "circulant-string": "2z+n+t",
    "kilian": "2z+2t+n+l",
}

CSV_COLUMNS = (
    "scheme", "n", "t", "l", "z", "formula", "expected_bits", "payload_bits", "match",
    "commit_us", "verify_us", "online_commit_us", "batch_online_us", "full_commit_us",
    "online_speedup", "batch_speedup",
)


@dataclass
class BenchRow:
    scheme: str
    n: int
    t: int
    l: int | None  # noqa: E741
    z: int
    formula: str
    expected_bits: int
    payload_bits: int
    commit_us: float
    verify_us: float | None
    online_commit_us: float | None = None
    batch_online_us: float | None = None
    full_commit_us: float | None = None

    @property
    def match(self) -> bool:
        return self.expected_bits == self.payload_bits

    @property
    def online_speedup(self) -> float | None:
        if self.online_commit_us is None:
            return None
        return self.full_commit_us / self.online_commit_us

    @property
    def batch_speedup(self) -> float | None:
        if self.batch_online_us is None:
            return None
        return self.full_commit_us / self.batch_online_us

    def csv_fields(self) -> list[str]:
        def fmt(v):
            if v is None:
                return ""
            if isinstance(v, bool):
                return "1" if v else "0"
            if isinstance(v, float):
                return f"{v:.4g}"
            return str(v)

        return [fmt(getattr(self, c)) for c in CSV_COLUMNS]


def _per_call_us(fn, count: int) -> float:
    start = time.perf_counter_ns()
    for i in range(count):
        fn(i)
    return (time.perf_counter_ns() - start) / count / 1000


def _median_us(fn, count: int, rounds: int = 5) -> float:
    return statistics.median(_per_call_us(fn, count) for _ in range(rounds))


@dataclass(frozen=True)
class PreprocTiming:
    full_commit_us: float
    online_commit_us: float
    batch_online_us: float
    batch_size: int

    @property
    def online_speedup(self) -> float:
        return self.full_commit_us / self.online_commit_us

    @property
    def batch_speedup(self) -> float:
        return self.full_commit_us / self.batch_online_us


def preproc_timing(base_id: str = "naor-2bit", n: int = 128, reps: int = 1000, batch_size: int = 1024,
                   seed: int = 0) -> PreprocTiming:
    """Full base commit against the online step of the preprocessing wrapper.

    ``online_commit_us`` is one XOR on a single record; ``batch_online_us``
    is one XOR over ``batch_size`` packed records, divided per commitment.
    Offline work is done before the clock starts.
    """
    rng = KeystreamRandom(seed).derive("bench")
    base = get_scheme(base_id, n)
    params = base.challenge(rng)
    msgs = [random_bits(rng, base.arity) for _ in range(reps)]
    full = _median_us(lambda i: base.commit(params, msgs[i], rng), reps)

    rounds = 5
    samples = []
    for _ in range(rounds):
        records = preproc_offline(base, reps, rng, params)
        samples.append(_per_call_us(lambda i: preproc_commit(records[i], msgs[i]), reps))
    online = statistics.median(samples)

    samples = []
    packed = pack_messages(random_bits(rng, base.arity) for _ in range(batch_size))
    for _ in range(rounds):
        batch = PreprocBatch(preproc_offline(base, batch_size, rng, params))
        start = time.perf_counter_ns()
        batch.commit(packed)
        samples.append((time.perf_counter_ns() - start) / batch_size / 1000)
    batch_us = statistics.median(samples)
    return PreprocTiming(full, online, batch_us, batch_size)


def bench_row(scheme_id: str, n: int, t: int | None = None, l: int | None = None,  # noqa: E741
              reps: int = 200, seed: int = 0) -> BenchRow:
    rng = KeystreamRandom(seed).derive(f"bench/{scheme_id}/{n}/{t}")
    scheme = get_scheme(scheme_id, n, t, l)
    if isinstance(scheme, PreprocScheme):
        base = scheme.base
        timing = preproc_timing(base.id, n, reps, seed=seed)
        # Online traffic is the masked message alone.
        return BenchRow(
            scheme.id, n, base.arity, None, base.commitment_width(), "a", base.arity, base.arity,
            commit_us=timing.online_commit_us, verify_us=None,
            online_commit_us=timing.online_commit_us, batch_online_us=timing.batch_online_us,
            full_commit_us=timing.full_commit_us,
        )
    msg = random_bits(rng, scheme.arity)
    exchange = commit_exchange(scheme, [msg], reuse_challenge=False, rng=rng)
    if not exchange.all_accepted:
        raise AssertionError(f"honest {scheme_id} exchange rejected")
    params = scheme.challenge(rng)
    msgs = [random_bits(rng, scheme.arity) for _ in range(reps)]
    pairs = [scheme.commit(params, m, rng) for m in msgs]
    commit_us = _median_us(lambda i: scheme.commit(params, msgs[i], rng), reps)
    verify_us = _median_us(lambda i: scheme.verify(params, *pairs[i]), reps)
    return BenchRow(
        scheme.id, n, scheme.arity, getattr(scheme, "seed_len", None), scheme.commitment_width(),
        FORMULAS[scheme.id], expected_payload_bits(scheme, 1, reuse_challenge=False), exchange.payload_bits,
        commit_us, verify_us,
    )
