import itertools
import random
import threading

import pytest
from hypothesis import given
from hypothesis import strategies as st

from naorcommit.commitments import (
    Commitment,
    NaorParams,
    Opening,
    PreprocBatch,
    PreprocStore,
    RecordReuseError,
    StringParams,
    TwoBitParams,
    commit_exchange,
    expected_payload_bits,
    get_scheme,
    kilian_commit,
    kilian_params,
    kilian_verify,
    naor_challenge,
    naor_commit,
    naor_verify,
    pack_messages,
    preproc_commit,
    preproc_offline,
    preproc_verify,
    string_commit,
    string_params,
    string_verify,
    string_width,
    twobit_challenge,
    twobit_commit,
    twobit_verify,
    unpack_element,
)
from naorcommit.commitments.circulant import sample_odd_weight
from naorcommit.expansion import PRODUCTION, TOY, enumerate_seeds, expand
from naorcommit.gf2 import BitVector, generate_vectors

B = BitVector.from_str


def rbits(rng, n):
    return BitVector(n, rng.getrandbits(n))


# -- naor-bit ---------------------------------------------------------------

def test_naor_challenge_width():
    assert len(naor_challenge(2, random.Random(0)).r) == 6
    assert len(naor_challenge(128, random.Random(0)).r) == 384
    rng = random.Random(1)
    assert naor_challenge(64, rng).r != naor_challenge(64, rng).r
    with pytest.raises(ValueError):
        NaorParams(2, BitVector(5))


def test_naor_commit_rule():
    rng = random.Random(2)
    p = naor_challenge(16, rng)
    x = rbits(rng, 16)
    assert naor_commit(p, 0, x).c == expand(PRODUCTION, x, 48)
    assert naor_commit(p, 1, x).c == expand(PRODUCTION, x, 48) ^ p.r
    zero = NaorParams(16, BitVector(48))
    assert naor_commit(zero, 1, x).c == expand(PRODUCTION, x, 48)
    with pytest.raises(ValueError):
        naor_commit(p, 0, BitVector(15))


def test_naor_exhaustive_completeness_toy():
    for r in itertools.product((0, 1), repeat=6):
        p = NaorParams(2, BitVector.from_bits(r), TOY)
        for b in (0, 1):
            for x in enumerate_seeds(2):
                assert naor_verify(p, naor_commit(p, b, x), b, x)


def test_naor_verify_rejects_malformed():
    rng = random.Random(3)
    p = naor_challenge(32, rng)
    x = rbits(rng, 32)
    c = naor_commit(p, 1, x)
    assert not naor_verify(p, Commitment(c.c[:95]), 1, x)
    assert not naor_verify(p, c, 0, x)
    assert not naor_verify(p, c, 1, BitVector(31))


# -- naor-2bit ----------------------------------------------------------------

def test_twobit_rules():
    rng = random.Random(4)
    p = twobit_challenge(16, rng)
    x = rbits(rng, 16)
    g = expand(PRODUCTION, x, 51)
    assert len(p.r1) == 51
    assert p.r2 == p.r1.rotate_right(1)
    assert twobit_commit(p, B("00"), x).c == g
    assert twobit_commit(p, B("10"), x).c == g ^ p.r1
    assert twobit_commit(p, B("01"), x).c == g ^ p.r2
    assert twobit_commit(p, B("11"), x).c == g ^ p.r1 ^ p.r1.rotate_right(1)


def test_twobit_forbidden_challenges():
    with pytest.raises(ValueError):
        TwoBitParams(2, BitVector(9))
    with pytest.raises(ValueError):
        TwoBitParams(2, BitVector.ones(9))
    with pytest.raises(ValueError):
        TwoBitParams(2, BitVector(8, 1))
    rng = random.Random(0)
    for _ in range(500):
        r1 = twobit_challenge(1, rng).r1
        assert r1.any() and r1 != BitVector.ones(6)


def test_twobit_exhaustive_completeness_toy():
    for r in itertools.product((0, 1), repeat=9):
        r1 = BitVector.from_bits(r)
        if not r1.any() or r1 == BitVector.ones(9):
            continue
        p = TwoBitParams(2, r1, TOY)
        for b in itertools.product((0, 1), repeat=2):
            for x in enumerate_seeds(2):
                assert twobit_verify(p, twobit_commit(p, b, x), b, x)


def test_twobit_verify_rejects():
    rng = random.Random(5)
    p = twobit_challenge(64, rng)
    x = rbits(rng, 64)
    c = twobit_commit(p, B("10"), x)
    assert twobit_verify(p, c, B("10"), x)
    assert not twobit_verify(p, c, B("01"), x)
    assert not twobit_verify(p, Commitment(c.c[:100]), B("10"), x)


# -- circulant string ---------------------------------------------------------

def test_string_width_examples():
    assert string_width(128, 2) == 1024
    assert string_width(128, 256) == 2048
    assert string_width(1, 1) == 16
    assert string_width(2, 2) == 32
    assert string_width(1, 5) == 32


def test_string_params_odd_weight():
    rng = random.Random(6)
    for _ in range(200):
        p = string_params(3, 4, rng)
        assert p.r1.weight() % 2 == 1 and len(p.r1) == p.z == 32
    assert all(sample_odd_weight(rng, 16).weight() % 2 for _ in range(100))
    with pytest.raises(ValueError):
        StringParams(2, 2, 32, BitVector(32, 3))
    with pytest.raises(ValueError):
        StringParams(2, 2, 16, BitVector(16, 1))


def test_string_rules():
    rng = random.Random(7)
    p = string_params(16, 5, rng)
    x = rbits(rng, 16)
    g = expand(PRODUCTION, x, p.z)
    assert string_commit(p, BitVector(5), x).c == g
    b = B("10110")
    acc = g
    for bit, r in zip(b, generate_vectors(p.r1, 5)):
        if bit:
            acc = acc ^ r
    assert string_commit(p, b, x).c == acc
    # Short messages are zero-padded on the right.
    assert string_commit(p, B("101"), x) == string_commit(p, B("10100"), x)
    with pytest.raises(ValueError):
        string_commit(p, B("101101"), x)


def test_string_t1_degenerates_to_single_term():
    rng = random.Random(8)
    p = string_params(8, 1, rng)
    x = rbits(rng, 8)
    assert string_commit(p, B("1"), x).c == expand(PRODUCTION, x, p.z) ^ p.r1


@given(st.integers(1, 40), st.integers(0, 2**40 - 1), st.integers(0, 2**40 - 1), st.integers(0, 2**32))
def test_challenge_linearity(t, b1, b2, seed):
    rng = random.Random(seed)
    p = string_params(8, t, rng)
    x = rbits(rng, 8)
    m1, m2 = BitVector.from_int(t, b1), BitVector.from_int(t, b2)
    lhs = string_commit(p, m1, x).c ^ string_commit(p, m2, x).c
    rhs = BitVector(p.z)
    for bit, r in zip(m1 ^ m2, p.vectors):
        if bit:
            rhs = rhs ^ r
    assert lhs == rhs


def test_string_exhaustive_completeness_toy():
    rng = random.Random(9)
    for _ in range(20):
        p = string_params(2, 2, rng, TOY)
        for b in itertools.product((0, 1), repeat=2):
            for x in enumerate_seeds(2):
                assert string_verify(p, string_commit(p, b, x), b, x)


# -- kilian -------------------------------------------------------------------

def test_kilian_rules():
    rng = random.Random(10)
    p = kilian_params(16, 24, randomness=rng)
    assert p.l == 16
    assert p.z == string_width(16, 16)
    x, s = rbits(rng, 16), rbits(rng, 16)
    b = rbits(rng, 24)
    c = kilian_commit(p, b, x, BitVector(16))
    assert c.c == expand(PRODUCTION, x, p.z)
    assert c.c2 == expand(PRODUCTION, BitVector(16), 24) ^ b
    c = kilian_commit(p, expand(PRODUCTION, s, 24), x, s)
    assert not c.c2.any()
    assert kilian_verify(p, c, expand(PRODUCTION, s, 24), x, s)


def test_kilian_rejects_tampering():
    rng = random.Random(11)
    p = kilian_params(16, 8, 12, rng)
    assert p.l == 12
    x, s, b = rbits(rng, 16), rbits(rng, 12), rbits(rng, 8)
    c = kilian_commit(p, b, x, s)
    assert kilian_verify(p, c, b, x, s)
    assert not kilian_verify(p, Commitment(c.c, c.c2 ^ BitVector.unit(8, 0)), b, x, s)
    assert not kilian_verify(p, c, b, x, s ^ BitVector.unit(12, 3))
    assert not kilian_verify(p, Commitment(c.c), b, x, s)
    with pytest.raises(ValueError):
        kilian_commit(p, b, x, BitVector(11))


def test_kilian_exhaustive_completeness_toy():
    rng = random.Random(12)
    p = kilian_params(2, 2, 2, rng, TOY)
    for b in itertools.product((0, 1), repeat=2):
        for x in enumerate_seeds(2):
            for s in enumerate_seeds(2):
                assert kilian_verify(p, kilian_commit(p, b, x, s), b, x, s)


# -- preprocessing ------------------------------------------------------------

def test_preproc_online_is_xor_with_mask():
    base = get_scheme("naor-bit", 32)
    rng = random.Random(13)
    recs = preproc_offline(base, 3, rng)
    assert preproc_commit(recs[0], recs[0].mask) == BitVector(1)
    assert preproc_commit(recs[1], 0) == recs[1].mask
    with pytest.raises(RecordReuseError):
        preproc_commit(recs[0], 1)
    assert preproc_offline(base, 0, rng) == []


def test_preproc_records_self_verify_and_are_independent():
    base = get_scheme("naor-2bit", 32)
    recs = preproc_offline(base, 50, random.Random(14))
    for r in recs:
        assert base.verify(r.public.params, r.public.commitment, r.opening)
    assert len({r.opening.x for r in recs}) == 50


@given(st.sampled_from(["naor-bit", "naor-2bit"]), st.integers(0, 3), st.integers(0, 2**32))
def test_preproc_equivalence(base_id, msg, seed):
    base = get_scheme(base_id, 16)
    rng = random.Random(seed)
    (rec,) = preproc_offline(base, 1, rng)
    b = BitVector.from_int(base.arity, msg)
    online = preproc_commit(rec, b)
    ok, recovered = preproc_verify(rec.public, online, rec.opening)
    assert ok and recovered == b
    # Claiming another b means opening the mask as b' xor c: needs inner equivocation.
    other = b ^ BitVector.unit(base.arity, 0)
    inner_ok = base.verify(rec.public.params, rec.public.commitment, Opening(other ^ online, rec.opening.x))
    assert not inner_ok


def test_preproc_garbage_opening():
    base = get_scheme("naor-2bit", 16)
    (rec,) = preproc_offline(base, 1, random.Random(15))
    online = preproc_commit(rec, B("11"))
    assert preproc_verify(rec.public, online, Opening(B("1"), BitVector(16))) == (False, None)
    assert preproc_verify(rec.public, online, Opening(rec.opening.message, BitVector(3))) == (False, None)


def test_preproc_batch():
    base = get_scheme("naor-2bit", 16)
    rng = random.Random(16)
    recs = preproc_offline(base, 10, rng)
    masks = [r.mask for r in recs]
    batch = PreprocBatch(recs)
    msgs = [rbits(rng, 2) for _ in range(10)]
    online = batch.commit(pack_messages(msgs))
    assert len(online) == 20
    for i in range(10):
        assert batch.element(online, i) == unpack_element(online, i, 2) == msgs[i] ^ masks[i]
        ok, rec_b = preproc_verify(recs[i].public, batch.element(online, i), recs[i].opening)
        assert ok and rec_b == msgs[i]
    with pytest.raises(RecordReuseError):
        batch.commit(pack_messages(msgs))
    with pytest.raises(RecordReuseError):
        PreprocBatch(recs)
    with pytest.raises(ValueError):
        PreprocBatch([])


def test_preproc_store_hands_out_each_record_once():
    base = get_scheme("naor-bit", 8)
    store = PreprocStore(preproc_offline(base, 400, random.Random(17)))
    taken = []
    lock = threading.Lock()

    def worker():
        while True:
            try:
                r = store.take()
            except LookupError:
                return
            preproc_commit(r, 1)
            with lock:
                taken.append(id(r))

    threads = [threading.Thread(target=worker) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(taken) == len(set(taken)) == 400
    assert len(store) == 0


# -- registry and exchanges -----------------------------------------------------

def test_get_scheme_ids():
    assert get_scheme("naor-bit", 8).arity == 1
    assert get_scheme("naor-2bit", 8).id == "naor-2bit"
    assert get_scheme("circulant-string", 8, 5).arity == 5
    assert get_scheme("kilian", 8, 5).seed_len == 8
    assert get_scheme("preproc(naor-2bit)", 8).id == "preproc(naor-2bit)"
    assert get_scheme("preproc(kilian)", 8, 4, 6).base.seed_len == 6
    for bad in ("nope", "preproc(nope)"):
        with pytest.raises(ValueError):
            get_scheme(bad, 8)
    with pytest.raises(ValueError):
        get_scheme("circulant-string", 8)


@pytest.mark.parametrize("scheme_id,t", [("naor-bit", None), ("naor-2bit", None), ("circulant-string", 7),
                                         ("kilian", 7), ("preproc(naor-bit)", None), ("preproc(naor-2bit)", None)])
def test_scheme_round_trip(scheme_id, t):
    s = get_scheme(scheme_id, 24, t)
    rng = random.Random(18)
    params = s.challenge(rng)
    assert s.params_from_vectors(s.challenge_vectors(params)) == params
    for _ in range(20):
        m = rbits(rng, s.arity)
        c, o = s.commit(params, m, rng)
        assert s.verify(params, c, o)


@pytest.mark.parametrize("n", [8, 64, 128])
def test_exchange_costs_with_and_without_reuse(n):
    s = get_scheme("naor-2bit", n)
    rng = random.Random(19)
    msgs = [rbits(rng, 2) for _ in range(5)]
    reuse = commit_exchange(s, msgs, True, rng)
    fresh = commit_exchange(s, msgs, False, rng)
    assert reuse.all_accepted and fresh.all_accepted
    assert reuse.payload_bits == (3 * n + 3) + 5 * (3 * n + 3) + 5 * (n + 2)
    assert fresh.payload_bits == 5 * (7 * n + 8)
    assert expected_payload_bits(s, 5, True) == reuse.payload_bits


@pytest.mark.parametrize("scheme_id,n,t,l", [("naor-bit", 32, None, None), ("circulant-string", 32, 9, None),
                                             ("kilian", 32, 9, None), ("kilian", 32, 9, 20)])
def test_exchange_costs_other_schemes(scheme_id, n, t, l):
    s = get_scheme(scheme_id, n, t, l)
    rng = random.Random(20)
    e = commit_exchange(s, [rbits(rng, s.arity)], False, rng)
    assert e.all_accepted
    assert e.payload_bits == expected_payload_bits(s, 1, False)
    z = s.commitment_width()
    if scheme_id == "circulant-string":
        assert e.payload_bits == 2 * z + n + t
    if scheme_id == "kilian":
        assert e.payload_bits == 2 * z + 2 * t + n + s.seed_len


def test_exchange_rejects_tampered_opening():
    s = get_scheme("naor-2bit", 32)
    rng = random.Random(21)

    def tamper(i, o):
        return Opening(o.message ^ B("01"), o.x) if i == 2 else o

    e = commit_exchange(s, [B("00"), B("01"), B("10")], True, rng, tamper=tamper)
    assert e.accepted == [True, True, False]
    with pytest.raises(ValueError):
        commit_exchange(get_scheme("preproc(naor-bit)", 8), [1])
