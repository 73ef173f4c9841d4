import itertools
import random
from fractions import Fraction

import pytest

from naorcommit import oracle
from naorcommit.commitments import NaorParams, StringParams, TwoBitParams, naor_commit, naor_verify
from naorcommit.commitments import string_commit, string_verify, twobit_commit
from naorcommit.expansion import TOY, enumerate_seeds
from naorcommit.gf2 import BitVector, circulant_is_full_rank, circulant_rows, rank_f2


def frac(pair):
    return Fraction(*pair)


@pytest.mark.parametrize("n", ["1", "2", "3"])
def test_naor_fraction_pinned(n, oracle_fixtures):
    r = oracle.binding_fraction_naor(int(n))
    assert (r.equivocable, r.total) == tuple(oracle_fixtures["naor_bit"][n])
    assert r.passed or int(n) == 1


def test_naor_counts_zero_challenge():
    # r = 0 always admits x' = x, so the smallest n already reaches 2/8.
    r = oracle.binding_fraction_naor(1)
    assert r.fraction == Fraction(1, 4)
    assert r.bound == Fraction(1, 2)


def test_naor_witnesses_verify_with_commitment_code():
    # Independent route: every equivocable r really has a double opening under naor_verify.
    n = 2
    seeds = list(enumerate_seeds(n))
    hits = 0
    for bits in itertools.product((0, 1), repeat=3 * n):
        p = NaorParams(n, BitVector.from_bits(bits), TOY)
        if any(naor_verify(p, naor_commit(p, 0, x), 1, y) for x in seeds for y in seeds):
            hits += 1
    assert hits == oracle.binding_fraction_naor(n).equivocable


@pytest.mark.parametrize("n", ["1", "2"])
def test_twobit_fraction_pinned(n, oracle_fixtures):
    r = oracle.binding_fraction_twobit(int(n))
    fx = oracle_fixtures["naor_2bit"][n]
    assert (r.equivocable, r.total) == tuple(fx["total"])
    for case, pair in fx["cases"].items():
        assert r.per_case[case] == frac(pair)
    assert r.notes["r1 xor r2 odd-weight count"] == 0


def test_twobit_bounds():
    r = oracle.binding_fraction_twobit(2)
    assert r.fraction <= Fraction(1, 4)
    assert r.per_case["(1,0)"] <= r.notes["single-term case bound"]
    assert r.per_case["(0,1)"] <= r.notes["single-term case bound"]
    assert r.per_case["(1,1)"] <= r.notes["(1,1) case bound"]


def test_twobit_witnesses_verify_with_commitment_code():
    n = 2
    seeds = list(enumerate_seeds(n))
    msgs = [BitVector.from_bits(b) for b in itertools.product((0, 1), repeat=2)]
    hits = 0
    for bits in itertools.product((0, 1), repeat=3 * n + 3):
        r1 = BitVector.from_bits(bits)
        if not r1.any() or r1 == BitVector.ones(3 * n + 3):
            continue
        p = TwoBitParams(n, r1, TOY)
        commits = {(m, x): twobit_commit(p, m, x).c for m in msgs for x in seeds}
        by_c = {}
        for (m, _), c in commits.items():
            by_c.setdefault(c, set()).add(m)
        hits += any(len(ms) > 1 for ms in by_c.values())
    assert hits == oracle.binding_fraction_twobit(n).equivocable


@pytest.mark.parametrize("key", ["1,1", "1,2", "1,3", "2,1"])
def test_string_exhaustive_and_preimage_agree(key, oracle_fixtures):
    n, t = map(int, key.split(","))
    a = oracle.binding_fraction_string(n, t, method="exhaustive")
    b = oracle.binding_fraction_string(n, t, method="preimage")
    assert (a.equivocable, a.total) == (b.equivocable, b.total) == tuple(oracle_fixtures["circulant_string"][key])
    assert a.passed


def test_string_n2_t2_pinned(oracle_fixtures):
    r = oracle.binding_fraction_string(2, 2)
    assert r.method == "preimage"
    assert r.params["z"] == 32
    assert (r.equivocable, r.total) == tuple(oracle_fixtures["circulant_string"]["2,2"])
    assert r.fraction <= Fraction(1, 4)


def test_string_witnesses_open_two_ways():
    for n, t in ((1, 2), (2, 2)):
        found = oracle.string_equivocation_witnesses(n, t)
        assert found
        for r1_bits, (beta, x, y) in found.items():
            r1 = BitVector.from_bits(r1_bits)
            p = StringParams(n, t, len(r1), r1, TOY)
            c = string_commit(p, BitVector(t), x)
            assert string_verify(p, c, BitVector(t), x)
            assert string_verify(p, c, BitVector.from_bits(beta), y)


def test_budget_guard():
    with pytest.raises(ValueError):
        oracle.binding_fraction_naor(9)
    with pytest.raises(ValueError):
        oracle.binding_fraction_string(2, 2, method="exhaustive")
    with pytest.raises(ValueError):
        oracle.binding_fraction_string(1, 1, method="bogus")


@pytest.mark.parametrize("n", [1, 2, 4, 8])
def test_theorem1_exhaustive(n):
    r = oracle.verify_theorem1(n)
    assert r.passed and r.checked == 2**n
    assert r.details["full_rank"] == 2 ** (n - 1)


def test_theorem1_sampled():
    r = oracle.verify_theorem1(16, samples=10_000, seed=3)
    assert r.passed and r.checked == 10_000
    with pytest.raises(ValueError):
        oracle.verify_theorem1(6)


def test_theorem1_agrees_with_fast_path():
    rng = random.Random(4)
    for n in (8, 16, 32):
        for _ in range(30):
            v = tuple(rng.getrandbits(1) for _ in range(n))
            conds = oracle._theorem1_conditions(v)
            bv = BitVector.from_bits(v)
            assert conds[0] == (rank_f2(circulant_rows(bv)) == n)
            assert conds[1] == circulant_is_full_rank(bv)


def test_theorem1_trivial_vectors():
    assert oracle._theorem1_conditions((0,) * 8) == (False, False, False)
    assert oracle._theorem1_conditions((0, 0, 1, 0, 0, 0, 0, 0)) == (True, True, True)


@pytest.mark.parametrize("z", ["8", "16"])
def test_theorem2(z, oracle_fixtures):
    r = oracle.verify_theorem2(int(z))
    assert r.passed
    assert r.details["min_rank"] >= int(z) // 2
    assert {str(k): v for k, v in r.details["min_rank_by_t"].items()} == oracle_fixtures["theorem2_min_rank"][z]
    assert r.checked == sum(2**t - 1 for t in range(1, int(z) // 2))


def test_theorem2_unit_vector_is_permutation():
    for z in (8, 16):
        for k in range(z):
            b = tuple(1 if i == k else 0 for i in range(z))
            assert oracle._naive_rank(oracle.theorem2_matrix(b, z)) == z


def test_theorem2_matrix_matches_fast_rank():
    rng = random.Random(5)
    for _ in range(40):
        head = [rng.getrandbits(1) for _ in range(5)]
        b = tuple(head) + (0,) * 11
        m = oracle.theorem2_matrix(b, 16)
        rows = [BitVector.from_bits(r) for r in m]
        assert rank_f2(rows) == oracle._naive_rank(m)


def test_report_formatting():
    r = oracle.binding_fraction_twobit(2)
    text = r.format()
    assert "3/85" in text and "PASS" in text and "case (1,1)" in text
    assert "z=16" in oracle.verify_theorem2(16).format()
