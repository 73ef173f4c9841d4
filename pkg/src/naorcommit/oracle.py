"""Brute-force checks of the binding bounds and circulant rank theorems.

Everything here is written with plain loops over bit lists or small ints and
does not call the commitment code or the fast GF(2) routines, so agreement
with those modules is a genuine cross-check.  The only shared component is
the expansion function ``G`` itself, which is the object being analysed.

Fractions are exact :class:`fractions.Fraction` values.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .expansion import TOY, ExpansionFunction, enumerate_seeds

__all__ = [
    "BindingReport",
    "TheoremReport",
    "binding_fraction_naor",
    "binding_fraction_twobit",
    "binding_fraction_string",
    "string_equivocation_witnesses",
    "verify_theorem1",
    "verify_theorem2",
    "MAX_CASES",
]

MAX_CASES = 1 << 24


@dataclass
class BindingReport:
    scheme: str
    params: dict
    equivocable: int
    total: int
    bound: Fraction
    method: str = "exhaustive"
    per_case: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.equivocable, self.total)

    @property
    def passed(self) -> bool:
        return self.fraction <= self.bound

    def format(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        params = ", ".join(f"{k}={v}" for k, v in self.params.items())
        lines = [
            f"{self.scheme} ({params}) [{self.method}]: equivocable {self.equivocable}/{self.total}"
            f" = {self.fraction} ~ {float(self.fraction):.3e}  bound {self.bound}  {status}"
        ]
        for case, frac in self.per_case.items():
            lines.append(f"  case {case}: {frac} ~ {float(frac):.3e}")
        for k, v in self.notes.items():
            lines.append(f"  {k}: {v}")
        return "\n".join(lines)


@dataclass
class TheoremReport:
    theorem: str
    size: int
    checked: int
    counterexamples: list
    method: str
    details: dict = field(default_factory=dict)
    size_name: str = "n"

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def format(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = "".join(f", {k}={v}" for k, v in self.details.items())
        return (f"{self.theorem} {self.size_name}={self.size} [{self.method}]: {self.checked} checked,"
                f" {len(self.counterexamples)} counterexamples{extra}  {status}")


# -- naive bit-list helpers -------------------------------------------------

def _bits(v) -> tuple[int, ...]:
    return tuple(int(b) for b in v)


def _xor(a, b) -> tuple[int, ...]:
    return tuple(x ^ y for x, y in zip(a, b))


def _rot_right(a, k: int = 1) -> tuple[int, ...]:
    n = len(a)
    return tuple(a[(j - k) % n] for j in range(n))


def _all_vectors(length: int):
    return itertools.product((0, 1), repeat=length)


def _image_xor_set(n: int, out_len: int, prg: ExpansionFunction) -> set[tuple[int, ...]]:
    """``{G(x) xor G(x') : x, x'}`` including the zero vector from ``x = x'``."""
    images = [_bits(prg(x, out_len)) for x in enumerate_seeds(n)]
    out = set()
    for a in images:
        for b in images:
            out.add(_xor(a, b))
    return out


def _check_budget(cases: int) -> None:
    if cases > MAX_CASES:
        raise ValueError(f"{cases} cases exceeds the enumeration budget of {MAX_CASES}")


# -- binding fractions ------------------------------------------------------

def binding_fraction_naor(n: int, prg: ExpansionFunction = TOY) -> BindingReport:
    """Fraction of challenges ``r`` for which some commitment opens to both bits.

    A double opening ``(0, x), (1, x')`` of one ``c`` exists iff
    ``G(x) = G(x') xor r``.  The all-zero challenge is always equivocable
    (take ``x' = x``), and it is counted.
    """
    width = 3 * n
    _check_budget((1 << width) * (1 << 2 * n))
    images = [_bits(prg(x, width)) for x in enumerate_seeds(n)]
    equivocable = 0
    total = 0
    for r in _all_vectors(width):
        total += 1
        if any(_xor(gx, gy) == r for gx in images for gy in images):
            equivocable += 1
    return BindingReport("naor-bit", {"n": n}, equivocable, total, Fraction(1, 2**n))


def binding_fraction_twobit(n: int = 2, prg: ExpansionFunction = TOY) -> BindingReport:
    """Exhaustive equivocation fraction of the two-bit scheme, split by ``b xor b'``."""
    width = 3 * n + 3
    _check_budget(1 << width)
    xorset = _image_xor_set(n, width, prg)
    zero, one = (0,) * width, (1,) * width
    counts = {"(1,0)": 0, "(0,1)": 0, "(1,1)": 0}
    equivocable = 0
    total = 0
    odd_sums = 0
    for r1 in _all_vectors(width):
        if r1 in (zero, one):
            continue
        total += 1
        r2 = _rot_right(r1)
        both = _xor(r1, r2)
        if sum(both) % 2:
            odd_sums += 1
        hits = {"(1,0)": r1 in xorset, "(0,1)": r2 in xorset, "(1,1)": both in xorset}
        for case, hit in hits.items():
            counts[case] += hit
        equivocable += any(hits.values())
    pairs = 2 ** (2 * n)
    report = BindingReport(
        "naor-2bit", {"n": n}, equivocable, total, Fraction(1, 2**n),
        per_case={k: Fraction(v, total) for k, v in counts.items()},
        notes={
            "single-term case bound": Fraction(pairs, 2**width - 2),
            "(1,1) case bound": Fraction(pairs, 2 ** (width - 1) - 1),
            "r1 xor r2 odd-weight count": odd_sums,
        },
    )
    return report


def _string_width(n: int, t: int) -> int:
    z = 1
    while z <= 6 * n + 2 * t:
        z *= 2
    return z


def _combination(r1, beta) -> tuple[int, ...]:
    acc = (0,) * len(r1)
    v = r1
    for b in beta:
        if b:
            acc = _xor(acc, v)
        v = _rot_right(v)
    return acc


def _nonzero_coefficients(t: int):
    return [beta for beta in _all_vectors(t) if any(beta)]


def _string_bruteforce(n: int, t: int, prg: ExpansionFunction):
    z = _string_width(n, t)
    _check_budget((1 << (z - 1)) * ((1 << t) - 1))
    xorset = _image_xor_set(n, z, prg)
    betas = _nonzero_coefficients(t)
    hits = set()
    for r1 in _all_vectors(z):
        if sum(r1) % 2 == 0:
            continue
        if any(_combination(r1, beta) in xorset for beta in betas):
            hits.add(r1)
    return hits, 1 << (z - 1)


def _solve_all(columns: list[int], rhs: int, nrows: int) -> list[int]:
    """All ``u`` with ``sum_j u_j * columns[j] == rhs`` over GF(2).

    Columns and ``rhs`` are ints with bit ``i`` = row ``i``; solutions are
    ints with bit ``j`` = unknown ``j``.  Plain row reduction on an augmented
    matrix, free variables enumerated explicitly.
    """
    ncols = len(columns)
    rows = []
    for i in range(nrows):
        row = 0
        for j, col in enumerate(columns):
            if (col >> i) & 1:
                row |= 1 << j
        rows.append([row, (rhs >> i) & 1])
    pivots = []
    r = 0
    for j in range(ncols):
        p = next((k for k in range(r, nrows) if (rows[k][0] >> j) & 1), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        for k in range(nrows):
            if k != r and (rows[k][0] >> j) & 1:
                rows[k][0] ^= rows[r][0]
                rows[k][1] ^= rows[r][1]
        pivots.append(j)
        r += 1
    if any(row[0] == 0 and row[1] for row in rows[r:]):
        return []
    free = [j for j in range(ncols) if j not in pivots]
    out = []
    for assignment in itertools.product((0, 1), repeat=len(free)):
        u = 0
        for j, a in zip(free, assignment):
            if a:
                u |= 1 << j
        for k, pj in enumerate(pivots):
            val = rows[k][1]
            for j in free:
                if (u >> j) & 1 and (rows[k][0] >> j) & 1:
                    val ^= 1
            if val:
                u |= 1 << pj
        out.append(u)
    return out


def _string_preimages(n: int, t: int, prg: ExpansionFunction, witnesses: bool = False):
    """Equivocable challenges found by solving ``sum beta_i rot^i(r1) = d`` for ``r1``."""
    z = _string_width(n, t)
    images = [(x, _bits(prg(x, z))) for x in enumerate_seeds(n)]
    targets = {}
    for x, gx in images:
        for y, gy in images:
            targets.setdefault(_xor(gx, gy), (x, y))
    _check_budget(len(targets) * ((1 << t) - 1) * (1 << t))
    found: dict[tuple, tuple] = {}
    for beta in _nonzero_coefficients(t):
        # Column j of the map is the combination applied to the unit vector e_j.
        columns = []
        for j in range(z):
            e = tuple(1 if i == j else 0 for i in range(z))
            col = _combination(e, beta)
            columns.append(sum(b << i for i, b in enumerate(col)))
        for d, (x, y) in targets.items():
            rhs = sum(b << i for i, b in enumerate(d))
            for u in _solve_all(columns, rhs, z):
                r1 = tuple((u >> i) & 1 for i in range(z))
                if sum(r1) % 2 == 1 and r1 not in found:
                    found[r1] = (beta, x, y)
    return (found if witnesses else set(found)), 1 << (z - 1)


def binding_fraction_string(n: int = 2, t: int = 2, prg: ExpansionFunction = TOY,
                            method: str = "auto") -> BindingReport:
    """Exact fraction of odd-weight challenges admitting a double opening.

    ``method="exhaustive"`` walks every odd-weight ``r1`` (feasible while
    ``z <= 16``).  ``method="preimage"`` inverts the problem: for each
    nonzero message difference and each value of ``G(x) xor G(x')`` it
    solves the circulant linear system for every ``r1`` that hits it.  Both
    give the same exact set; ``"auto"`` picks exhaustive when it fits the
    enumeration budget.
    """
    z = _string_width(n, t)
    if method == "auto":
        method = "exhaustive" if (1 << (z - 1)) * ((1 << t) - 1) <= MAX_CASES else "preimage"
    if method == "exhaustive":
        hits, total = _string_bruteforce(n, t, prg)
    elif method == "preimage":
        hits, total = _string_preimages(n, t, prg)
    else:
        raise ValueError(f"unknown method {method!r}")
    pairs = 2 ** (2 * n)
    return BindingReport(
        "circulant-string", {"n": n, "t": t, "z": z}, len(hits), total, Fraction(1, 2**n), method,
        notes={"per-target bound": Fraction(pairs, 2 ** (3 * n + t))},
    )


def string_equivocation_witnesses(n: int, t: int, prg: ExpansionFunction = TOY) -> dict:
    """Map equivocable ``r1`` (bit tuple) to ``(beta, x, x')`` with ``G(x) xor G(x') = sum beta_i r_i``."""
    found, _ = _string_preimages(n, t, prg, witnesses=True)
    return found


# -- rank theorems ----------------------------------------------------------

def _naive_rank(rows: list[list[int]]) -> int:
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for j in range(ncols):
        p = next((k for k in range(rank, len(m)) if m[k][j]), None)
        if p is None:
            continue
        m[rank], m[p] = m[p], m[rank]
        for k in range(len(m)):
            if k != rank and m[k][j]:
                m[k] = [a ^ b for a, b in zip(m[k], m[rank])]
        rank += 1
    return rank


def _int_rank(rows: list[int], ncols: int) -> int:
    # Same elimination as _naive_rank with rows packed into ints, column by column.
    m = list(rows)
    rank = 0
    for j in range(ncols):
        bit = 1 << j
        p = next((k for k in range(rank, len(m)) if m[k] & bit), None)
        if p is None:
            continue
        m[rank], m[p] = m[p], m[rank]
        for k in range(len(m)):
            if k != rank and m[k] & bit:
                m[k] ^= m[rank]
        rank += 1
    return rank


def _circulant(v) -> list[tuple[int, ...]]:
    return [_rot_right(v, i) for i in range(len(v))]


def _poly_deg(p: list[int]) -> int:
    for i in range(len(p) - 1, -1, -1):
        if p[i]:
            return i
    return -1


def _poly_mod(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    db = _poly_deg(b)
    while True:
        da = _poly_deg(a)
        if da < db:
            return a
        shift = da - db
        for i in range(db + 1):
            if b[i]:
                a[i + shift] ^= 1


def _poly_gcd_degree(f: list[int], g: list[int]) -> int:
    a, b = f, g
    while _poly_deg(b) >= 0:
        a, b = b, _poly_mod(a, b)
    return _poly_deg(a)


def _theorem1_conditions(v: tuple[int, ...]) -> tuple[bool, bool, bool]:
    n = len(v)
    rows = [sum(b << i for i, b in enumerate(r)) for r in _circulant(v)]
    full_rank = _int_rank(rows, n) == n
    xn1 = [1] + [0] * (n - 1) + [1]
    gcd_const = _poly_gcd_degree(list(v) + [0], xn1) == 0
    odd = sum(v) % 2 == 1
    return full_rank, gcd_const, odd


def verify_theorem1(n: int, samples: int | None = None, seed: int = 0) -> TheoremReport:
    """Check rank = n <=> deg gcd(f, x^n - 1) = 0 <=> odd weight for circulants of order n.

    Exhaustive when ``samples`` is None, otherwise ``samples`` uniform vectors
    drawn with a seeded generator.
    """
    if n < 1 or n & (n - 1):
        raise ValueError("order must be a power of two")
    if samples is None:
        _check_budget(1 << n)
        vectors = _all_vectors(n)
        method = "exhaustive"
    else:
        rng = random.Random(seed)
        vectors = (tuple(rng.getrandbits(1) for _ in range(n)) for _ in range(samples))
        method = f"sampled({samples})"
    checked = 0
    full = 0
    bad = []
    for v in vectors:
        checked += 1
        conds = _theorem1_conditions(v)
        full += conds[0]
        if len(set(conds)) != 1:
            bad.append((v, conds))
    return TheoremReport("theorem1", n, checked, bad, method, {"full_rank": full})


def theorem2_matrix(b: tuple[int, ...], z: int) -> list[list[int]]:
    """Coefficient matrix of ``s_j = sum_k b_k x_{(j+k-1) mod z}`` (0-indexed rows/cols)."""
    m = [[0] * z for _ in range(z)]
    for j in range(z):
        for k, bk in enumerate(b):
            if bk:
                m[j][(j + k) % z] ^= 1
    return m


def verify_theorem2(z: int) -> TheoremReport:
    """Rank >= z/2 for every nonzero coefficient vector supported on the first t < z/2 slots."""
    if z < 2 or z & (z - 1):
        raise ValueError("z must be a power of two")
    checked = 0
    bad = []
    min_rank = {}
    for t in range(1, (z + 1) // 2):
        if 2 * t >= z:
            break
        lo = z
        for head in _nonzero_coefficients(t):
            b = tuple(head) + (0,) * (z - t)
            rank = _naive_rank(theorem2_matrix(b, z))
            checked += 1
            lo = min(lo, rank)
            if rank < z // 2:
                bad.append((head, rank))
        min_rank[t] = lo
    return TheoremReport("theorem2", z, checked, bad, "exhaustive",
                         {"min_rank": min(min_rank.values()), "min_rank_by_t": min_rank}, "z")
