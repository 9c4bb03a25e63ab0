import random
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from oracles import brute_live_words, golden_live_words
from qexpansions import (
    BaseEnclosure,
    EventuallyPeriodicSeq,
    PrecisionExhausted,
    RationalInterval,
    Verdict,
    golden_ratio_general,
    komornik_loreti,
    tribonacci,
)
from qexpansions.arith import eval_pi
from qexpansions.engine import (
    Ambiguous,
    digit_options,
    enumerate_expansions,
    greedy_expansion,
    lazy_expansion,
    point_is_unique,
    quasi_greedy_expansion,
    separation_constant,
    switch_region,
    uniqueness_certificate,
)
from qexpansions.errors import DomainError


def rat(M, q):
    return BaseEnclosure.rational(M, Fraction(q))


PHI = golden_ratio_general(1)


# worked examples ------------------------------------------------------------------


def test_greedy_examples():
    assert greedy_expansion(1, rat(1, 2), 7).digits == (1,) * 7
    assert greedy_expansion(1, PHI, 5).digits == (1, 1, 0, 0, 0)
    assert greedy_expansion(Fraction(2, 3), rat(1, 2), 8).digits == (1, 0) * 4


def test_quasi_greedy_examples():
    assert quasi_greedy_expansion(1, rat(1, 2), 6).digits == (1,) * 6
    assert quasi_greedy_expansion(1, PHI, 6).digits == (1, 0, 1, 0, 1, 0)
    assert quasi_greedy_expansion(1, tribonacci(), 6).digits == (1, 1, 0, 1, 1, 0)
    with pytest.raises(DomainError):
        quasi_greedy_expansion(0, rat(1, 2), 4)


def test_lazy_examples():
    assert lazy_expansion(Fraction(1, 2), rat(1, 2), 5).digits == (0, 1, 1, 1, 1)
    assert lazy_expansion(0, rat(1, Fraction(7, 4)), 5).digits == (0,) * 5


def test_outside_Iq_rejected():
    with pytest.raises(DomainError):
        greedy_expansion(2, rat(1, 2), 3)


def test_switch_region_examples():
    (blk,) = switch_region(rat(1, 2)).blocks
    assert blk.interval == RationalInterval.point(Fraction(1, 2))
    (blk,) = switch_region(PHI).blocks
    phi = PHI.q
    assert blk.interval.lo <= phi.hi - 1 and blk.interval.hi >= 1
    assert blk.interval.contains(RationalInterval(phi.hi - 1, 1))
    b1, b2 = switch_region(rat(2, Fraction(5, 2))).blocks
    assert b1.interval == RationalInterval(Fraction(2, 5), Fraction(8, 15))
    assert b2.interval == RationalInterval(Fraction(4, 5), Fraction(14, 15))


def test_digit_options_examples():
    assert digit_options(0, rat(1, Fraction(3, 2))) == {0}
    assert digit_options(Fraction(4, 5), PHI) == {0, 1}
    assert digit_options(Fraction(7, 10), rat(2, Fraction(5, 2))) == {1}


def test_digit_options_ambiguous_on_interval_base():
    base = BaseEnclosure(1, RationalInterval(Fraction(3, 2), Fraction(8, 5)))
    # 1/q ranges over [5/8, 2/3]; x = 13/20 straddles the block edge
    assert digit_options(Fraction(13, 20), base) is Ambiguous


def test_enumerate_examples():
    tree = enumerate_expansions(0, rat(1, Fraction(9, 5)), 9)
    assert tree.live_words() == [(0,) * 9]
    tree = enumerate_expansions(Fraction(1, 2), rat(1, 2), 6)
    assert tree.live_words() == [(0, 1, 1, 1, 1, 1), (1, 0, 0, 0, 0, 0)]


def test_enumerate_at_golden_ratio_matches_exact_brute_force():
    tree = enumerate_expansions(1, PHI, 12)
    assert sorted(tree.live_words()) == sorted(golden_live_words(1, 12))
    assert tree.count_upper == tree.count_lower


def test_enumerate_raises_or_keeps_ambiguous_nodes():
    base = BaseEnclosure(1, RationalInterval(Fraction(3, 2), Fraction(8, 5)))
    with pytest.raises(PrecisionExhausted):
        enumerate_expansions(Fraction(13, 20), base, 4)
    tree = enumerate_expansions(Fraction(13, 20), base, 4, on_ambiguous="keep")
    assert tree.count_upper > tree.count_lower


def test_uniqueness_examples():
    assert uniqueness_certificate(EventuallyPeriodicSeq((), (0,), 1), rat(1, Fraction(3, 2))).kind is Verdict.UNIQUE
    v = uniqueness_certificate(EventuallyPeriodicSeq((), (1, 0), 1), PHI)
    assert v.kind is Verdict.NOT_UNIQUE
    v = uniqueness_certificate(EventuallyPeriodicSeq((1, 1), (0,), 1), rat(1, Fraction(39, 20)))
    assert v.kind is Verdict.NOT_UNIQUE


# properties ---------------------------------------------------------------------------


@st.composite
def rational_case(draw, M=1):
    q = draw(st.fractions(min_value=Fraction(11, 10), max_value=M + 1, max_denominator=12))
    assume(q > 1)
    top = M / (q - 1)
    x = draw(st.fractions(min_value=0, max_value=top, max_denominator=12))
    return x, q


@given(rational_case())
def test_greedy_is_lex_max_live_path(case):
    x, q = case
    base = rat(1, q)
    live = enumerate_expansions(x, base, 10).live_words()
    assert sorted(live) == sorted(brute_live_words(x, q, 1, 10))
    assert greedy_expansion(x, base, 10).digits == max(live)
    assert lazy_expansion(x, base, 10).digits == min(live)


@given(rational_case(M=2))
def test_lazy_is_reflected_greedy_of_reflected_point(case):
    x, q = case
    base = rat(2, q)
    lazy = lazy_expansion(x, base, 12).digits
    greedy = greedy_expansion(2 / (q - 1) - x, base, 12).digits
    assert lazy == tuple(2 - d for d in greedy)


@given(rational_case(), st.fractions(min_value=0, max_value=1, max_denominator=12))
def test_greedy_order_compatible(case, t):
    x, q = case
    y = x + t * (1 / (q - 1) - x)
    assume(y > x)
    base = rat(1, q)
    assert greedy_expansion(x, base, 14).digits <= greedy_expansion(y, base, 14).digits


@given(rational_case())
def test_quasi_greedy_below_greedy(case):
    x, q = case
    assume(x > 0)
    base = rat(1, q)
    n = 16
    g = greedy_expansion(x, base, n).digits
    a = quasi_greedy_expansion(x, base, n).digits
    assert a <= g
    # greedy is finite within the window iff some prefix sums exactly to x
    partial = Fraction(0)
    finite = False
    for i, d in enumerate(g, start=1):
        partial += d / q**i
        if partial == x:
            finite = True
            break
    assert (a == g) is (not finite)


def test_switch_blocks_disjoint_above_golden_ratio():
    rng = random.Random(3)
    for M in (1, 2, 3, 4):
        qgr = golden_ratio_general(M).q.hi
        for _ in range(25):
            q = qgr + (M + 1 - qgr) * Fraction(rng.randint(1, 999), 1000)
            blocks = switch_region(rat(M, q)).blocks
            for b, c in zip(blocks, blocks[1:]):
                assert b.interval.hi < c.interval.lo


@pytest.mark.parametrize("M", [2, 3, 4, 5])
def test_inflated_blocks_stay_disjoint(M):
    kl = komornik_loreti(M).q
    kl_iv = RationalInterval(kl.lo, kl.hi)
    delta = ((2 * kl_iv - 2 - M) / (3 * (kl_iv * kl_iv - kl_iv))).hi
    assert delta > 0
    rng = random.Random(M)
    for _ in range(40):
        q = kl.hi + (M + 1 - kl.hi) * Fraction(rng.randint(1, 1000), 1000)
        region = switch_region(rat(M, q))
        assert region.pairwise_disjoint(delta)
        for b, c in zip(region.blocks, region.blocks[1:]):
            assert b.interval.hi + delta < c.interval.lo - delta


def _unique_sequences(base, rng, count):
    out = {}
    M = base.M
    while len(out) < count:
        pre = tuple(rng.randint(0, M) for _ in range(rng.randint(0, 3)))
        per = tuple(rng.randint(0, M) for _ in range(rng.randint(1, 5)))
        s = EventuallyPeriodicSeq(pre, per, M)
        if uniqueness_certificate(s, base).kind is Verdict.UNIQUE:
            out[s.key()] = s
    return list(out.values())


@pytest.mark.parametrize("M,q", [(1, Fraction(19, 10)), (1, Fraction(37, 20)), (2, Fraction(27, 10))])
def test_separation_of_unique_points(M, q):
    base = rat(M, q)
    C = separation_constant(base).lo
    assert C > 0
    seqs = _unique_sequences(base, random.Random(5), 60)
    values = [eval_pi(base, s).lo for s in seqs]
    checked = 0
    for i in range(len(seqs)):
        for j in range(i + 1, len(seqs)):
            gap = abs(values[i] - values[j])
            assert gap > 0
            n = 0
            while gap <= C * q ** (-(n + 1)):
                n += 1
            assert seqs[i].prefix(n) == seqs[j].prefix(n)
            checked += 1
    assert checked > 1700


def test_unique_verdict_matches_orbit_test():
    rng = random.Random(9)
    for q in (Fraction(9, 5), Fraction(19, 10), Fraction(2)):
        base = rat(1, q)
        for _ in range(60):
            pre = tuple(rng.randint(0, 1) for _ in range(rng.randint(0, 3)))
            per = tuple(rng.randint(0, 1) for _ in range(rng.randint(1, 5)))
            s = EventuallyPeriodicSeq(pre, per, 1)
            v = uniqueness_certificate(s, base)
            assert v.kind is not Verdict.UNKNOWN
            assert point_is_unique(s, base) is (v.kind is Verdict.UNIQUE)
