import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qexpansions.arith import (
    BaseEnclosure,
    RefinementBudget,
    Sign,
    certified_sign,
    eval_pi,
    pi_polys,
)
from qexpansions.errors import DomainError
from qexpansions.interval import RationalInterval, poly_eval
from qexpansions.sequences import DiffSeries, DigitWord, EventuallyPeriodicSeq

TRIB = (-1, -1, -1, 1)


def partial_sum(seq, q, n):
    return sum(Fraction(seq.digit(i)) / q**i for i in range(1, n + 1))


# BaseEnclosure -----------------------------------------------------------------


def test_base_range_enforced():
    with pytest.raises(DomainError):
        BaseEnclosure.rational(1, 3)
    with pytest.raises(DomainError):
        BaseEnclosure.rational(2, 1)
    BaseEnclosure.rational(2, 3)


def test_algebraic_base_requires_sign_change():
    with pytest.raises(DomainError):
        BaseEnclosure(1, RationalInterval(Fraction(3, 2), Fraction(17, 10)), TRIB)


def test_refinement_keeps_root():
    b = BaseEnclosure.algebraic(1, TRIB, Fraction(9, 5), 2, width=Fraction(1, 100))
    r = b.refined(Fraction(1, 10**30))
    assert r.q.width <= Fraction(1, 10**30)
    assert b.q.contains(r.q)
    assert r.poly == b.poly


def test_algebraic_with_rational_root_collapses_to_point():
    b = BaseEnclosure.algebraic(1, (-3, 2), 1, 2)
    assert b.is_point and b.value == Fraction(3, 2)


def test_I_upper():
    assert BaseEnclosure.rational(2, Fraction(5, 2)).I_upper == RationalInterval.point(Fraction(4, 3))


# closed forms -------------------------------------------------------------------


@st.composite
def periodic(draw, M=2):
    pre = draw(st.lists(st.integers(0, M), max_size=3))
    per = draw(st.lists(st.integers(0, M), min_size=1, max_size=3))
    return EventuallyPeriodicSeq(tuple(pre), tuple(per), M)


rational_q = st.fractions(min_value=Fraction(11, 10), max_value=3, max_denominator=40)


@given(periodic(), rational_q)
def test_closed_form_matches_truncated_sum(s, q):
    num, den = pi_polys(s.pre, s.period)
    value = poly_eval(num, q) / poly_eval(den, q)
    n = 120
    head = partial_sum(s, q, n)
    assert head <= value <= head + s.M * q ** (-n) / (q - 1)
    enc = eval_pi(BaseEnclosure.rational(2, q), s)
    assert enc.is_point and enc.lo == value


@given(st.lists(st.integers(0, 2), min_size=3, max_size=12), rational_q, st.integers(1, 10))
def test_word_enclosures_shrink_with_depth(digits, q, d):
    base = BaseEnclosure.rational(2, q)
    w = DigitWord(tuple(digits), 2)
    coarse, fine = eval_pi(base, w, d), eval_pi(base, w, d + 1)
    assert coarse.contains(fine)


def test_eval_pi_over_interval_base_encloses_both_ends():
    s = EventuallyPeriodicSeq((), (1, 0), 1)
    base = BaseEnclosure(1, RationalInterval(Fraction(8, 5), Fraction(13, 8)))
    enc = eval_pi(base, s)
    for q in (Fraction(8, 5), Fraction(13, 8)):
        assert eval_pi(BaseEnclosure.rational(1, q), s).lo in enc


def test_eval_pi_alphabet_mismatch():
    with pytest.raises(DomainError):
        eval_pi(BaseEnclosure.rational(2, 2), EventuallyPeriodicSeq((), (1,), 1))


# certified sign -------------------------------------------------------------------


def test_sign_examples():
    d = DiffSeries.parse("(-1,-1,-1)(0)", 1)
    r = certified_sign(d, Fraction(1, 2))
    assert r.kind is Sign.POSITIVE and r.enclosure == RationalInterval.point(Fraction(1, 8))
    r = certified_sign(d, Fraction(3, 5))
    assert r.kind is Sign.NEGATIVE and r.enclosure == RationalInterval.point(Fraction(-22, 125))
    ones = DiffSeries.parse("(-1)", 1)
    r = certified_sign(ones, RationalInterval(Fraction(49, 100), Fraction(51, 100)), depth=64)
    assert r.kind is Sign.CONTAINS_ZERO and not r.certified


def test_sign_domain():
    d = DiffSeries.parse("(-1)", 1)
    with pytest.raises(DomainError):
        certified_sign(d, RationalInterval(0, Fraction(1, 2)))
    with pytest.raises(DomainError):
        certified_sign(d, Fraction(1))


def _reference(diff, x, n=300):
    """Truncated sum with an explicit tail bound; sign or None."""
    head = 1 + sum(diff.digit(i) * x**i for i in range(1, n + 1))
    tail = diff.M * x ** (n + 1) / (1 - x)
    if head - tail > 0:
        return 1
    if head + tail < 0:
        return -1
    return None


def test_certified_sign_agrees_with_reference_on_random_series():
    rng = random.Random(11)
    disagreements = 0
    for _ in range(1000):
        M = rng.choice((1, 2, 3))
        pre = tuple(rng.randint(-M, M) for _ in range(rng.randint(0, 4)))
        per = tuple(rng.randint(-M, M) for _ in range(rng.randint(1, 4)))
        d = DiffSeries(pre, per, M)
        a = Fraction(rng.randint(5, 90), 100)
        w = Fraction(rng.randint(0, 5), 1000)
        x = RationalInterval(a, min(a + w, Fraction(95, 100)))
        r = certified_sign(d, x)
        if r.kind is Sign.CONTAINS_ZERO:
            continue
        want = 1 if r.kind is Sign.POSITIVE else -1
        for pt in (x.lo, x.mid, x.hi):
            ref = _reference(d, pt)
            if ref is not None and ref != want:
                disagreements += 1
    assert disagreements == 0


@given(st.lists(st.integers(-2, 2), max_size=3), st.lists(st.integers(-2, 2), min_size=1, max_size=3),
       st.fractions(min_value=Fraction(1, 10), max_value=Fraction(9, 10), max_denominator=30))
def test_sign_on_subinterval_never_contradicts(pre, per, x):
    d = DiffSeries(tuple(pre), tuple(per), 2)
    outer = RationalInterval(x - Fraction(1, 20), min(x + Fraction(1, 20), Fraction(19, 20)))
    inner = RationalInterval(x, x)
    a, b = certified_sign(d, outer), certified_sign(d, inner)
    if a.certified:
        assert b.kind is a.kind
    assert outer.contains(inner) and a.enclosure.contains(b.enclosure)


def test_budget_json():
    assert RefinementBudget(10, 20).to_json() == {"max_depth": 10, "max_splits": 20}
