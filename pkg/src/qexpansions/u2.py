"""Points with exactly two expansions: certificates, pair search, reduction."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from .arith import DEFAULT_BUDGET, BaseEnclosure, RefinementBudget
from .constants import komornik_loreti
from .engine import (
    Ambiguous,
    UniquenessVerdict,
    Verdict,
    _options,
    digit_options,
    enumerate_expansions,
    make_point,
    point_is_unique,
    separation_constant,
    uniqueness_certificate,
)
from .errors import DomainError, PrecisionExhausted
from .fields import field_for, seq_point
from .interval import RationalInterval, poly_sign
from .sequences import DiffSeries, DigitWord, EventuallyPeriodicSeq, reflect
from .transversality import RootKind, RootResult, transversality_root, value_poly


@dataclass(frozen=True)
class U2Certificate:
    w: DigitWord
    m: int
    a: EventuallyPeriodicSeq
    b: EventuallyPeriodicSeq
    q: BaseEnclosure
    a_unique: UniquenessVerdict
    b_unique: UniquenessVerdict
    value_equality: Optional[bool]
    prefix_avoids_switch: tuple[Optional[bool], ...]
    live_paths: Optional[int]
    depth: int

    @property
    def structural_checks_pass(self) -> bool:
        return (
            self.a_unique.kind is Verdict.UNIQUE
            and self.b_unique.kind is Verdict.UNIQUE
            and self.value_equality is True
            and all(ok is True for ok in self.prefix_avoids_switch)
        )

    @property
    def valid(self) -> bool:
        return self.structural_checks_pass and self.live_paths == 2

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "w": str(self.w),
            "m": self.m,
            "a": str(self.a),
            "b": str(self.b),
            "q": self.q.to_json(),
            "depth": self.depth,
            "checks": {
                "aUnique": self.a_unique.to_json(),
                "bUnique": self.b_unique.to_json(),
                "valueEquality": self.value_equality,
                "prefixAvoidsSwitch": list(self.prefix_avoids_switch),
                "livePaths": self.live_paths,
            },
        }


def _values_equal(s: EventuallyPeriodicSeq, t: EventuallyPeriodicSeq, base: BaseEnclosure, depth: int, budget) -> Optional[bool]:
    """pi_q(s) == pi_q(t)?  Exact when q is rational or algebraic.

    With only an interval for q, equality is accepted once the difference
    is enclosed around 0 more tightly than C q^-depth, the scale below which
    distinct unique points cannot come together.
    """
    f = field_for(base, budget)
    n1, d1 = seq_point(f, s)
    n2, d2 = seq_point(f, t)
    diff = f.sub(f.mul(n1, d2), f.mul(n2, d1))
    if f.exact:
        sgn = f.sign(diff)
        return None if sgn is None else sgn == 0
    enc = diff / f.mul(d1, d2)
    if 0 not in enc:
        return False
    tol = separation_constant(base).lo * base.q.hi ** (-depth)
    return True if enc.width < tol else None


def _avoids_switch(x: EventuallyPeriodicSeq, base: BaseEnclosure, budget) -> Optional[bool]:
    try:
        opts = digit_options(x, base, budget)
    except PrecisionExhausted:
        return None
    if opts is Ambiguous:
        return None
    return len(opts) == 1


def check_u2_point(
    w: Sequence[int],
    m: int,
    a: EventuallyPeriodicSeq,
    b: EventuallyPeriodicSeq,
    base: BaseEnclosure,
    depth: int = 40,
    budget: RefinementBudget = DEFAULT_BUDGET,
) -> U2Certificate:
    """Check that pi_q(w m a) = pi_q(w (m+1) b) has exactly these two expansions."""
    M = base.M
    w = w if isinstance(w, DigitWord) else DigitWord(tuple(w), M)
    if not 0 <= m < M:
        raise DomainError(f"m must satisfy 0 <= m < M, got {m}")
    if a.M != M or b.M != M or w.M != M:
        raise DomainError("alphabet mismatch")
    left = a.prepend(w.digits + (m,))
    right = b.prepend(w.digits + (m + 1,))
    a_v = uniqueness_certificate(a, base)
    b_v = uniqueness_certificate(b, base)
    equal = _values_equal(left, right, base, depth, budget)
    prefix = tuple(
        _avoids_switch(a.prepend(w.digits[j:] + (m,)), base, budget) for j in range(len(w))
    )
    live = None
    if equal is True:
        try:
            tree = enumerate_expansions(left, base, depth, budget)
            live = tree.count_lower
        except PrecisionExhausted:
            live = None
    return U2Certificate(w, m, a, b, base, a_v, b_v, equal, prefix, live, depth)


# pair search ----------------------------------------------------------------


@dataclass(frozen=True)
class PairSearchRecord:
    a: EventuallyPeriodicSeq
    b: EventuallyPeriodicSeq
    root: RootResult
    membership: tuple[UniquenessVerdict, UniquenessVerdict]

    @property
    def constructive(self) -> bool:
        return all(v.kind is Verdict.UNIQUE for v in self.membership)

    def to_json(self) -> dict:
        return {
            "a": str(self.a),
            "b": str(self.b),
            "root": self.root.to_json(),
            "membership": [v.to_json() for v in self.membership],
            "constructive": self.constructive,
        }


def canonical_sequences(M: int, period_bound: int, preperiod_bound: int) -> list[EventuallyPeriodicSeq]:
    """All distinct pre(period)^inf with |pre| <= preperiod_bound, |period| <= period_bound."""
    seen = {}
    for p in range(preperiod_bound + 1):
        for pre in product(range(M + 1), repeat=p):
            for r in range(1, period_bound + 1):
                for per in product(range(M + 1), repeat=r):
                    s = EventuallyPeriodicSeq(pre, per, M)
                    seen.setdefault(s.key(), s)
    return [seen[k] for k in sorted(seen)]


def _pair_key(a, b):
    return min((a.key(), b.key()), (reflect(b).key(), reflect(a).key()))


def construct_u2_candidates(
    M: int,
    window: RationalInterval,
    period_bound: int,
    preperiod_bound: int,
    precision=Fraction(1, 10**12),
    budget: RefinementBudget = DEFAULT_BUDGET,
) -> list[PairSearchRecord]:
    """Search pairs (a, b) with pi_q(a) = pi_q(b) + 1 for some q in ``window``.

    Only pairs whose equation has a certified root in the window are
    returned; a pair and its reflection (reflect b, reflect a) share the
    same difference series, so only one of them is kept.
    """
    window = RationalInterval.coerce(window)
    kl = komornik_loreti(M).q
    if not (window.lo > kl.hi and window.hi < M + 1):
        raise DomainError(f"window {window} is not inside (q_KL, {M + 1})")
    seqs = canonical_sequences(M, period_bound, preperiod_bound)
    roots: dict = {}
    records = []
    done = set()
    for a in seqs:
        for b in seqs:
            if a.key() == b.key():
                continue
            pk = _pair_key(a, b)
            if pk in done:
                continue
            done.add(pk)
            diff = DiffSeries.from_pair(a, b)
            dk = diff.key()
            if dk not in roots:
                poly = value_poly(diff)
                if poly_sign(poly, window.lo) * poly_sign(poly, window.hi) > 0:
                    roots[dk] = None
                else:
                    res = transversality_root(diff, window, precision, budget)
                    roots[dk] = res if res.kind is RootKind.UNIQUE else None
            res = roots[dk]
            if res is None:
                continue
            membership = (uniqueness_certificate(a, res.q), uniqueness_certificate(b, res.q))
            records.append(PairSearchRecord(a, b, res, membership))
    records.sort(key=lambda r: (r.root.q.q.lo, r.a.key(), r.b.key()))
    return records


def theorem_bound(dim) -> RationalInterval:
    """Image of d -> max(0, 2d - 1) over an interval of dimensions."""
    dim = RationalInterval.coerce(dim)
    if dim.lo < 0 or dim.hi > 1:
        raise DomainError(f"dimension enclosure {dim} not inside [0, 1]")
    return RationalInterval(max(Fraction(0), 2 * dim.lo - 1), max(Fraction(0), 2 * dim.hi - 1))


# reduction ------------------------------------------------------------------


@dataclass(frozen=True)
class U2Reduction:
    index: int
    prefix: DigitWord
    tail: RationalInterval

    def to_json(self) -> dict:
        return {"index": self.index, "prefix": str(self.prefix), "tail": self.tail.to_json()}


def reduce_to_u2(
    x,
    base: BaseEnclosure,
    depth: int,
    budget: RefinementBudget = DEFAULT_BUDGET,
    max_nodes: int = 100_000,
) -> Optional[U2Reduction]:
    """First branch point (in lexicographic order) whose two continuations are unique.

    Walks the expansion tree of x to ``depth``; returns the prefix length k
    and the tail point T^k(x), which then has exactly two expansions.
    """
    root = make_point(x, base, budget)
    ok = root.in_Iq()
    if ok is False:
        raise DomainError("x lies outside I_q")
    M = base.M
    stack = [((), root)]
    nodes = 0
    while stack:
        prefix, p = stack.pop()
        nodes += 1
        if nodes > max_nodes:
            raise PrecisionExhausted(len(prefix), "reduction node budget exceeded")
        certain, maybe = _options(p, M)
        if maybe:
            raise PrecisionExhausted(len(prefix) + 1, "digit choice undecidable")
        if len(certain) == 2:
            lo_child, hi_child = p.step(certain[0]), p.step(certain[1])
            if point_is_unique(lo_child, base, budget=budget) and point_is_unique(hi_child, base, budget=budget):
                return U2Reduction(len(prefix), DigitWord(prefix, M), p.enclosure())
        if len(prefix) >= depth:
            continue
        for d in sorted(certain, reverse=True):
            stack.append((prefix + (d,), p.step(d)))
    return None
