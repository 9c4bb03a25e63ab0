"""Greedy, quasi-greedy and lazy expansions, switch regions, branching
enumeration of all expansions of a point, and uniqueness verdicts.

Points are carried as ``(N, D)`` pairs of field elements with ``D > 0``
and value ``N/D``; one step of the expansion map sends ``N`` to
``q*N - d*D``, so no division in Q(q) is ever needed.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

from .arith import DEFAULT_BUDGET, BaseEnclosure, RefinementBudget
from .errors import DomainError, PrecisionExhausted
from .fields import IntervalField, field_for, seq_point
from .interval import RationalInterval, as_fraction
from .sequences import (
    DigitWord,
    EventuallyPeriodicSeq,
    Ordering,
    lex_compare,
    reflect,
    shift,
)

PointLike = Union[RationalInterval, Fraction, int, str, EventuallyPeriodicSeq]


class _Point:
    __slots__ = ("field", "N", "D", "M")

    def __init__(self, field, N, D, M):
        self.field, self.N, self.D, self.M = field, N, D, M

    def step(self, d: int) -> "_Point":
        f = self.field
        return _Point(f, f.sub(f.mul_q(self.N), f.scale(self.D, d)), self.D, self.M)

    def lower_ok(self, d: int) -> Optional[int]:
        """sign(q*y - d)"""
        f = self.field
        return f.sign(f.sub(f.mul_q(self.N), f.scale(self.D, d)))

    def upper_ok(self, d: int) -> Optional[int]:
        """sign((q-1)(q*y - d) - M): q*y - d <= M/(q-1) iff this is <= 0."""
        f = self.field
        t = f.sub(f.mul_q(self.N), f.scale(self.D, d))
        return f.sign(f.sub(f.sub(f.mul_q(t), t), f.scale(self.D, self.M)))

    def in_Iq(self) -> Optional[bool]:
        f = self.field
        s_lo = f.sign(self.N)
        s_hi = f.sign(f.sub(f.sub(f.mul_q(self.N), self.N), f.scale(self.D, self.M)))
        if s_lo is not None and s_lo < 0:
            return False
        if s_hi is not None and s_hi > 0:
            return False
        if s_lo is None or s_hi is None:
            return None
        return True

    def is_zero(self) -> Optional[bool]:
        s = self.field.sign(self.N)
        return None if s is None else s == 0

    def key(self):
        k = self.field.key(self.N)
        return None if k is None else (k, self.field.key(self.D))

    def enclosure(self) -> RationalInterval:
        f = self.field
        return f.enclose(self.N) / f.enclose(self.D)


def make_point(x: PointLike, base: BaseEnclosure, budget: RefinementBudget = DEFAULT_BUDGET) -> _Point:
    """Represent x (a rational, an interval, or pi_q of a sequence) in base arithmetic."""
    if isinstance(x, EventuallyPeriodicSeq):
        if x.M != base.M:
            raise DomainError("sequence alphabet does not match the base")
        field = field_for(base, budget)
        N, D = seq_point(field, x)
        return _Point(field, N, D, base.M)
    iv = RationalInterval.coerce(x if not isinstance(x, str) else as_fraction(x))
    field = field_for(base, budget, exact_point=iv.is_point)
    if isinstance(field, IntervalField):
        return _Point(field, iv, RationalInterval.point(1), base.M)
    return _Point(field, field.const(iv.lo), field.const(1), base.M)


def _require_in_Iq(p: _Point) -> None:
    ok = p.in_Iq()
    if ok is False:
        raise DomainError("x lies outside I_q = [0, M/(q-1)]")
    if ok is None:
        raise PrecisionExhausted(0, "cannot certify x in I_q")


def greedy_expansion(x: PointLike, base: BaseEnclosure, n: int, budget: RefinementBudget = DEFAULT_BUDGET) -> DigitWord:
    """First n digits of the lexicographically largest expansion b(x, q)."""
    p = make_point(x, base, budget)
    _require_in_Iq(p)
    digits = []
    for pos in range(1, n + 1):
        for d in range(base.M, -1, -1):
            s = p.lower_ok(d)
            if s is None:
                raise PrecisionExhausted(pos, partial=DigitWord(tuple(digits), base.M))
            if s >= 0:
                break
        digits.append(d)
        p = p.step(d)
    return DigitWord(tuple(digits), base.M)


def quasi_greedy_expansion(x: PointLike, base: BaseEnclosure, n: int, budget: RefinementBudget = DEFAULT_BUDGET) -> DigitWord:
    """First n digits of the largest infinite expansion a(x, q); x must be > 0."""
    p = make_point(x, base, budget)
    _require_in_Iq(p)
    zero = p.is_zero()
    if zero is None or p.field.sign(p.N) is None:
        raise PrecisionExhausted(0, "cannot certify x > 0")
    if zero:
        raise DomainError("the quasi-greedy expansion is defined on (0, M/(q-1)]")
    digits = []
    for pos in range(1, n + 1):
        for d in range(base.M, -1, -1):
            s = p.lower_ok(d)
            if s is None:
                raise PrecisionExhausted(pos, partial=DigitWord(tuple(digits), base.M))
            if s > 0:
                break
        digits.append(d)
        p = p.step(d)
    return DigitWord(tuple(digits), base.M)


def lazy_expansion(x: PointLike, base: BaseEnclosure, n: int, budget: RefinementBudget = DEFAULT_BUDGET) -> DigitWord:
    """First n digits of the lexicographically smallest expansion."""
    p = make_point(x, base, budget)
    _require_in_Iq(p)
    digits = []
    for pos in range(1, n + 1):
        for d in range(0, base.M + 1):
            s = p.upper_ok(d)
            if s is None:
                raise PrecisionExhausted(pos, partial=DigitWord(tuple(digits), base.M))
            if s <= 0:
                break
        digits.append(d)
        p = p.step(d)
    return DigitWord(tuple(digits), base.M)


# switch region --------------------------------------------------------------


@dataclass(frozen=True)
class SwitchBlock:
    digit_high: int
    interval: RationalInterval


@dataclass(frozen=True)
class SwitchRegion:
    base: BaseEnclosure
    blocks: tuple[SwitchBlock, ...]

    def pairwise_disjoint(self, inflate: Fraction = Fraction(0)) -> bool:
        """Certified disjointness of consecutive blocks, each widened by ``inflate``.

        Uses the per-q gap (2(q-1) - M)/(q^2 - q) between block i and i+1,
        which is tighter than comparing hulls over the q-enclosure.
        """
        if len(self.blocks) < 2:
            return True
        q = self.base.q
        gap = (2 * (q - 1) - self.base.M) / (q * (q - 1))
        return gap.lo > 2 * inflate

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "blocks": [{"digit_high": b.digit_high, "interval": b.interval.to_json()} for b in self.blocks],
        }


def switch_region(base: BaseEnclosure) -> SwitchRegion:
    """The M blocks [i/q, ((i-1)(q-1)+M)/(q^2-q)], hulled over the q-enclosure.

    Both endpoints are decreasing in q, so the hull of block i is
    [i/q.hi, f_i(q.lo)].
    """
    q = base.q
    M = base.M
    blocks = []
    for i in range(1, M + 1):
        left = Fraction(i) / q.hi
        ql = q.lo
        right = ((i - 1) * (ql - 1) + M) / (ql * ql - ql)
        blocks.append(SwitchBlock(i, RationalInterval(left, right)))
    return SwitchRegion(base, tuple(blocks))


class _AmbiguousType:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Ambiguous"


Ambiguous = _AmbiguousType()


def _options(p: _Point, M: int) -> tuple[list[int], list[int]]:
    """(certain digits, undecided digits) that keep the remainder in I_q."""
    certain, maybe = [], []
    for d in range(M + 1):
        lo = p.lower_ok(d)
        if lo is not None and lo < 0:
            continue
        hi = p.upper_ok(d)
        if hi is not None and hi > 0:
            continue
        if lo is None or hi is None:
            maybe.append(d)
        else:
            certain.append(d)
    return certain, maybe


def digit_options(x: PointLike, base: BaseEnclosure, budget: RefinementBudget = DEFAULT_BUDGET):
    """Set of admissible first digits of x, or ``Ambiguous``."""
    p = make_point(x, base, budget)
    _require_in_Iq(p)
    certain, maybe = _options(p, base.M)
    if maybe:
        return Ambiguous
    return frozenset(certain)


# enumeration ----------------------------------------------------------------


class NodeStatus(enum.Enum):
    LIVE = "Live"
    DEAD = "Dead"
    AMBIGUOUS = "Ambiguous"


@dataclass(frozen=True)
class ExpansionPath:
    digits: DigitWord
    status: NodeStatus
    remainder: RationalInterval


@dataclass(frozen=True)
class ExpansionTree:
    x: RationalInterval
    base: BaseEnclosure
    depth: int
    paths: tuple[ExpansionPath, ...]

    @property
    def live(self) -> list[ExpansionPath]:
        return [p for p in self.paths if p.status is NodeStatus.LIVE]

    @property
    def count_lower(self) -> int:
        return len(self.live)

    @property
    def count_upper(self) -> int:
        return len(self.paths)

    def live_words(self) -> list[tuple[int, ...]]:
        return [p.digits.digits for p in self.live]

    def to_json(self) -> dict:
        return {
            "x": self.x.to_json(),
            "q": self.base.to_json(),
            "depth": self.depth,
            "paths": [{"digits": str(p.digits), "status": p.status.value} for p in self.paths],
        }


def enumerate_expansions(
    x: PointLike,
    base: BaseEnclosure,
    depth: int,
    budget: RefinementBudget = DEFAULT_BUDGET,
    on_ambiguous: str = "raise",
    max_paths: int = 2_000_000,
) -> ExpansionTree:
    """All length-``depth`` prefixes of q-expansions of x.

    A path is Live when its final remainder is certified inside I_q (then it
    extends to a genuine expansion), Ambiguous when that cannot be decided.
    With ``on_ambiguous="raise"`` any Ambiguous node raises
    PrecisionExhausted; ``"keep"`` reports it instead.
    """
    if depth < 1:
        raise DomainError("depth must be positive")
    root = make_point(x, base, budget)
    _require_in_Iq(root)
    M = base.M
    done: list[ExpansionPath] = []
    # depth-first, ascending digits, so output is lexicographically sorted
    stack = [((), root, False)]
    while stack:
        prefix, p, amb = stack.pop()
        if len(prefix) == depth:
            status = NodeStatus.AMBIGUOUS if amb else NodeStatus.LIVE
            done.append(ExpansionPath(DigitWord(prefix, M), status, p.enclosure()))
            if len(done) > max_paths:
                raise PrecisionExhausted(depth, f"more than {max_paths} paths")
            continue
        certain, maybe = _options(p, M)
        if maybe and on_ambiguous == "raise":
            raise PrecisionExhausted(len(prefix) + 1, "digit choice undecidable")
        children = [(d, False) for d in certain] + [(d, True) for d in maybe]
        children.sort(reverse=True)
        for d, undecided in children:
            stack.append((prefix + (d,), p.step(d), amb or undecided))
    return ExpansionTree(root.enclosure(), base, depth, tuple(done))


def point_is_unique(x: PointLike, base: BaseEnclosure, max_steps: int = 4096, budget: RefinementBudget = DEFAULT_BUDGET) -> Optional[bool]:
    """Decide uniqueness of the expansion of a point by orbit cycle detection.

    Follows the forced digit while exactly one option exists; a repeated
    exact remainder closes the orbit (True), a branch point gives False,
    and anything undecided within ``max_steps`` gives None.
    """
    p = x if isinstance(x, _Point) else make_point(x, base, budget)
    seen = set()
    for _ in range(max_steps):
        certain, maybe = _options(p, base.M)
        if maybe:
            return None
        if len(certain) > 1:
            return False
        k = p.key()
        if k is not None:
            if k in seen:
                return True
            seen.add(k)
        p = p.step(certain[0])
    return None


# alpha(q) -------------------------------------------------------------------


class AlphaExpansion:
    """Lazily generated quasi-greedy expansion of 1, with cycle detection.

    Once the exact remainder orbit repeats, ``periodic`` holds alpha(q) as
    an EventuallyPeriodicSeq and digits are read from it.
    """

    def __init__(self, base: BaseEnclosure, budget: RefinementBudget = DEFAULT_BUDGET):
        self.base = base
        self.budget = budget
        self._p = make_point(1, base, budget)
        self._digits: list[int] = []
        self._seen: dict = {}
        self.periodic: Optional[EventuallyPeriodicSeq] = None
        self._lock = threading.Lock()
        self._record_key()

    def _record_key(self):
        k = self._p.key()
        if k is None:
            return
        n = len(self._digits)
        if k in self._seen:
            i = self._seen[k]
            self.periodic = EventuallyPeriodicSeq(tuple(self._digits[:i]), tuple(self._digits[i:n]), self.base.M)
        else:
            self._seen[k] = n

    def _extend(self):
        pos = len(self._digits) + 1
        if pos > self.budget.max_depth:
            raise PrecisionExhausted(pos, "alpha(q) depth budget exceeded")
        for d in range(self.base.M, -1, -1):
            s = self._p.lower_ok(d)
            if s is None:
                raise PrecisionExhausted(pos, "alpha(q) digit undecidable")
            if s > 0:
                break
        self._digits.append(d)
        self._p = self._p.step(d)
        self._record_key()

    def digit(self, i: int) -> int:
        with self._lock:
            if self.periodic is not None:
                return self.periodic.digit(i)
            while len(self._digits) < i:
                self._extend()
                if self.periodic is not None:
                    return self.periodic.digit(i)
            return self._digits[i - 1]

    def prefix(self, n: int) -> tuple[int, ...]:
        return tuple(self.digit(i) for i in range(1, n + 1))


@lru_cache(maxsize=256)
def alpha_expansion(base: BaseEnclosure) -> AlphaExpansion:
    return AlphaExpansion(base)


def strictly_below_alpha(t: EventuallyPeriodicSeq, alpha: AlphaExpansion, depth: int) -> Optional[bool]:
    """Is t strictly lexicographically below alpha(q)?  None if undecided within depth."""
    for i in range(1, depth + 1):
        if alpha.periodic is not None:
            return lex_compare(t, alpha.periodic) is Ordering.LESS
        a = alpha.digit(i)
        c = t.digit(i)
        if c != a:
            return c < a
    if alpha.periodic is not None:
        return lex_compare(t, alpha.periodic) is Ordering.LESS
    return None


class Verdict(enum.Enum):
    UNIQUE = "UniqueCertified"
    NOT_UNIQUE = "NotUniqueCertified"
    UNKNOWN = "UnknownToDepth"


@dataclass(frozen=True)
class UniquenessVerdict:
    kind: Verdict
    witness: Optional[int] = None
    depth: Optional[int] = None

    @property
    def unique(self) -> bool:
        return self.kind is Verdict.UNIQUE

    def to_json(self) -> dict:
        out = {"kind": self.kind.value}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.depth is not None:
            out["depth"] = self.depth
        return out


def uniqueness_certificate(s: EventuallyPeriodicSeq, base: BaseEnclosure, depth: int = 256) -> UniquenessVerdict:
    """Decide whether s is the only q-expansion of pi_q(s).

    For every position n: if s_n < M the tail after n must be strictly below
    alpha(q); if s_n > 0 the reflected tail must be strictly below alpha(q).
    Only cycle_length positions give distinct (digit, tail) pairs.  The
    witness is the 1-based position n of a certified violation; at depth n
    the point then shows a second admissible digit.
    """
    if s.M != base.M:
        raise DomainError("sequence alphabet does not match the base")
    M = base.M
    alpha = alpha_expansion(base)
    undecided = False
    for n in range(1, s.cycle_length + 1):
        c = s.digit(n)
        t = shift(s, n)
        checks = []
        if c < M:
            checks.append(t)
        if c > 0:
            checks.append(reflect(t))
        for u in checks:
            ok = strictly_below_alpha(u, alpha, depth)
            if ok is False:
                return UniquenessVerdict(Verdict.NOT_UNIQUE, witness=n)
            if ok is None:
                undecided = True
    if undecided:
        return UniquenessVerdict(Verdict.UNKNOWN, depth=depth)
    return UniquenessVerdict(Verdict.UNIQUE)


def separation_constant(base: BaseEnclosure) -> RationalInterval:
    """C = (M/(q-1) - 1)/2: unique points closer than C q^{-n} share n digits."""
    return (base.I_upper - 1) * Fraction(1, 2)
