"""Bases, closed-form series evaluation and certified sign determination."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DigitRangeError, DomainError
from .interval import (
    RationalInterval,
    as_fraction,
    bisect_root,
    bisect_step,
    fraction_str,
    poly_add,
    poly_eval,
    poly_mul,
    poly_sign,
)
from .sequences import DiffSeries, DigitWord, EventuallyPeriodicSeq


@dataclass(frozen=True)
class RefinementBudget:
    """Caps on work spent resolving a single decision."""

    max_depth: int = 4096
    max_splits: int = 400

    def to_json(self) -> dict:
        return {"max_depth": self.max_depth, "max_splits": self.max_splits}


DEFAULT_BUDGET = RefinementBudget()


@dataclass(frozen=True)
class BaseEnclosure:
    """A base q in (1, M+1] known through a rational enclosure.

    ``poly`` (integer coefficients, constant term first) optionally pins q as
    the unique root of that polynomial inside ``q``; exact arithmetic in
    Q(q) then becomes available and the enclosure can be refined on demand.
    """

    M: int
    q: RationalInterval
    poly: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if not isinstance(self.M, int) or self.M < 1:
            raise DomainError("M must be a positive integer")
        q = RationalInterval.coerce(self.q)
        object.__setattr__(self, "q", q)
        if not (q.lo > 1 and q.hi <= self.M + 1):
            raise DomainError(f"base enclosure {q} not inside (1, {self.M + 1}]")
        if self.poly is not None:
            poly = tuple(int(c) for c in self.poly)
            object.__setattr__(self, "poly", poly)
            if q.is_point:
                if poly_sign(poly, q.lo) != 0:
                    raise DomainError("point base is not a root of its polynomial")
            elif poly_sign(poly, q.lo) * poly_sign(poly, q.hi) > 0:
                raise DomainError("defining polynomial does not change sign on the enclosure")

    @classmethod
    def rational(cls, M: int, q) -> "BaseEnclosure":
        return cls(M, RationalInterval.point(q))

    @classmethod
    def algebraic(cls, M: int, poly: Sequence[int], lo, hi, width=Fraction(1, 10**12)) -> "BaseEnclosure":
        """Root of ``poly`` isolated in [lo, hi], refined to ``width``."""
        iv = bisect_root(poly, RationalInterval(lo, hi), width)
        if iv.is_point:
            return cls.rational(M, iv.lo)
        return cls(M, iv, tuple(poly))

    @property
    def is_point(self) -> bool:
        return self.q.is_point

    @property
    def is_exact(self) -> bool:
        """True when q is rational or carries a defining polynomial."""
        return self.q.is_point or self.poly is not None

    @property
    def value(self) -> Fraction:
        if not self.q.is_point:
            raise DomainError("base is not a point rational")
        return self.q.lo

    def refined(self, width) -> "BaseEnclosure":
        """Narrower enclosure of the same base (only possible with a polynomial)."""
        width = as_fraction(width)
        if self.poly is None or self.q.is_point:
            return self
        iv = self.q
        while iv.width > width and not iv.is_point:
            iv = bisect_step(self.poly, iv)
        if iv.is_point:
            return BaseEnclosure.rational(self.M, iv.lo)
        return BaseEnclosure(self.M, iv, self.poly)

    @property
    def I_upper(self) -> RationalInterval:
        """Enclosure of M/(q-1), the right end of I_q."""
        return RationalInterval.point(self.M) / (self.q - 1)

    def to_json(self) -> dict:
        out = {"M": self.M, "q": self.q.to_json()}
        if self.poly is not None:
            out["poly"] = list(self.poly)
        return out

    def __str__(self):
        return f"q in {self.q} (M={self.M})"


class Sign(enum.Enum):
    POSITIVE = "Positive"
    NEGATIVE = "Negative"
    CONTAINS_ZERO = "ContainsZero"


@dataclass(frozen=True)
class SignResult:
    kind: Sign
    enclosure: RationalInterval
    width: Fraction = field(default=Fraction(0))

    @property
    def certified(self) -> bool:
        return self.kind is not Sign.CONTAINS_ZERO

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "enclosure": self.enclosure.to_json(),
            "width": fraction_str(self.width),
        }


# closed forms ---------------------------------------------------------------


def pi_polys(pre: Sequence[int], period: Sequence[int]) -> tuple[list[int], list[int]]:
    """Integer polynomials N, D in q with pi_q(pre period^inf) = N(q)/D(q).

    D(q) = q^p (q^r - 1), which is positive for every q > 1.
    """
    p, r = len(pre), len(period)
    head = [0] * p
    for i, c in enumerate(pre, start=1):
        head[p - i] = c
    cyc = [0] * r
    for j, e in enumerate(period, start=1):
        cyc[r - j] = e
    qr_minus_1 = [-1] + [0] * (r - 1) + [1]
    num = poly_add(poly_mul(head, qr_minus_1), cyc)
    den = [0] * p + qr_minus_1
    return num, den


def series_value(pre: Sequence[int], period: Sequence[int], x: Fraction) -> Fraction:
    """sum_{i>=1} s_i x^i in closed form, for 0 <= x < 1."""
    total = Fraction(0)
    power = Fraction(1)
    for c in pre:
        power *= x
        total += c * power
    cyc = Fraction(0)
    inner = Fraction(1)
    for e in period:
        inner *= x
        cyc += e * inner
    return total + power * cyc / (1 - inner)


def _seq_value_at(seq, q: Fraction) -> Fraction:
    num, den = pi_polys(seq.pre, seq.period)
    return poly_eval(num, q) / poly_eval(den, q)


def eval_pi(base: BaseEnclosure, seq, depth: int = 64) -> RationalInterval:
    """Enclosure of pi_q(seq) = sum seq_i q^{-i} over the base enclosure.

    Eventually periodic sequences are summed in closed form; since every
    digit is nonnegative the value is decreasing in q, so the endpoints of
    the q-enclosure give the exact range.  A DigitWord is treated as a
    prefix of an unknown sequence: the first ``depth`` digits are summed and
    the unknown tail is bounded by M q^{-depth}/(q-1) at q.lo.
    """
    if depth < 1:
        raise DomainError("depth must be positive")
    if isinstance(seq, EventuallyPeriodicSeq):
        if seq.M != base.M:
            raise DigitRangeError("sequence alphabet does not match the base")
        hi = _seq_value_at(seq, base.q.lo)
        lo = hi if base.q.is_point else _seq_value_at(seq, base.q.hi)
        return RationalInterval(lo, hi)
    if isinstance(seq, DigitWord):
        if seq.M != base.M:
            raise DigitRangeError("word alphabet does not match the base")
        digits = seq.digits[:depth]
        n = len(digits)

        def head(q):
            total, power = Fraction(0), Fraction(1)
            for c in digits:
                power /= q
                total += c * power
            return total

        lo_q = base.q.lo
        tail = base.M * lo_q ** (-n) / (lo_q - 1)
        return RationalInterval(head(base.q.hi), head(lo_q) + tail)
    raise DomainError(f"cannot evaluate {type(seq).__name__}")


def diff_range(diff: DiffSeries, x: RationalInterval) -> RationalInterval:
    """Enclosure of g(x) = 1 + sum d_i x^i for x inside (0, 1).

    The positive and negative coefficient parts are each increasing in x, so
    the enclosure is exact at point arguments and sound on intervals.
    """
    ppre, pper = diff.positive_part()
    npre, nper = diff.negative_part()
    if x.is_point:
        v = 1 + series_value(ppre, pper, x.lo) - series_value(npre, nper, x.lo)
        return RationalInterval(v, v)
    lo = 1 + series_value(ppre, pper, x.lo) - series_value(npre, nper, x.hi)
    hi = 1 + series_value(ppre, pper, x.hi) - series_value(npre, nper, x.lo)
    return RationalInterval(lo, hi)


def certified_sign(diff: DiffSeries, x, depth: int = 64) -> SignResult:
    """Certified sign of g(x) = 1 + sum d_i x^i on an interval inside (0, 1).

    The first ``depth`` coefficients and the eventually periodic remainder
    are both summed in closed form, so no truncation error arises; ``depth``
    only has to be positive.
    """
    x = RationalInterval.coerce(x)
    if not (x.lo > 0 and x.hi < 1):
        raise DomainError(f"x = {x} is not inside (0, 1)")
    if depth < 1:
        raise DomainError("depth must be positive")
    enc = diff_range(diff, x)
    if enc.lo > 0:
        return SignResult(Sign.POSITIVE, enc, enc.width)
    if enc.hi < 0:
        return SignResult(Sign.NEGATIVE, enc, enc.width)
    return SignResult(Sign.CONTAINS_ZERO, enc, enc.width)
