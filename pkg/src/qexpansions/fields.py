"""Arithmetic in Q(q) for the three ways a base can be known.

The expansion engine only ever needs ring operations, multiplication by q
and sign tests, so each context offers exactly that:

* ``RationalField``  -- q is a point rational; elements are Fractions.
* ``AlgebraicField`` -- q is a root of an integer polynomial isolated in an
  enclosure; elements are residues modulo that polynomial, zero is decided
  exactly and other signs by evaluation over a refinable enclosure.
* ``IntervalField``  -- q is only known to lie in an interval; elements are
  RationalIntervals and signs may be undecidable.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .arith import DEFAULT_BUDGET, BaseEnclosure, RefinementBudget, pi_polys
from .interval import RationalInterval, bisect_step, poly_range


class RationalField:
    exact = True

    def __init__(self, q: Fraction):
        self.q = Fraction(q)

    def const(self, v) -> Fraction:
        return Fraction(v)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def scale(self, a, c):
        return a * c

    def mul_q(self, a):
        return a * self.q

    def sign(self, a) -> Optional[int]:
        return (a > 0) - (a < 0)

    def key(self, a):
        return a

    def enclose(self, a) -> RationalInterval:
        return RationalInterval(a, a)


class AlgebraicField:
    exact = True

    def __init__(self, poly: Sequence[int], enclosure: RationalInterval, budget: RefinementBudget = DEFAULT_BUDGET):
        self.poly = tuple(int(c) for c in poly)
        self.degree = len(self.poly) - 1
        lead = Fraction(self.poly[-1])
        # q^d = sum_i red[i] q^i
        self._reduce = tuple(-Fraction(c) / lead for c in self.poly[:-1])
        self.enclosure = enclosure
        self.budget = budget
        self._splits = 0

    def _norm(self, coeffs) -> tuple:
        coeffs = list(coeffs)
        d = self.degree
        while len(coeffs) > d:
            top = coeffs.pop()
            if top:
                k = len(coeffs) - d
                for i, r in enumerate(self._reduce):
                    coeffs[k + i] += top * r
        coeffs += [Fraction(0)] * (d - len(coeffs))
        return tuple(coeffs)

    def const(self, v):
        return self._norm([Fraction(v)])

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def scale(self, a, c):
        return tuple(x * c for x in a)

    def mul_q(self, a):
        return self._norm((Fraction(0),) + a)

    def mul(self, a, b):
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return self._norm(out)

    def _refine(self) -> bool:
        if self.enclosure.is_point or self._splits >= self.budget.max_splits:
            return False
        self.enclosure = bisect_step(self.poly, self.enclosure)
        self._splits += 1
        return True

    def enclose(self, a) -> RationalInterval:
        return poly_range(a, self.enclosure)

    def sign(self, a) -> Optional[int]:
        if not any(a):
            return 0
        while True:
            s = poly_range(a, self.enclosure).sign()
            if s is not None and s != 0:
                return s
            if not self._refine():
                return None

    def key(self, a):
        return a


class IntervalField:
    exact = False

    def __init__(self, q: RationalInterval):
        self.q = q

    def const(self, v):
        return RationalInterval.coerce(v)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def scale(self, a, c):
        return a * c

    def mul_q(self, a):
        return a * self.q

    def sign(self, a) -> Optional[int]:
        return a.sign()

    def key(self, a):
        return None

    def enclose(self, a) -> RationalInterval:
        return a


def field_for(base: BaseEnclosure, budget: RefinementBudget = DEFAULT_BUDGET, exact_point: bool = True):
    """Pick the strongest arithmetic available for ``base``.

    ``exact_point=False`` forces interval arithmetic (used for non-point x).
    """
    if not exact_point:
        return IntervalField(base.q)
    if base.q.is_point:
        return RationalField(base.q.lo)
    if base.poly is not None:
        return AlgebraicField(base.poly, base.q, budget)
    return IntervalField(base.q)


def poly_element(field, coeffs: Sequence[int]):
    """Evaluate an integer polynomial at q inside ``field`` (Horner)."""
    acc = field.const(0)
    for c in reversed(coeffs):
        acc = field.add(field.mul_q(acc), field.const(c))
    return acc


def seq_point(field, seq):
    """pi_q(seq) as a pair (numerator, positive denominator) of field elements."""
    num, den = pi_polys(seq.pre, seq.period)
    return poly_element(field, num), poly_element(field, den)
