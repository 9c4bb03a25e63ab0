"""Distinguished bases: alpha(q), its inverse, q_KL, q_GR and V-membership."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .arith import DEFAULT_BUDGET, BaseEnclosure, RefinementBudget, pi_polys
from .engine import alpha_expansion, quasi_greedy_expansion
from .errors import AdmissibilityError, DomainError
from .interval import RationalInterval, as_fraction, bisect_root, isolating_factor, poly_add, poly_sign
from .sequences import DigitWord, EventuallyPeriodicSeq, Ordering, kl_sequence, lex_compare, shift

DEFAULT_PRECISION = Fraction(1, 10**12)


def alpha_of_q(base: BaseEnclosure, n: int, budget: RefinementBudget = DEFAULT_BUDGET) -> DigitWord:
    return quasi_greedy_expansion(1, base, n, budget)


def _value_minus_one_poly(pre, period) -> list[int]:
    num, den = pi_polys(pre, period)
    return poly_add(num, [-c for c in den])


def _root_of_value_one(pre, period, M: int, width: Fraction) -> RationalInterval:
    """Enclose the q in (1, M+1] with pi_q(pre period^inf) = 1.

    q -> pi_q - 1 is strictly decreasing, so plain bisection on the integer
    polynomial N - D (same sign as pi_q - 1 since D > 0) is certified.
    """
    poly = _value_minus_one_poly(pre, period)
    hi = Fraction(M + 1)
    lo = Fraction(3, 2) if M == 1 else Fraction(1)
    if poly_sign(poly, hi) > 0:
        raise DomainError("pi_q(s) exceeds 1 even at q = M+1")
    # shrink the left end towards 1 until pi_q(s) > 1 there
    step = Fraction(1, 2)
    while lo <= 1 or poly_sign(poly, lo) <= 0:
        if lo > 1 and poly_sign(poly, lo) == 0:
            return RationalInterval(lo, lo)
        lo = 1 + step
        step /= 2
        if step < Fraction(1, 2**200):
            raise DomainError("could not bracket the root near q = 1")
    return bisect_root(poly, RationalInterval(lo, hi), width)


def is_self_admissible(s: EventuallyPeriodicSeq) -> Optional[int]:
    """Index of the first shift with shift(s, n) > s, or None if admissible."""
    for n in range(1, s.cycle_length + 1):
        if lex_compare(shift(s, n), s) is Ordering.GREATER:
            return n
    return None


def q_from_alpha(s: EventuallyPeriodicSeq, precision=DEFAULT_PRECISION) -> BaseEnclosure:
    """The base q whose quasi-greedy expansion of 1 is s."""
    precision = as_fraction(precision)
    if s.is_finite:
        raise DomainError("alpha(q) is always an infinite sequence")
    bad = is_self_admissible(s)
    if bad is not None:
        raise AdmissibilityError(bad)
    iv = _root_of_value_one(s.pre, s.period, s.M, precision)
    if iv.is_point:
        return BaseEnclosure.rational(s.M, iv.lo)
    factor = isolating_factor(_value_minus_one_poly(s.pre, s.period), iv)
    return BaseEnclosure(s.M, iv, factor)


@lru_cache(maxsize=512)
def komornik_loreti(M: int, precision=DEFAULT_PRECISION) -> BaseEnclosure:
    """Certified enclosure of the Komornik-Loreti constant for alphabet {0..M}.

    For a Thue-Morse prefix w of length n, the roots of pi_q(w 0^inf) = 1
    and pi_q(w M^inf) = 1 bracket q_KL; n doubles until the bracket is
    narrower than ``precision``.  Each root is found by dyadic bisection
    from [1, M+1], so tighter precisions give nested enclosures.
    """
    precision = as_fraction(precision)
    if M < 1:
        raise DomainError("M must be positive")
    if precision <= 0:
        raise DomainError("precision must be positive")
    n = 8
    while True:
        w = kl_sequence(M, n).digits
        inner = precision / 4
        lo = _dyadic_root(list(w), (0,), M, inner, side="lo")
        hi = _dyadic_root(list(w), (M,), M, inner, side="hi")
        if hi - lo <= precision:
            return BaseEnclosure(M, RationalInterval(lo, hi))
        n *= 2


def _dyadic_root(pre, period, M, width, side):
    poly = _value_minus_one_poly(pre, period)
    a, b = Fraction(1), Fraction(M + 1)
    # at q -> 1+ the value exceeds 1 for these prefixes (leading digit >= 1)
    while b - a > width:
        m = (a + b) / 2
        s = poly_sign(poly, m)
        if s == 0:
            return m
        if s > 0:
            a = m
        else:
            b = m
    return a if side == "lo" else b


def golden_ratio_general(M: int, precision=DEFAULT_PRECISION) -> BaseEnclosure:
    """q_GR = k+1 for M = 2k, else the root of q^2 - (k+1)q - (k+1)."""
    if M < 1:
        raise DomainError("M must be positive")
    k, odd = divmod(M, 2)
    if not odd:
        return BaseEnclosure.rational(M, k + 1)
    poly = (-(k + 1), -(k + 1), 1)
    return BaseEnclosure.algebraic(M, poly, Fraction(k + 1), Fraction(k + 2), as_fraction(precision))


def tribonacci(precision=DEFAULT_PRECISION) -> BaseEnclosure:
    return BaseEnclosure.algebraic(1, (-1, -1, -1, 1), Fraction(9, 5), Fraction(19, 10), as_fraction(precision))


@dataclass(frozen=True)
class VMembershipReport:
    violated_at: Optional[int]
    depth: int

    @property
    def consistent(self) -> bool:
        return self.violated_at is None

    def to_json(self) -> dict:
        if self.violated_at is None:
            return {"kind": "ConsistentToDepth", "depth": self.depth}
        return {"kind": "ViolatedAtIndex", "index": self.violated_at}


def v_membership_check(base: BaseEnclosure, depth: int) -> VMembershipReport:
    """Look for a shift i with shift(alpha, i) outside [reflect(alpha), alpha].

    Comparisons use length-(depth - i) prefixes; a violation is reported
    only where the prefixes already differ in the offending direction.
    """
    alpha = alpha_expansion(base).prefix(depth)
    refl = tuple(base.M - a for a in alpha)
    for i in range(depth):
        tail = alpha[i:]
        m = len(tail)
        if tail > alpha[:m] or tail < refl[:m]:
            return VMembershipReport(i, depth)
    return VMembershipReport(None, depth)


def resolve_base(M: int, spec: str, precision=DEFAULT_PRECISION) -> BaseEnclosure:
    """Interpret a CLI/base string: a rational, or kl / gr / tribonacci / golden."""
    name = spec.strip().lower()
    if name == "kl":
        return komornik_loreti(M, as_fraction(precision))
    if name == "gr":
        return golden_ratio_general(M, precision)
    if name in ("golden", "phi"):
        return golden_ratio_general(1, precision) if M == 1 else _named_error(name, M)
    if name == "tribonacci":
        if M != 1:
            _named_error(name, M)
        return tribonacci(precision)
    return BaseEnclosure.rational(M, as_fraction(spec))


def _named_error(name, M):
    raise DomainError(f"named base {name!r} is only defined for M = 1 (got M = {M})")
