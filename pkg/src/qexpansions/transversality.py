"""Transversality certificates and the unique-root solver for 1 + sum d_i x^i."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .arith import DEFAULT_BUDGET, BaseEnclosure, RefinementBudget, Sign, certified_sign, pi_polys
from .constants import komornik_loreti
from .errors import CertificationFailure, DomainError
from .interval import (
    RationalInterval,
    as_fraction,
    bisect_root,
    fraction_str,
    isolating_factor,
    poly_add,
    poly_sign,
)
from .sequences import DiffSeries

OMEGA = Fraction(1, 100)
_X_WIDTH = Fraction(1, 10**30)


@dataclass(frozen=True)
class StarFunctionSpec:
    """h(x) = 1 + sum_{i<=j} head[i-1] x^i + tail * sum_{i>j} x^i, plus the point x_M.

    ``x_poly`` is the defining integer polynomial of x_M when it is
    irrational; ``x_enclosure`` is then a narrow bracket of its root.
    """

    M: int
    k: int
    head: tuple[Fraction, ...]
    tail: int
    x_enclosure: RationalInterval
    x_poly: Optional[tuple[int, ...]] = None

    def value(self, x: RationalInterval) -> RationalInterval:
        x = RationalInterval.coerce(x)
        acc = RationalInterval.point(1)
        power = RationalInterval.point(1)
        for c in self.head:
            power = power * x
            acc = acc + power * c
        return acc + power * x * self.tail / (1 - x)

    def derivative(self, x: RationalInterval) -> RationalInterval:
        x = RationalInterval.coerce(x)
        acc = RationalInterval.point(0)
        power = RationalInterval.point(1)
        for i, c in enumerate(self.head, start=1):
            acc = acc + power * (c * i)
            power = power * x
        j = len(self.head)
        # d/dx x^{j+1}/(1-x) = x^j ((j+1) - j x) / (1-x)^2
        return acc + power * ((j + 1) - x * j) * self.tail / ((1 - x) ** 2)

    def to_json(self) -> dict:
        out = {
            "M": self.M,
            "k": self.k,
            "head": [fraction_str(c) for c in self.head],
            "tail": self.tail,
            "x_M": self.x_enclosure.to_json(),
        }
        if self.x_poly is not None:
            out["x_poly"] = list(self.x_poly)
        return out


def _root_enclosure(poly, lo, hi) -> RationalInterval:
    return bisect_root(poly, RationalInterval(Fraction(lo), Fraction(hi)), _X_WIDTH)


def star_function(M: int) -> StarFunctionSpec:
    if M < 1:
        raise DomainError("M must be positive")
    k, odd = divmod(M, 2)
    half = Fraction(1, 2)
    poly = None
    if odd:
        if k == 0:
            head, tail = (Fraction(-1), Fraction(-1), Fraction(-1), half), 1
            poly = (-1, 0, 0, 4)  # x^3 = 1/4
        elif k == 1:
            head, tail = (Fraction(-3), -half), 3
        else:
            head, tail = (Fraction(-(k + 3)),), 2 * k + 1
        if 1 <= k < 3:
            poly = (-1, k + 1, k + 1)
    else:
        if k == 1:
            head, tail = (Fraction(-2), -half), 2
        else:
            head, tail = (Fraction(-(k + 2)),), 2 * k
        if k < 3:
            poly = (-1, k + 1, k)
    if poly is None:
        x = RationalInterval.point(Fraction(1, k + 1))
    else:
        x = _root_enclosure(poly, 0, 1)
        if x.is_point:
            poly = None
    return StarFunctionSpec(M, k, head, tail, x, poly)


@dataclass(frozen=True)
class TransversalityCertificate:
    M: int
    interval: RationalInterval
    delta: Fraction
    h_value: RationalInterval
    h_derivative: RationalInterval
    x_M: RationalInterval
    q_kl: RationalInterval

    def to_json(self) -> dict:
        return {
            "M": self.M,
            "interval": self.interval.to_json(),
            "delta": fraction_str(self.delta),
            "evidence": {
                "h(x_M)": self.h_value.to_json(),
                "h'(x_M)": self.h_derivative.to_json(),
                "x_M": self.x_M.to_json(),
                "q_KL": self.q_kl.to_json(),
            },
        }


def verify_star(M: int) -> TransversalityCertificate:
    """Certify h(x_M) > 0, h'(x_M) < 0 and 1/q_KL <= x_M, and derive delta."""
    spec = star_function(M)
    x = spec.x_enclosure
    h = spec.value(x)
    dh = spec.derivative(x)
    if not h.lo > 0:
        raise CertificationFailure(f"h(x_M) not certified positive for M={M}", x)
    if not dh.hi < 0:
        raise CertificationFailure(f"h'(x_M) not certified negative for M={M}", x)
    kl = komornik_loreti(M).q
    if not kl.lo * x.lo >= 1:
        raise CertificationFailure(f"1/q_KL not certified below x_M for M={M}", x)
    delta = min(h.lo / 2, -dh.hi / 2)
    return TransversalityCertificate(M, RationalInterval(Fraction(0), x.lo), delta, h, dh, x, kl)


# root solver ----------------------------------------------------------------


class RootKind(enum.Enum):
    NO_ROOT = "NoRootCertified"
    UNIQUE = "UniqueRoot"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class RootResult:
    kind: RootKind
    q: Optional[BaseEnclosure] = None
    reason: Optional[str] = None

    def to_json(self) -> dict:
        out = {"kind": self.kind.value}
        if self.q is not None:
            out["q"] = self.q.to_json()
        if self.reason is not None:
            out["reason"] = self.reason
        return out


def value_poly(diff: DiffSeries) -> list[int]:
    """Integer polynomial F with sign(F(q)) = sign(1 + sum d_i q^{-i}) for q > 1."""
    num, den = pi_polys(diff.pre, diff.period)
    return poly_add(den, num)


def _constant_sign(diff: DiffSeries, x: RationalInterval, budget: RefinementBudget) -> Optional[Sign]:
    stack = [x]
    pieces = 0
    found = None
    while stack:
        iv = stack.pop()
        s = certified_sign(diff, iv).kind
        if s is Sign.CONTAINS_ZERO:
            pieces += 1
            if pieces > budget.max_splits:
                return None
            left, right = iv.split()
            stack += [right, left]
            continue
        if found is None:
            found = s
        elif found is not s:
            return None
    return found


def transversality_root(
    diff: DiffSeries,
    search: RationalInterval,
    precision=Fraction(1, 10**12),
    budget: RefinementBudget = DEFAULT_BUDGET,
) -> RootResult:
    """Locate the zero of q -> 1 + sum d_i q^{-i} inside ``search``.

    The transversality certificate rules out a second zero anywhere in
    [q_KL, M+1], so a sign change at the ends of ``search`` pins down the
    unique root, which is then bracketed by exact bisection.
    """
    precision = as_fraction(precision)
    search = RationalInterval.coerce(search)
    M = diff.M
    kl = komornik_loreti(M).q
    if search.lo < kl.lo or search.hi > M + 1:
        raise DomainError(f"search window {search} not inside [q_KL, {M + 1}]")
    cert = verify_star(M)
    if not search.lo * cert.x_M.lo >= 1:
        raise DomainError("search window reaches beyond the transversality interval")
    poly = value_poly(diff)
    s_lo, s_hi = poly_sign(poly, search.lo), poly_sign(poly, search.hi)
    if s_lo * s_hi <= 0:
        iv = bisect_root(poly, search, precision)
        if iv.is_point:
            return RootResult(RootKind.UNIQUE, BaseEnclosure.rational(M, iv.lo))
        return RootResult(RootKind.UNIQUE, BaseEnclosure(M, iv, isolating_factor(poly, iv)))
    x = RationalInterval(1 / search.hi, 1 / search.lo)
    if _constant_sign(diff, x, budget) is not None:
        return RootResult(RootKind.NO_ROOT)
    return RootResult(RootKind.INCONCLUSIVE, reason=f"sign undecided after {budget.max_splits} subdivisions")


# inspection inequalities ----------------------------------------------------


@dataclass(frozen=True)
class InspectionCertificate:
    name: str
    M: int
    interval: RationalInterval
    pieces: int
    upper_bound: Fraction

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "M": self.M,
            "interval": self.interval.to_json(),
            "pieces": self.pieces,
            "upper_bound": fraction_str(self.upper_bound),
        }


def certify_negative(
    fn: Callable[[RationalInterval], RationalInterval],
    interval: RationalInterval,
    name: str,
    M: int,
    max_pieces: int = 1 << 16,
) -> InspectionCertificate:
    """Adaptive subdivision until fn's enclosure is below 0 on every piece."""
    stack = [interval]
    done = 0
    sup = None
    while stack:
        iv = stack.pop()
        enc = fn(iv)
        if enc.hi < 0:
            done += 1
            sup = enc.hi if sup is None else max(sup, enc.hi)
            continue
        if enc.lo >= 0 or iv.is_point or done + len(stack) >= max_pieces:
            raise CertificationFailure(f"{name}: sign not certified", iv)
        left, right = iv.split()
        stack += [right, left]
    return InspectionCertificate(name, M, interval, done, sup)


def _case_1a(q: RationalInterval) -> RationalInterval:
    return (2 * OMEGA - 1) / q**2 - 2 / q**4 - 2 / q**5 + 1 / (q**2 * (q - 1) ** 2)


def _case_1b(q: RationalInterval) -> RationalInterval:
    return (2 * OMEGA - 1) / q**2 - 2 / q**4 - 6 / q**6 + 1 / (q**2 * (q - 1) ** 2)


def _closing(p: int) -> Callable[[RationalInterval], RationalInterval]:
    return lambda q: (2 * OMEGA - 1) + p / (q - 1) ** 2


P2_THRESHOLD = Fraction(243, 100)


def verify_inspection_inequalities(M: int) -> list[InspectionCertificate]:
    if M < 1:
        raise DomainError("M must be positive")
    if M == 1:
        window = RationalInterval(komornik_loreti(1).q.lo, Fraction(2))
        return [
            certify_negative(_case_1a, window, "case-1a", M),
            certify_negative(_case_1b, window, "case-1b", M),
        ]
    out = []
    if M in (2, 3):
        kl = komornik_loreti(M).q
        if not kl.lo > P2_THRESHOLD:
            raise CertificationFailure(f"q_KL({M}) not certified above 2.43", kl)
        out.append(certify_negative(_closing(2), RationalInterval(P2_THRESHOLD, Fraction(M + 1)), "p=2", M))
    for p in range(3, M + 1):
        out.append(certify_negative(_closing(p), RationalInterval.point(p), f"p={p}", M))
    return out
