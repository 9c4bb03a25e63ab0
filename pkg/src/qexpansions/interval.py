"""Exact rational intervals, polynomial helpers and logarithm enclosures."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from numbers import Rational
from typing import Iterable, Sequence, Union

from .errors import DomainError

Number = Union[int, Fraction]


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and rational strings ("3/7", "1.25", "1e-8")."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"not a rational number: {value!r}") from exc
    if isinstance(value, float):
        raise DomainError("floats are not accepted in certified paths; pass a Fraction or string")
    raise DomainError(f"cannot interpret {value!r} as a rational")


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = as_fraction(self.lo), as_fraction(self.hi)
        if lo > hi:
            raise DomainError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x) -> "RationalInterval":
        x = as_fraction(x)
        return cls(x, x)

    @classmethod
    def coerce(cls, value) -> "RationalInterval":
        if isinstance(value, RationalInterval):
            return value
        if isinstance(value, tuple) and len(value) == 2:
            return cls(value[0], value[1])
        return cls.point(value)

    @classmethod
    def hull(cls, values: Iterable) -> "RationalInterval":
        vals = list(values)
        los = [v.lo if isinstance(v, RationalInterval) else as_fraction(v) for v in vals]
        his = [v.hi if isinstance(v, RationalInterval) else as_fraction(v) for v in vals]
        return cls(min(los), max(his))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, other) -> bool:
        if isinstance(other, RationalInterval):
            return self.lo <= other.lo and other.hi <= self.hi
        x = as_fraction(other)
        return self.lo <= x <= self.hi

    __contains__ = contains

    def intersects(self, other: "RationalInterval") -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    def sign(self):
        """+1, -1, 0 (the point zero) or None when the interval straddles zero."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == 0 == self.hi:
            return 0
        return None

    def split(self, pieces: int = 2) -> list["RationalInterval"]:
        step = self.width / pieces
        cuts = [self.lo + step * i for i in range(pieces)] + [self.hi]
        return [RationalInterval(cuts[i], cuts[i + 1]) for i in range(pieces)]

    def round_out(self, denominator: int = 10**40) -> "RationalInterval":
        """Outward rounding onto the grid ``Z / denominator``."""
        lo = Fraction(floor(self.lo * denominator), denominator)
        hi = Fraction(ceil(self.hi * denominator), denominator)
        return RationalInterval(lo, hi)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        o = RationalInterval.coerce(other)
        return RationalInterval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return RationalInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        o = RationalInterval.coerce(other)
        return RationalInterval(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other):
        return RationalInterval.coerce(other) - self

    def __mul__(self, other):
        o = RationalInterval.coerce(other)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RationalInterval(min(products), max(products))

    __rmul__ = __mul__

    def reciprocal(self) -> "RationalInterval":
        if self.lo <= 0 <= self.hi:
            raise DomainError("division by an interval containing zero")
        return RationalInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * RationalInterval.coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return RationalInterval.coerce(other) * self.reciprocal()

    def __pow__(self, n: int):
        if n < 0:
            return self.reciprocal() ** (-n)
        if n == 0:
            return RationalInterval.point(1)
        a, b = self.lo**n, self.hi**n
        if n % 2 == 0 and self.lo < 0 < self.hi:
            return RationalInterval(Fraction(0), max(a, b))
        return RationalInterval(min(a, b), max(a, b))

    def to_json(self) -> dict:
        return {"lo": fraction_str(self.lo), "hi": fraction_str(self.hi)}

    @classmethod
    def from_json(cls, data: dict) -> "RationalInterval":
        return cls(Fraction(data["lo"]), Fraction(data["hi"]))

    def __str__(self):
        if self.is_point:
            return f"[{self.lo}]"
        return f"[{self.lo}, {self.hi}]"


# polynomials (coefficients listed from the constant term upward) -----------


def poly_eval(coeffs: Sequence[Number], x: Number) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_sign(coeffs: Sequence[Number], x: Number) -> int:
    v = poly_eval(coeffs, x)
    return (v > 0) - (v < 0)


def poly_range(coeffs: Sequence[Number], x: RationalInterval) -> RationalInterval:
    """Enclosure of a polynomial over a nonnegative interval.

    The positive and negative coefficient parts are each nondecreasing on
    ``[0, inf)``, which keeps the enclosure exact at point arguments.
    """
    if x.lo < 0:
        raise DomainError("poly_range needs a nonnegative argument interval")
    pos = [c if c > 0 else 0 for c in coeffs]
    neg = [-c if c < 0 else 0 for c in coeffs]
    if x.is_point:
        v = poly_eval(coeffs, x.lo)
        return RationalInterval(v, v)
    return RationalInterval(
        poly_eval(pos, x.lo) - poly_eval(neg, x.hi),
        poly_eval(pos, x.hi) - poly_eval(neg, x.lo),
    )


def poly_mul(a: Sequence[Number], b: Sequence[Number]) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_add(a: Sequence[Number], b: Sequence[Number]) -> list:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def poly_trim(a: Sequence[Number]) -> list:
    out = list(a)
    while out and out[-1] == 0:
        out.pop()
    return out


def bisect_step(coeffs: Sequence[Number], iv: RationalInterval) -> RationalInterval:
    """One bisection step keeping a sign change of ``coeffs`` inside ``iv``."""
    if iv.is_point:
        return iv
    m = iv.mid
    sm = poly_sign(coeffs, m)
    if sm == 0:
        return RationalInterval(m, m)
    slo = poly_sign(coeffs, iv.lo)
    if slo == 0:
        return RationalInterval(iv.lo, iv.lo)
    if slo * sm < 0:
        return RationalInterval(iv.lo, m)
    return RationalInterval(m, iv.hi)


def bisect_root(coeffs: Sequence[Number], iv: RationalInterval, width) -> RationalInterval:
    width = as_fraction(width)
    slo, shi = poly_sign(coeffs, iv.lo), poly_sign(coeffs, iv.hi)
    if slo == 0:
        return RationalInterval.point(iv.lo)
    if shi == 0:
        return RationalInterval.point(iv.hi)
    if slo * shi > 0:
        raise DomainError(f"polynomial does not change sign on {iv}")
    while iv.width > width:
        iv = bisect_step(coeffs, iv)
    return iv


def isolating_factor(coeffs: Sequence[int], iv: RationalInterval) -> tuple[int, ...]:
    """Irreducible integer factor of ``coeffs`` with a sign change on ``iv``.

    Falls back to the input when no single factor changes sign (which only
    happens for roots of even multiplicity).
    """
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly([int(c) for c in reversed(poly_trim(coeffs))], x)
    _, factors = poly.factor_list()
    for factor, _mult in factors:
        c = [int(v) for v in reversed(factor.all_coeffs())]
        if len(c) < 2:
            continue
        slo, shi = poly_sign(c, iv.lo), poly_sign(c, iv.hi)
        if slo * shi < 0 or (iv.is_point and slo == 0):
            return tuple(c)
    return tuple(int(c) for c in poly_trim(coeffs))


# logarithms ----------------------------------------------------------------

_LOG_TERMS = 48


def _atanh_series(z: Fraction, terms: int = _LOG_TERMS) -> RationalInterval:
    """Enclosure of 2*atanh(z) for 0 <= z <= 1/3."""
    total = Fraction(0)
    z2 = z * z
    power = z
    for j in range(terms):
        total += power / (2 * j + 1)
        power *= z2
    # remaining terms are bounded by a geometric series in z^2
    tail = power / ((2 * terms + 1) * (1 - z2))
    return RationalInterval(2 * total, 2 * (total + tail))


_LOG2 = _atanh_series(Fraction(1, 3)).round_out()


def log_enclosure(x) -> RationalInterval:
    """Certified enclosure of the natural logarithm of a positive rational."""
    x = as_fraction(x)
    if x <= 0:
        raise DomainError("logarithm of a nonpositive number")
    k = x.numerator.bit_length() - x.denominator.bit_length()
    y = x / Fraction(2) ** k
    while y >= 2:
        y /= 2
        k += 1
    while y < 1:
        y *= 2
        k -= 1
    z = (y - 1) / (y + 1)
    return (_LOG2 * k + _atanh_series(z)).round_out()


def log_interval(iv: RationalInterval) -> RationalInterval:
    return RationalInterval(log_enclosure(iv.lo).lo, log_enclosure(iv.hi).hi)
