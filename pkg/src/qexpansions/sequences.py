"""Digit words, eventually periodic sequences and Thue-Morse constructions."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from math import lcm
from typing import Iterable, Sequence

from .errors import DigitRangeError, DomainError


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def _check_digits(digits: Sequence[int], lo: int, hi: int) -> tuple[int, ...]:
    out = tuple(int(d) for d in digits)
    for d in out:
        if d < lo or d > hi:
            raise DigitRangeError(f"digit {d} outside [{lo}, {hi}]")
    return out


@dataclass(frozen=True)
class DigitWord:
    digits: tuple[int, ...]
    M: int

    def __post_init__(self):
        if self.M < 1:
            raise DomainError("alphabet maximum M must be positive")
        object.__setattr__(self, "digits", _check_digits(self.digits, 0, self.M))

    def __len__(self):
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __getitem__(self, item):
        return self.digits[item]

    def __add__(self, other: "DigitWord") -> "DigitWord":
        return DigitWord(self.digits + tuple(other), self.M)

    def __str__(self):
        return format_digits(self.digits)


def _primitive_root(word: tuple[int, ...]) -> tuple[int, ...]:
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word[:p] * (n // p) == word:
            return word[:p]
    return word


def canonical_form(pre: Sequence[int], period: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Primitive period and minimal preperiod for ``pre (period)^inf``."""
    pre, period = tuple(pre), tuple(period)
    if not period:
        raise DomainError("period must be nonempty")
    period = _primitive_root(period)
    while pre and pre[-1] == period[-1]:
        pre = pre[:-1]
        period = period[-1:] + period[:-1]
    return pre, period


class _Periodic:
    """Shared indexing logic for eventually periodic integer sequences."""

    pre: tuple[int, ...]
    period: tuple[int, ...]

    def digit(self, i: int) -> int:
        """The i-th term, counting from 1."""
        if i < 1:
            raise IndexError("sequence indices start at 1")
        p = len(self.pre)
        if i <= p:
            return self.pre[i - 1]
        return self.period[(i - p - 1) % len(self.period)]

    def prefix(self, n: int) -> tuple[int, ...]:
        p = len(self.pre)
        if n <= p:
            return self.pre[:n]
        r = len(self.period)
        reps = (n - p) // r + 1
        return self.pre + (self.period * reps)[: n - p]

    @property
    def cycle_length(self) -> int:
        """Number of distinct tail positions: every shift is a shift by fewer."""
        return len(self.pre) + len(self.period)

    def __str__(self):
        return format_periodic(self.pre, self.period)


@dataclass(frozen=True)
class EventuallyPeriodicSeq(_Periodic):
    pre: tuple[int, ...]
    period: tuple[int, ...]
    M: int

    def __post_init__(self):
        if self.M < 1:
            raise DomainError("alphabet maximum M must be positive")
        pre = _check_digits(self.pre, 0, self.M)
        period = _check_digits(self.period, 0, self.M)
        pre, period = canonical_form(pre, period)
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "period", period)

    @classmethod
    def parse(cls, text: str, M: int) -> "EventuallyPeriodicSeq":
        pre, period = parse_periodic(text)
        return cls(pre, period, M)

    @classmethod
    def finite(cls, digits: Iterable[int], M: int) -> "EventuallyPeriodicSeq":
        return cls(tuple(digits), (0,), M)

    @property
    def is_finite(self) -> bool:
        return self.period == (0,)

    def prepend(self, word: Iterable[int]) -> "EventuallyPeriodicSeq":
        return EventuallyPeriodicSeq(tuple(word) + self.pre, self.period, self.M)

    def key(self) -> tuple:
        return (self.pre, self.period)


def lex_compare(s: EventuallyPeriodicSeq, t: EventuallyPeriodicSeq) -> Ordering:
    if s.M != t.M:
        raise DomainError("cannot compare sequences over different alphabets")
    if s.key() == t.key():
        return Ordering.EQUAL
    n = max(len(s.pre), len(t.pre)) + lcm(len(s.period), len(t.period))
    a, b = s.prefix(n), t.prefix(n)
    if a < b:
        return Ordering.LESS
    if a > b:
        return Ordering.GREATER
    return Ordering.EQUAL


def compare_words(u: Sequence[int], v: Sequence[int]) -> Ordering:
    """First-difference comparison of two equal-length words."""
    for x, y in zip(u, v):
        if x != y:
            return Ordering.LESS if x < y else Ordering.GREATER
    return Ordering.EQUAL


def reflect(s):
    """Digitwise ``M - c`` on words and sequences."""
    if isinstance(s, DigitWord):
        return DigitWord(tuple(s.M - d for d in s.digits), s.M)
    return EventuallyPeriodicSeq(
        tuple(s.M - d for d in s.pre), tuple(s.M - d for d in s.period), s.M
    )


def shift(s: EventuallyPeriodicSeq, n: int) -> EventuallyPeriodicSeq:
    if n < 0:
        raise DomainError("shift amount must be nonnegative")
    p = len(s.pre)
    if n <= p:
        return EventuallyPeriodicSeq(s.pre[n:], s.period, s.M)
    k = (n - p) % len(s.period)
    return EventuallyPeriodicSeq((), s.period[k:] + s.period[:k], s.M)


def thue_morse(n: int) -> DigitWord:
    """tau_1 ... tau_n of the Thue-Morse sequence (tau_i = parity of bin(i))."""
    if n < 1:
        raise DomainError("n must be positive")
    return DigitWord(tuple(i.bit_count() & 1 for i in range(1, n + 1)), 1)


def kl_sequence(M: int, n: int) -> DigitWord:
    """First n digits of the quasi-greedy expansion of 1 at the Komornik-Loreti base."""
    if M < 1 or n < 1:
        raise DomainError("M and n must be positive")
    k, odd = divmod(M, 2)
    tau = [i.bit_count() & 1 for i in range(n + 1)]
    if odd:
        digits = [k + tau[i] for i in range(1, n + 1)]
    else:
        digits = [k + tau[i] - tau[i - 1] for i in range(1, n + 1)]
    return DigitWord(tuple(digits), M)


@dataclass(frozen=True)
class DiffSeries(_Periodic):
    """Coefficients d_i of g(x) = 1 + sum d_i x^i, eventually periodic, |d_i| <= M."""

    pre: tuple[int, ...]
    period: tuple[int, ...]
    M: int

    def __post_init__(self):
        if self.M < 1:
            raise DomainError("alphabet maximum M must be positive")
        pre = _check_digits(self.pre, -self.M, self.M)
        period = _check_digits(self.period, -self.M, self.M)
        pre, period = canonical_form(pre, period)
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "period", period)

    @classmethod
    def parse(cls, text: str, M: int) -> "DiffSeries":
        pre, period = parse_periodic(text)
        return cls(pre, period, M)

    @classmethod
    def from_pair(cls, a: EventuallyPeriodicSeq, b: EventuallyPeriodicSeq) -> "DiffSeries":
        """d_i = b_i - a_i, the series whose root solves pi_q(a) = pi_q(b) + 1."""
        if a.M != b.M:
            raise DomainError("sequences over different alphabets")
        p = max(len(a.pre), len(b.pre))
        r = lcm(len(a.period), len(b.period))
        da, db = a.prefix(p + r), b.prefix(p + r)
        d = tuple(y - x for x, y in zip(da, db))
        return cls(d[:p], d[p:], a.M)

    def negated(self) -> "DiffSeries":
        return DiffSeries(tuple(-d for d in self.pre), tuple(-d for d in self.period), self.M)

    def positive_part(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return tuple(max(d, 0) for d in self.pre), tuple(max(d, 0) for d in self.period)

    def negative_part(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return tuple(max(-d, 0) for d in self.pre), tuple(max(-d, 0) for d in self.period)

    def key(self) -> tuple:
        return (self.pre, self.period)


# text format ----------------------------------------------------------------

_GROUP = re.compile(r"\(([^()]*)\)")


def _parse_group(body: str) -> tuple[int, ...]:
    body = body.strip()
    if not body:
        return ()
    try:
        if "," in body:
            toks = body.split(",")
            if toks[-1].strip() == "":
                toks.pop()
            return tuple(int(tok) for tok in toks)
        compact = "".join(body.split())
        tokens = re.findall(r"-?\d", compact)
        if "".join(tokens) != compact:
            raise ValueError(body)
        return tuple(int(t) for t in tokens)
    except ValueError as exc:
        raise DomainError(f"bad digit group {body!r}") from exc


def parse_periodic(text: str) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Parse ``pre(period)``; ``(pre)(period)`` and bare finite words also accepted."""
    text = text.strip().replace("−", "-")
    groups = list(_GROUP.finditer(text))
    if not groups:
        return _parse_group(text), (0,)
    last = groups[-1]
    if text[last.end():].strip():
        raise DomainError(f"trailing characters after period in {text!r}")
    head = text[: last.start()].strip()
    if len(groups) == 2 and groups[0].start() == 0 and groups[0].end() == last.start():
        pre = _parse_group(groups[0].group(1))
    elif len(groups) == 1:
        pre = _parse_group(head)
    else:
        raise DomainError(f"cannot parse sequence {text!r}")
    period = _parse_group(last.group(1))
    if not period:
        raise DomainError("period must be nonempty")
    return pre, period


def format_digits(digits: Sequence[int]) -> str:
    if any(d > 9 or d < 0 for d in digits):
        return ",".join(str(d) for d in digits)
    return "".join(str(d) for d in digits)


def _wide_group(digits: Sequence[int]) -> str:
    # a lone multi-digit entry keeps a trailing comma so "11" is not read as 1,1
    body = ",".join(str(d) for d in digits)
    return body + "," if len(digits) == 1 else body


def format_periodic(pre: Sequence[int], period: Sequence[int]) -> str:
    wide = any(d > 9 or d < 0 for d in tuple(pre) + tuple(period))
    if wide:
        head = f"({_wide_group(pre)})" if pre else ""
        return f"{head}({_wide_group(period)})"
    return f"{format_digits(pre)}({format_digits(period)})"
