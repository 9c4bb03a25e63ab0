"""Independent reference computations used to cross-check the package.

Nothing here reuses the package's expansion engine or automata; the brute
force routines work directly from the definitions with integer or float
arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

# frozen high-precision reference values (mpmath, 40 digits)
TRIBONACCI = "1.839286755214161132551852564653286600424"
GOLDEN = "1.61803398874989484820458683436563811772"
ONE_PLUS_SQRT3 = "2.732050807568877293527446341505872366943"
TWO_POW_MINUS_TWO_THIRDS = "0.6299605249474365823836053036391141752851"



def kl_display_prefix(M: int) -> tuple[int, ...]:
    """Eight leading digits of alpha(q_KL) from the published odd/even templates."""
    k, odd = divmod(M, 2)
    if odd:
        return (k + 1, k + 1, k, k + 1, k, k, k + 1, k + 1)
    return (k + 1, k, k - 1, k + 1, k - 1, k, k + 1, k)


@lru_cache(maxsize=8)
def all_words(M: int, n: int) -> np.ndarray:
    return np.array(list(product(range(M + 1), repeat=n)), dtype=np.int64).reshape(-1, n)


def brute_live_words(x: Fraction, q: Fraction, M: int, depth: int) -> list[tuple[int, ...]]:
    """Every length-``depth`` word whose remainder stays in [0, M/(q-1)].

    With q = a/b and x = u/v, the scaled remainder after n digits is
    R = u a^n - v sum c_i a^(n-i) b^i, and the word is feasible iff
    0 <= R and R (a - b) <= M b v b^n.  Evaluated for all words at once.
    """
    a, b = q.numerator, q.denominator
    u, v = x.numerator, x.denominator
    n = depth
    weights = [v * a ** (n - i) * b**i for i in range(1, n + 1)]
    head = u * a**n
    bound = M * b * v * b**n
    worst = max(head, sum(weights) * M) * (a - b)
    if worst < 2**62 and bound < 2**62:
        words = all_words(M, n)
        R = head - words @ np.array(weights, dtype=np.int64)
        ok = (R >= 0) & (R * (a - b) <= bound)
        return [tuple(int(c) for c in w) for w in words[ok]]
    out = []
    for w in product(range(M + 1), repeat=n):
        R = head - sum(c * wt for c, wt in zip(w, weights))
        if R >= 0 and R * (a - b) <= bound:
            out.append(w)
    return out


def prefix_violates(word, alpha, M: int, strict: bool) -> bool:
    """Direct check of every tail of ``word`` against alpha and its reflection.

    A tail after a digit < M violates when it first differs from alpha
    upward; after a digit > 0 when it first differs from reflect(alpha)
    downward.  With ``strict`` a full-window tie also counts.
    """
    n, L = len(word), len(alpha)
    refl = [M - a for a in alpha]
    for i in range(n):
        tail = word[i + 1 : i + 1 + L]
        if word[i] < M:
            for t, a in zip(tail, alpha):
                if t != a:
                    if t > a:
                        return True
                    break
            else:
                if strict and len(tail) == L:
                    return True
        if word[i] > 0:
            for t, a in zip(tail, refl):
                if t != a:
                    if t < a:
                        return True
                    break
            else:
                if strict and len(tail) == L:
                    return True
    return False


def float_pi(pre, period, qs: np.ndarray) -> np.ndarray:
    """pi_q(pre period^inf) for an array of q values, in floating point."""
    x = 1.0 / qs
    total = np.zeros_like(qs)
    power = np.ones_like(qs)
    for c in pre:
        power = power * x
        total += c * power
    cyc = np.zeros_like(qs)
    inner = np.ones_like(qs)
    for e in period:
        inner = inner * x
        cyc += e * inner
    return total + power * cyc / (1.0 - inner)


def float_sign_changes(values: np.ndarray) -> np.ndarray:
    """Indices i with a sign change (or exact zero) between values[i] and values[i+1]."""
    s = np.sign(values)
    return np.nonzero(s[:-1] * s[1:] <= 0)[0]


def sympy_roots_in(coeffs_low_first, lo: Fraction, hi: Fraction, eps: Fraction):
    """Isolating intervals (as Fraction pairs) of the real roots in [lo, hi], via sympy."""
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly([int(c) for c in reversed(coeffs_low_first)], x)
    out = []
    for (a, b), _mult in poly.intervals(inf=sympy.Rational(lo.numerator, lo.denominator),
                                        sup=sympy.Rational(hi.numerator, hi.denominator),
                                        eps=sympy.Rational(eps.numerator, eps.denominator)):
        out.append((Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q))))
    return out


def sympy_factor_with_root(coeffs_low_first, lo: Fraction, hi: Fraction):
    """Irreducible factor (low-first integer coefficients) that vanishes in (lo, hi)."""
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly([int(c) for c in reversed(coeffs_low_first)], x)
    for f, _m in poly.factor_list()[1]:
        if f.count_roots(sympy.Rational(lo.numerator, lo.denominator),
                         sympy.Rational(hi.numerator, hi.denominator)) > 0:
            return tuple(int(c) for c in reversed(f.all_coeffs()))
    raise ValueError("no factor has a root in the interval")


def canonical_pairs_brute(M: int, period_bound: int, preperiod_bound: int):
    """Distinct eventually periodic sequences as (pre, period), canonicalized by hand.

    The period is reduced to its primitive root, then preperiod digits that
    equal the last period digit are rotated into the period.
    """
    out = set()
    for p in range(preperiod_bound + 1):
        for pre in product(range(M + 1), repeat=p):
            for r in range(1, period_bound + 1):
                for per in product(range(M + 1), repeat=r):
                    per = list(per)
                    for d in range(1, r + 1):
                        if r % d == 0 and per == per[:d] * (r // d):
                            per = per[:d]
                            break
                    pre2 = list(pre)
                    while pre2 and pre2[-1] == per[-1]:
                        per = [pre2.pop()] + per[:-1]
                    out.add((tuple(pre2), tuple(per)))
    return sorted(out)


def _sympy_value(pre, period, q):
    import sympy

    head = sum(sympy.Integer(c) / q ** (i + 1) for i, c in enumerate(pre))
    r = len(period)
    cyc = sum(sympy.Integer(e) / q ** (j + 1) for j, e in enumerate(period))
    return head + cyc / q ** len(pre) / (1 - q ** (-r))


def grid_scan_roots(M: int, lo: float, hi: float, seqs, points: int = 10_000, tol: float = 1e-8):
    """Pairs (a, b) with pi_q(a) - pi_q(b) = 1 somewhere in (lo, hi).

    A float grid flags pairs whose difference changes sign between grid
    points or comes within ``tol`` of zero; sympy then isolates the exact
    roots of the numerator polynomial.  Returns a list of
    (a, b, factor_low_first, root_lo, root_hi).
    """
    import sympy

    qs = np.linspace(lo, hi, points)
    V = np.array([float_pi(pre, per, qs) for pre, per in seqs])
    flagged = []
    for i in range(len(seqs)):
        G = V[i][None, :] - V - 1.0
        s = np.sign(G)
        hit = (s[:, :-1] * s[:, 1:] <= 0).any(axis=1) | (np.abs(G) < tol).any(axis=1)
        hit[i] = False
        flagged.extend((i, int(j)) for j in np.nonzero(hit)[0])

    q = sympy.Symbol("q")
    lo_f, hi_f = Fraction(str(lo)), Fraction(str(hi))
    cache: dict = {}
    out = []
    for i, j in flagged:
        expr = sympy.together(_sympy_value(*seqs[i], q) - _sympy_value(*seqs[j], q) - 1)
        num, _den = sympy.fraction(expr)
        poly = sympy.Poly(sympy.expand(num), q)
        key = tuple(poly.all_coeffs())
        if key not in cache:
            found = []
            coeffs = [int(c) for c in reversed(poly.all_coeffs())]
            for a, b in sympy_roots_in(coeffs, lo_f, hi_f, Fraction(1, 10**15)):
                if a > lo_f and b < hi_f:
                    found.append((sympy_factor_with_root(coeffs, a, b) if a != b else None, a, b))
            cache[key] = found
        for factor, a, b in cache[key]:
            out.append((seqs[i], seqs[j], factor, a, b))
    return out


def _golden_sign(a: int, b: int) -> int:
    """Sign of a + b*phi with phi = (1 + sqrt5)/2, via 2(a + b phi) = (2a + b) + b sqrt5."""
    u = 2 * a + b
    if u >= 0 and b >= 0:
        return 0 if u == 0 and b == 0 else 1
    if u <= 0 and b <= 0:
        return -1
    # opposite signs: compare u^2 with 5 b^2
    return (1 if u > 0 else -1) * ((u * u > 5 * b * b) - (u * u < 5 * b * b))


def golden_live_words(x: int, depth: int) -> list[tuple[int, ...]]:
    """Feasible digit words for integer x at q = phi (M = 1), exact in Z[phi].

    The remainder a + b phi is multiplied by phi as b + (a + b) phi; it must
    stay in [0, phi] = [0, 1/(phi - 1)].
    """
    out = []
    for w in product((0, 1), repeat=depth):
        a, b = x, 0
        ok = True
        for c in w:
            a, b = b - c, a + b
            if _golden_sign(a, b) < 0 or _golden_sign(a, b - 1) > 0:
                ok = False
                break
        if ok:
            out.append(w)
    return out
