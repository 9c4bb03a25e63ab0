"""Certified dimension enclosures for the univoque set from admissible-word automata.

A word is scanned left to right while tracking, for every earlier position
whose tail must stay below alpha(q) (or whose reflected tail must), how many
symbols of the alpha prefix it has matched so far.  The set of those match
lengths is a finite automaton state.  Two automata come out of this:

* the *upper* automaton lets a comparison that stays tied for L symbols
  pass, so every unique expansion is an infinite path through it and
  counting only words that extend forever still bounds the prefixes;
* the *strict* automaton treats such a tie as a violation, so every infinite
  path through it is a unique expansion (a subshift of finite type).

Entropies are bounded through integer matrix powers and converted to
dimensions by dividing by log q.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import networkx as nx

from .arith import BaseEnclosure
from .constants import komornik_loreti
from .engine import alpha_expansion
from .errors import DomainError, QExpansionError
from .interval import RationalInterval, fraction_str, log_enclosure
from .u2 import theorem_bound

_GRID = 10**20
_POWER_STEPS = 96


@dataclass(frozen=True)
class WordCountResult:
    n: int
    lower_count: int
    upper_count: int
    L: int

    def to_json(self) -> dict:
        return {"n": self.n, "lowerCount": self.lower_count, "upperCount": self.upper_count, "L": self.L}


class _Automaton:
    """Match-length automaton for one alpha prefix.

    A state is (above, below): frozensets of match lengths of the open
    comparisons against alpha and against reflect(alpha) respectively.
    """

    def __init__(self, alpha: Sequence[int], M: int, strict: bool):
        self.alpha = tuple(alpha)
        self.refl = tuple(M - a for a in alpha)
        self.M = M
        self.L = len(alpha)
        self.strict = strict
        self._cache: dict = {}

    start = (frozenset(), frozenset())

    def step(self, state, c: int):
        """Next state after symbol c, or None if c creates a violation."""
        key = (state, c)
        if key in self._cache:
            return self._cache[key]
        above, below = state
        nxt_above, nxt_below = set(), set()
        ok = True
        for ln in above:
            a = self.alpha[ln]
            if c > a:
                ok = False
                break
            if c == a:
                if ln + 1 < self.L:
                    nxt_above.add(ln + 1)
                elif self.strict:
                    ok = False
                    break
        if ok:
            for ln in below:
                a = self.refl[ln]
                if c < a:
                    ok = False
                    break
                if c == a:
                    if ln + 1 < self.L:
                        nxt_below.add(ln + 1)
                    elif self.strict:
                        ok = False
                        break
        out = None
        if ok:
            if c < self.M:
                nxt_above.add(0)
            if c > 0:
                nxt_below.add(0)
            out = (frozenset(nxt_above), frozenset(nxt_below))
        self._cache[key] = out
        return out

    def graph(self):
        """Reachable states and, per state, the list of (symbol, successor index)."""
        index = {self.start: 0}
        states = [self.start]
        edges: list[list[tuple[int, int]]] = []
        i = 0
        while i < len(states):
            row = []
            for c in range(self.M + 1):
                t = self.step(states[i], c)
                if t is None:
                    continue
                if t not in index:
                    index[t] = len(states)
                    states.append(t)
                row.append((c, index[t]))
            edges.append(row)
            i += 1
        return states, edges


class WordAutomaton:
    """Trimmed admissibility automaton for one base, window and strictness."""

    def __init__(self, base: BaseEnclosure, L: int, strict: bool):
        self.alpha = _alpha_prefix(base, L)
        self.M = base.M
        self.states, self.edges = _Automaton(self.alpha, base.M, strict).graph()
        self.succ = [[t for _, t in row] for row in self.edges]
        self.alive = _trim(self.succ)

    def run(self, word: Sequence[int]) -> Optional[int]:
        """State index after reading ``word`` from the start, or None if rejected."""
        s = 0
        for c in word:
            nxt = dict(self.edges[s]).get(c)
            if nxt is None:
                return None
            s = nxt
        return s

    def accepts(self, word: Sequence[int]) -> bool:
        """True when ``word`` labels a path that continues forever."""
        s = self.run(word)
        return s is not None and s in self.alive

    def count(self, n: int, trimmed: bool = True) -> int:
        return _count_words(self.succ, n, self.alive if trimmed else None)


def _count_words(succ: list[list[int]], n: int, alive: Optional[set] = None) -> int:
    vec = {0: 1}
    if alive is not None and 0 not in alive:
        return 0
    for _ in range(n):
        nxt: dict = {}
        for s, cnt in vec.items():
            for t in succ[s]:
                if alive is None or t in alive:
                    nxt[t] = nxt.get(t, 0) + cnt
        vec = nxt
    return sum(vec.values())


def _trim(succ: list[list[int]]) -> set:
    """States from which an infinite path exists."""
    alive = set(range(len(succ)))
    changed = True
    while changed:
        changed = False
        for s in list(alive):
            if not any(t in alive for t in succ[s]):
                alive.discard(s)
                changed = True
    return alive


def _alpha_prefix(base: BaseEnclosure, L: int) -> tuple[int, ...]:
    return alpha_expansion(base).prefix(L)


def admissible_word_count(base: BaseEnclosure, n: int, L: int) -> WordCountResult:
    if n < 1 or L < 1:
        raise DomainError("n and L must be positive")
    upper = WordAutomaton(base, L, strict=False).count(n)
    lower = WordAutomaton(base, L, strict=True).count(n)
    return WordCountResult(n, lower, upper, L)


# spectral bounds ------------------------------------------------------------


def _sccs(nodes: Iterable[int], succ: list[list[int]]) -> list[list[int]]:
    nodes = set(nodes)
    g = nx.DiGraph()
    g.add_nodes_from(nodes)
    g.add_edges_from((s, t) for s in nodes for t in succ[s] if t in nodes)
    return [sorted(c) for c in nx.strongly_connected_components(g)]


def _power_vector(comp: list[int], succ, steps: int) -> dict:
    members = set(comp)
    v = {s: 1 for s in comp}
    for _ in range(steps):
        v = {s: sum(v[t] for t in succ[s] if t in members) for s in comp}
    return v


def _ratios(comp, succ, v):
    members = set(comp)
    return [Fraction(sum(v[t] for t in succ[s] if t in members), v[s]) for s in comp]


def spectral_radius_upper(succ: list[list[int]], nodes: Iterable[int], steps: int = _POWER_STEPS) -> Fraction:
    """Rational upper bound on the spectral radius of the graph on ``nodes``.

    The radius is the maximum over strongly connected components; a simple
    cycle contributes exactly 1, a trivial component 0, and any other
    component the Collatz-Wielandt bound max (Av)_i / v_i with v = A^m 1.
    """
    best = Fraction(0)
    for comp in _sccs(nodes, succ):
        members = set(comp)
        out_deg = [sum(1 for t in succ[s] if t in members) for s in comp]
        if max(out_deg) == 0:
            continue
        if max(out_deg) == 1:
            best = max(best, Fraction(1))
            continue
        v = _power_vector(comp, succ, steps)
        best = max(best, max(_ratios(comp, succ, v)))
    return best


def spectral_radius_lower(succ: list[list[int]], nodes: Iterable[int], steps: int = _POWER_STEPS) -> Fraction:
    """Rational lower bound: the best Collatz-Wielandt min-ratio over components."""
    best = Fraction(0)
    for comp in _sccs(nodes, succ):
        members = set(comp)
        if not any(t in members for s in comp for t in succ[s]):
            continue
        v = _power_vector(comp, succ, steps)
        if min(v.values()) == 0:
            continue
        best = max(best, min(_ratios(comp, succ, v)))
    return best


# dimension ------------------------------------------------------------------


@dataclass(frozen=True)
class DimensionEnclosure:
    q: BaseEnclosure
    lo: Fraction
    hi: Fraction
    n: int
    L: int

    @property
    def interval(self) -> RationalInterval:
        return RationalInterval(self.lo, self.hi)

    def to_json(self) -> dict:
        return {
            "q": self.q.to_json(),
            "lo": fraction_str(self.lo),
            "hi": fraction_str(self.hi),
            "n": self.n,
            "L": self.L,
        }


def _round_down(x: Fraction) -> Fraction:
    return Fraction(x.numerator * _GRID // x.denominator, _GRID)


def _round_up(x: Fraction) -> Fraction:
    return Fraction(-((-x.numerator * _GRID) // x.denominator), _GRID)


def _log_ratio_upper(value: Fraction, scale: int, q_lo: Fraction) -> Fraction:
    """Upper bound on log(value) / (scale * log q_lo), for value >= 1."""
    if value <= 1:
        return Fraction(0)
    return log_enclosure(value).hi / (scale * log_enclosure(q_lo).lo)


def dim_u_q(base: BaseEnclosure, n: int, L: int) -> DimensionEnclosure:
    """Enclosure of the Hausdorff dimension of the univoque set in base q."""
    if n < 1 or L < 1:
        raise DomainError("n and L must be positive")
    up = WordAutomaton(base, L, strict=False)
    low = WordAutomaton(base, L, strict=True)

    hi = Fraction(1)
    m = n
    while m >= 1:
        hi = min(hi, _log_ratio_upper(Fraction(up.count(m)), m, base.q.lo))
        if m % 2:
            break
        m //= 2
    hi = min(hi, _log_ratio_upper(spectral_radius_upper(up.succ, up.alive), 1, base.q.lo))

    lo = Fraction(0)
    rho = spectral_radius_lower(low.succ, low.alive)
    if rho > 1:
        lo = log_enclosure(rho).lo / log_enclosure(base.q.hi).hi
    lo = min(_round_down(max(lo, Fraction(0))), Fraction(1))
    hi = min(_round_up(hi), Fraction(1))
    if lo > hi:
        raise QExpansionError("dimension bounds crossed; automaton bounds are inconsistent")
    return DimensionEnclosure(base, lo, hi, n, L)


# scans ----------------------------------------------------------------------


class Membership(enum.Enum):
    YES = "Yes"
    NO = "No"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class ScanRecord:
    q: BaseEnclosure
    dimension: Optional[DimensionEnclosure]
    bound: Optional[RationalInterval]
    in_O: Membership
    error: Optional[str] = None

    def to_json(self) -> dict:
        out = {
            "q": self.q.to_json(),
            "inO": self.in_O.value,
            "dimension": self.dimension.to_json() if self.dimension else None,
            "bound": self.bound.to_json() if self.bound else None,
        }
        if self.error is not None:
            out["error"] = self.error
        return out


def _scan_one(args) -> ScanRecord:
    base, n, L = args
    try:
        d = dim_u_q(base, n, L)
    except QExpansionError as exc:
        return ScanRecord(base, None, None, Membership.UNDETERMINED, f"{type(exc).__name__}: {exc}")
    if d.hi < Fraction(1, 2):
        flag = Membership.YES
    elif d.lo >= Fraction(1, 2):
        flag = Membership.NO
    else:
        flag = Membership.UNDETERMINED
    return ScanRecord(base, d, theorem_bound(d.interval), flag)


def scan_dimension(M: int, grid: Sequence[BaseEnclosure], n: int, L: int, jobs: int = 1) -> list[ScanRecord]:
    kl = komornik_loreti(M).q
    for base in grid:
        if base.M != M:
            raise DomainError("grid base has a different alphabet")
        if not (base.q.lo > kl.hi and base.q.hi < M + 1):
            raise DomainError(f"grid point {base.q} is not inside (q_KL, {M + 1})")
    tasks = [(b, n, L) for b in grid]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_scan_one, tasks))
    return [_scan_one(t) for t in tasks]


def linear_grid(M: int, lo, hi, steps: int) -> list[BaseEnclosure]:
    lo, hi = Fraction(lo), Fraction(hi)
    if steps < 1:
        raise DomainError("steps must be positive")
    if steps == 1:
        return [BaseEnclosure.rational(M, lo)]
    return [BaseEnclosure.rational(M, lo + (hi - lo) * i / (steps - 1)) for i in range(steps)]


def decimal_bound(x: Fraction, digits: int = 15, up: bool = False) -> str:
    """x rounded to ``digits`` decimals, outward in the requested direction."""
    scale = 10**digits
    k = -((-x.numerator * scale) // x.denominator) if up else (x.numerator * scale) // x.denominator
    sign = "-" if k < 0 else ""
    k = abs(k)
    return f"{sign}{k // scale}.{k % scale:0{digits}d}"


CSV_COLUMNS = ("q_lo", "q_hi", "dim_lo", "dim_hi", "bound_lo", "bound_hi", "inO")


def records_to_csv(records: Sequence[ScanRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        row = [decimal_bound(r.q.q.lo), decimal_bound(r.q.q.hi, up=True)]
        if r.dimension is None:
            row += ["", "", "", ""]
        else:
            row += [
                decimal_bound(r.dimension.lo),
                decimal_bound(r.dimension.hi, up=True),
                decimal_bound(r.bound.lo),
                decimal_bound(r.bound.hi, up=True),
            ]
        row.append(r.in_O.value)
        writer.writerow(row)
    return buf.getvalue()


def records_to_json(records: Sequence[ScanRecord]) -> str:
    return json.dumps([r.to_json() for r in records], sort_keys=True, indent=2)
