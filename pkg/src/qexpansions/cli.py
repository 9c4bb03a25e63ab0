"""Command-line entry point: ``qexp <subcommand> ...``.

Every command prints one JSON document (keys sorted, rationals as "p/q")
carrying a provenance block.  Exit status 0 on success, 2 on domain or
precondition errors, 3 when a certificate could not be completed.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional

from . import __version__
from .arith import BaseEnclosure, RefinementBudget
from .constants import alpha_of_q, golden_ratio_general, komornik_loreti, resolve_base, v_membership_check
from .dimension import (
    admissible_word_count,
    decimal_bound,
    dim_u_q,
    linear_grid,
    records_to_csv,
    scan_dimension,
)
from .engine import (
    Verdict,
    enumerate_expansions,
    greedy_expansion,
    lazy_expansion,
    quasi_greedy_expansion,
    uniqueness_certificate,
)
from .errors import CertificationFailure, DomainError, PrecisionExhausted
from .interval import RationalInterval, as_fraction, fraction_str
from .sequences import DiffSeries, EventuallyPeriodicSeq, format_digits, parse_periodic
from .transversality import transversality_root, verify_inspection_inequalities, verify_star
from .u2 import check_u2_point, construct_u2_candidates, theorem_bound

EXIT_OK, EXIT_FAIL, EXIT_DOMAIN, EXIT_INCONCLUSIVE = 0, 1, 2, 3


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return fraction_str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2)


def _budget(args) -> RefinementBudget:
    return RefinementBudget(max_depth=args.max_depth, max_splits=args.max_splits)


def _provenance(args) -> dict:
    skip = {"func", "selftest_func"}
    config = {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}
    return {"tool": "qexpansions", "version": __version__, "config": config, "budget": _budget(args).to_json()}


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise DomainError(f"--{name.replace('_', '-')} is required")


def _base(args, attr: str = "q") -> BaseEnclosure:
    return resolve_base(args.M, getattr(args, attr), args.precision)


def _point(text: str, M: int):
    if "(" in text:
        return EventuallyPeriodicSeq.parse(text, M)
    return as_fraction(text)


# commands -------------------------------------------------------------------


def cmd_constants(args) -> dict:
    _need(args, "M")
    if args.which == "kl":
        enc = komornik_loreti(args.M, as_fraction(args.precision)).q
    elif args.which == "gr":
        enc = golden_ratio_general(args.M, args.precision).q
    else:
        _need(args, "q")
        base = _base(args)
        word = alpha_of_q(base, args.n, _budget(args))
        out = {"name": "alpha", "M": args.M, "q": base.to_json(), "digits": str(word)}
        if args.v_depth:
            out["V"] = v_membership_check(base, args.v_depth).to_json()
        return out
    return {"name": args.which, "M": args.M, "lo": _dec(enc.lo), "hi": _dec(enc.hi, up=True), "exact": enc.to_json()}


def _dec(x: Fraction, up: bool = False, digits: int = 15) -> str:
    return decimal_bound(x, digits, up)


def cmd_expand(args) -> dict:
    _need(args, "M", "q", "x")
    base = _base(args)
    x = _point(args.x, args.M)
    budget = _budget(args)
    if args.mode == "enumerate":
        tree = enumerate_expansions(x, base, args.depth, budget, on_ambiguous=args.on_ambiguous)
        out = tree.to_json()
        out["live"] = tree.count_lower
        return out
    fn = {"greedy": greedy_expansion, "quasi-greedy": quasi_greedy_expansion, "lazy": lazy_expansion}[args.mode]
    return {"mode": args.mode, "q": base.to_json(), "digits": str(fn(x, base, args.depth, budget))}


def cmd_unique(args) -> dict:
    _need(args, "M", "q", "seq")
    base = _base(args)
    seq = EventuallyPeriodicSeq.parse(args.seq, args.M)
    verdict = uniqueness_certificate(seq, base, args.depth)
    return {"seq": str(seq), "q": base.to_json(), "verdict": verdict.to_json()}


def cmd_root(args) -> dict:
    _need(args, "M", "diff", "lo", "hi")
    diff = DiffSeries.parse(args.diff, args.M)
    lo = komornik_loreti(args.M).q.lo if args.lo == "kl" else as_fraction(args.lo)
    window = RationalInterval(lo, as_fraction(args.hi))
    res = transversality_root(diff, window, as_fraction(args.root_precision), _budget(args))
    out = res.to_json()
    if res.q is not None:
        out["decimal"] = {"lo": _dec(res.q.q.lo), "hi": _dec(res.q.q.hi, up=True)}
    return {"diff": str(diff), "window": window.to_json(), "result": out}


def cmd_certify(args) -> dict:
    _need(args, "M")
    return verify_star(args.M).to_json()


def cmd_inspect(args) -> dict:
    _need(args, "M")
    return {"M": args.M, "certificates": [c.to_json() for c in verify_inspection_inequalities(args.M)]}


def cmd_u2(args) -> dict:
    _need(args, "M", "action")
    if args.action == "search":
        _need(args, "q_lo", "q_hi")
        window = RationalInterval(as_fraction(args.q_lo), as_fraction(args.q_hi))
        recs = construct_u2_candidates(args.M, window, args.period_bound, args.preperiod_bound, budget=_budget(args))
        out = {
            "window": window.to_json(),
            "records": [r.to_json() for r in recs],
            "constructive": sum(r.constructive for r in recs),
        }
        if args.json:
            Path(args.json).write_text(dumps(out) + "\n")
        return out
    _need(args, "q", "m", "a", "b")
    base = _base(args)
    w = parse_periodic(args.w)[0] if args.w else ()
    a = EventuallyPeriodicSeq.parse(args.a, args.M)
    b = EventuallyPeriodicSeq.parse(args.b, args.M)
    return check_u2_point(w, args.m, a, b, base, args.depth, _budget(args)).to_json()


def cmd_dim(args) -> dict:
    _need(args, "M", "q")
    base = _base(args)
    d = dim_u_q(base, args.n, args.L)
    counts = admissible_word_count(base, args.n, args.L)
    out = d.to_json()
    out["counts"] = counts.to_json()
    out["decimal"] = {"lo": _dec(d.lo), "hi": _dec(d.hi, up=True)}
    out["bound"] = theorem_bound(d.interval).to_json()
    return out


def cmd_scan(args):
    _need(args, "M", "q_lo", "q_hi")
    grid = linear_grid(args.M, as_fraction(args.q_lo), as_fraction(args.q_hi), args.steps)
    recs = scan_dimension(args.M, grid, args.n, args.L, jobs=args.jobs)
    if args.out == "csv":
        return records_to_csv(recs)
    return {"records": [r.to_json() for r in recs]}


# selftests ------------------------------------------------------------------


def _check(results, name, fn: Callable[[], bool]):
    try:
        ok = bool(fn())
    except Exception as exc:  # a selftest reports, it does not crash
        results.append({"name": name, "ok": False, "error": f"{type(exc).__name__}: {exc}"})
        return
    results.append({"name": name, "ok": ok})


def _raises(exc_type, fn) -> bool:
    try:
        fn()
    except exc_type:
        return True
    return False


def _selftest(command: str) -> list:
    r: list = []
    two = BaseEnclosure.rational(1, 2)
    if command == "constants":
        _check(r, "alpha at q=2, M=1 is all ones", lambda: alpha_of_q(two, 12).digits == (1,) * 12)
        _check(r, "alpha at q=2, M=2 is all ones", lambda: alpha_of_q(BaseEnclosure.rational(2, 2), 12).digits == (1,) * 12)
        _check(r, "q_GR(2) is exactly 2", lambda: golden_ratio_general(2).q == RationalInterval.point(2))
    elif command == "expand":
        _check(r, "1/2 in base 2 has two expansions", lambda: enumerate_expansions(Fraction(1, 2), two, 6).count_lower == 2)
        _check(r, "greedy 1/2 in base 2", lambda: greedy_expansion(Fraction(1, 2), two, 4).digits == (1, 0, 0, 0))
    elif command == "unique":
        zero = EventuallyPeriodicSeq((), (0,), 1)
        _check(r, "0^inf is unique", lambda: uniqueness_certificate(zero, two).kind is Verdict.UNIQUE)
    elif command == "root":
        _check(
            r,
            "(-1)^inf has its root at q=2",
            lambda: transversality_root(DiffSeries((), (-1,), 1), RationalInterval(Fraction(179, 100), 2)).q.q
            == RationalInterval.point(2),
        )
    elif command == "certify":
        _check(r, "M=7 evidence", lambda: verify_star(7).h_value == RationalInterval.point(Fraction(1, 12)))
    elif command == "inspect":
        _check(r, "M=3 closing bound", lambda: len(verify_inspection_inequalities(3)) == 2)
    elif command == "u2":
        zero = EventuallyPeriodicSeq((), (0,), 1)
        _check(r, "a=b=0^inf is not a U2 point", lambda: not check_u2_point((), 0, zero, zero, two).valid)
        _check(r, "bound of 0.7 is 0.4", lambda: theorem_bound(Fraction(7, 10)) == RationalInterval.point(Fraction(2, 5)))
        _check(r, "bound of 0.4 is 0", lambda: theorem_bound(Fraction(2, 5)) == RationalInterval.point(0))
        _check(
            r,
            "bound across the kink",
            lambda: theorem_bound(RationalInterval(Fraction(45, 100), Fraction(55, 100)))
            == RationalInterval(0, Fraction(1, 10)),
        )
        _check(
            r,
            "single-symbol periods give no constructive pair",
            lambda: not any(
                rec.constructive
                for rec in construct_u2_candidates(1, RationalInterval(Fraction(18, 10), Fraction(199, 100)), 1, 0)
            ),
        )
        _check(
            r,
            "window below q_KL is rejected",
            lambda: _raises(
                DomainError,
                lambda: construct_u2_candidates(1, RationalInterval(Fraction(162, 100), Fraction(17, 10)), 2, 2),
            ),
        )
    elif command == "dim":
        _check(r, "q=2 keeps every word", lambda: admissible_word_count(two, 10, 12).upper_count == 1024)
    elif command == "scan":
        _check(
            r,
            "grid point below q_KL is rejected",
            lambda: _raises(DomainError, lambda: scan_dimension(1, [BaseEnclosure.rational(1, Fraction(7, 4))], 8, 8)),
        )
    return r


# parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--M", type=int)
    common.add_argument("--precision", default="1e-12", help="precision for named bases")
    common.add_argument("--max-depth", type=int, default=4096)
    common.add_argument("--max-splits", type=int, default=400)
    common.add_argument("--output", help="write the result here instead of stdout")
    common.add_argument("--selftest", action="store_true", help="run this command's built-in checks")

    p = argparse.ArgumentParser(prog="qexp", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("constants", parents=[common])
    s.add_argument("--which", choices=("kl", "gr", "alpha"), default="kl")
    s.add_argument("--q")
    s.add_argument("--n", type=int, default=32)
    s.add_argument("--v-depth", type=int, default=0)
    s.set_defaults(func=cmd_constants)

    s = sub.add_parser("expand", parents=[common])
    s.add_argument("--q")
    s.add_argument("--x")
    s.add_argument("--depth", type=int, default=16)
    s.add_argument("--mode", choices=("greedy", "quasi-greedy", "lazy", "enumerate"), default="greedy")
    s.add_argument("--on-ambiguous", choices=("raise", "keep"), default="raise")
    s.set_defaults(func=cmd_expand)

    s = sub.add_parser("unique", parents=[common])
    s.add_argument("--q")
    s.add_argument("--seq")
    s.add_argument("--depth", type=int, default=256)
    s.set_defaults(func=cmd_unique)

    s = sub.add_parser("root", parents=[common])
    s.add_argument("--diff")
    s.add_argument("--lo", help='left end of the q-window, or "kl"')
    s.add_argument("--hi")
    s.add_argument("--root-precision", default="1e-12")
    s.set_defaults(func=cmd_root)

    s = sub.add_parser("certify", parents=[common])
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("inspect", parents=[common])
    s.set_defaults(func=cmd_inspect)

    s = sub.add_parser("u2", parents=[common])
    s.add_argument("action", nargs="?", choices=("search", "check"))
    s.add_argument("--q-lo")
    s.add_argument("--q-hi")
    s.add_argument("--period-bound", type=int, default=3)
    s.add_argument("--preperiod-bound", type=int, default=2)
    s.add_argument("--json", help="also write search records to this file")
    s.add_argument("--q")
    s.add_argument("--w", default="")
    s.add_argument("--m", type=int)
    s.add_argument("--a")
    s.add_argument("--b")
    s.add_argument("--depth", type=int, default=40)
    s.set_defaults(func=cmd_u2)

    s = sub.add_parser("dim", parents=[common])
    s.add_argument("--q")
    s.add_argument("--n", type=int, default=32)
    s.add_argument("--L", type=int, default=32)
    s.set_defaults(func=cmd_dim)

    s = sub.add_parser("scan", parents=[common])
    s.add_argument("--q-lo")
    s.add_argument("--q-hi")
    s.add_argument("--steps", type=int, default=20)
    s.add_argument("--n", type=int, default=32)
    s.add_argument("--L", type=int, default=32)
    s.add_argument("--out", choices=("csv", "json"), default="json")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_scan)
    return p


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def run_command(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.selftest:
        results = _selftest(args.command)
        ok = all(x["ok"] for x in results)
        _emit(dumps({"selftest": args.command, "ok": ok, "results": results}) + "\n", args.output)
        return EXIT_OK if ok else EXIT_FAIL
    try:
        result = args.func(args)
    except PrecisionExhausted as exc:
        partial = exc.partial
        doc = {
            "inconclusive": True,
            "position": exc.position,
            "message": str(exc),
            "partial": format_digits(partial) if isinstance(partial, (tuple, list)) else (str(partial) if partial is not None else None),
            "provenance": _provenance(args),
        }
        _emit(dumps(doc) + "\n", args.output)
        return EXIT_INCONCLUSIVE
    except CertificationFailure as exc:
        sub = exc.subinterval.to_json() if isinstance(exc.subinterval, RationalInterval) else None
        doc = {"inconclusive": True, "message": str(exc), "subinterval": sub, "provenance": _provenance(args)}
        _emit(dumps(doc) + "\n", args.output)
        return EXIT_INCONCLUSIVE
    except DomainError as exc:
        print(f"qexp {args.command}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if isinstance(result, str):
        _emit(result, args.output)
        if args.output:
            Path(args.output + ".provenance.json").write_text(dumps(_provenance(args)) + "\n")
    else:
        _emit(dumps({"result": result, "provenance": _provenance(args)}) + "\n", args.output)
    return EXIT_OK


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
