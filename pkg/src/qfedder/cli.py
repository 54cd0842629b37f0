"""Command-line front end.

Exit codes: 0 for a definitive or certified verdict, 2 for INCONCLUSIVE,
1 for usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import criteria
from .config import RingConfig
from .modpoly import PolyError
from .parser import ParseError, parse_poly
from .report import Kind, Soundness, Verdict, emit_report, emit_text
from .tau import find_test_element_for, jacobian_seed, tau_closure
from .witt import run_selftest

COMMANDS = ("fpure", "height", "qfe", "qfr", "tau", "witt-selftest")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _e_range(text: str) -> range:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return range(int(a), int(b) + 1)
        return range(int(text), int(text) + 1)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad e-range {text!r}; expected A..B") from None


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qfedder", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name in ("fpure", "height", "qfe", "qfr", "tau"):
        sp = sub.add_parser(name)
        sp.add_argument("f", help="polynomial, e.g. 'z^2+x^3+y^2*z'")
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--vars", required=True, help="comma separated, e.g. x,y,z")
        sp.add_argument("--n", type=int, default=None)
        sp.add_argument("--e", type=int, default=None)
        sp.add_argument("--e-range", type=_e_range, default=None)
        sp.add_argument("--c", default=None, help="multiplier c for qfr, or an element to validate for tau")
        sp.add_argument("--t", default=None, help="test element t with c in (t^4)")
        sp.add_argument("--witness", default=None, help="monomial multiplier to replay instead of searching")
        sp.add_argument("--deg-bound", type=int, default=None)
        sp.add_argument("--search-bound", type=int, default=None)
        sp.add_argument("--precision", type=int, default=None, help="override working precision W")
        sp.add_argument("--threads", type=int, default=None)
        sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("witt-selftest")
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--trials", type=int, default=500)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--json", action="store_true")
    return ap


def _exit_code(v: Verdict) -> int:
    return 2 if v.kind is Kind.INCONCLUSIVE else 0


def _ring(args, n: int) -> RingConfig:
    names = tuple(v.strip() for v in args.vars.split(",") if v.strip())
    W = args.precision or criteria.required_precision(args.command, n)
    return RingConfig(names, args.p, W)


def _run_qfe(args, f, cfg) -> Verdict:
    n = args.n or 1
    e = args.e or 1
    threads = args.threads or criteria.default_threads()
    if args.witness:
        return criteria.sufficient_qfe(f, e, n, witness=parse_poly(args.witness, cfg), threads=threads)
    v = criteria.sufficient_qfe(f, e, n, args.search_bound, threads=threads)
    if v.kind is not Kind.INCONCLUSIVE:
        return v
    nec = criteria.necessary_qfe(f, e, n, args.deg_bound)
    if nec.kind is Kind.NOT_QFE_SPLIT_UP_TO_DEGREE:
        nec.command = "qfe"
        nec.certificate["search_bound"] = v.certificate.get("search_bound")
        return nec
    v.notes.append("necessary condition holds (I^e_n escapes); undecided")
    v.certificate["necessary_escaping_element"] = nec.certificate.get("escaping_element")
    return v


def _run_qfr(args, f, cfg) -> Verdict:
    n = args.n or 1
    if args.c is None:
        raise UsageError("qfr requires --c")
    c = parse_poly(args.c, cfg)
    t = parse_poly(args.t, cfg) if args.t else None
    if t is None:
        t = find_test_element_for(c, tau_closure(jacobian_seed(f), f)) if jacobian_seed(f) else None
    e_range = args.e_range or (range(args.e, args.e + 1) if args.e else None)
    witness = parse_poly(args.witness, cfg) if args.witness else None
    threads = args.threads or criteria.default_threads()
    v = criteria.sufficient_qfr(f, n, c, e_range, args.search_bound, witness=witness, t=t, threads=threads)
    if t is not None:
        v.certificate["test_element_t"] = t
    return v


def _run_tau(args, f, cfg) -> Verdict:
    seeds = jacobian_seed(f)
    closure = tau_closure(seeds, f) if seeds else []
    cert = {"seeds": seeds, "closure": closure}
    if args.c:
        c = parse_poly(args.c, cfg)
        t = find_test_element_for(c, closure)
        cert["c"] = c
        cert["t_with_c_in_t4"] = t
    return Verdict("tau", Kind.TAU_ELEMENTS, Soundness.SOUND_ONE_SIDED, f, {}, cert,
                   ["listed elements lie in the test ideal; the list need not generate it"])


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command == "witt-selftest":
            reports = run_selftest(args.p, args.n, args.trials, args.seed)
            data = [r.as_dict() for r in reports]
            if args.json:
                print(json.dumps({"command": "witt-selftest", "checks": data}, indent=2), file=out)
            else:
                for d in data:
                    print(f"{d['name']}: p={d['p']} n={d['n']} seed={d['seed']} "
                          f"passed={d['passed']}/{d['trials']} failed={d['failed']}"
                          + (f" counterexample={d['first_counterexample']}" if d["failed"] else ""), file=out)
            return 0 if all(r.ok for r in reports) else 1

        n = args.n or 1
        cfg = _ring(args, n)
        f = parse_poly(args.f, cfg)
        if args.command == "fpure":
            v = criteria.fedder_fpure(f)
        elif args.command == "height":
            v = criteria.qfs_height(f, n, args.deg_bound)
        elif args.command == "qfe":
            v = _run_qfe(args, f, cfg)
        elif args.command == "qfr":
            v = _run_qfr(args, f, cfg)
        else:
            v = _run_tau(args, f, cfg)
    except (UsageError, ParseError, PolyError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return 1
    print(emit_report(v) if args.json else emit_text(v), file=out)
    if args.command in ("qfe", "qfr") and args.witness and v.kind is Kind.INCONCLUSIVE:
        print("error: supplied witness does not certify", file=err)
    return _exit_code(v)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
