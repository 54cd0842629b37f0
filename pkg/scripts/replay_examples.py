"""Replay the two quasi-F-regularity certificates and print their reports.

    python3 scripts/replay_examples.py [--json] [--search]

With --search the multiplier is searched for instead of supplied.
"""
import argparse
import time
from dataclasses import dataclass

from qfedder import RingConfig, emit_report, parse_poly, sufficient_qfr
from qfedder.criteria import default_threads, replay_certificate
from qfedder.report import emit_text


@dataclass(frozen=True)
class Replay:
    name: str
    vars: tuple
    f: str
    c: str
    e: int
    multiplier: str
    n: int = 2
    p: int = 2


CASES = [
    Replay("cusp-like plane cubic", ("x", "y", "z"), "z^2+x^3+y^2*z", "x^4", 6, "x^7*y^15*z"),
    Replay("five-variable hypersurface", ("x", "y", "z", "w", "v"), "z*w*v^2+y^3*w+x^3*z", "v^4", 5,
           "x^6*y^3*z^20*w^19*v^3"),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--json", action="store_true")
    ap.add_argument("--search", action="store_true", help="search for the multiplier at the recorded e")
    args = ap.parse_args()
    for case in CASES:
        cfg = RingConfig(case.vars, case.p, case.n + 1)
        f, c = parse_poly(case.f, cfg), parse_poly(case.c, cfg)
        witness = None if args.search else parse_poly(case.multiplier, cfg)
        t0 = time.perf_counter()
        v = sufficient_qfr(f, case.n, c, range(case.e, case.e + 1), witness=witness, threads=default_threads())
        dt = time.perf_counter() - t0
        print(f"# {case.name}: {v.kind.value} in {dt:.2f}s, replay ok: {replay_certificate(v)}")
        print(emit_report(v) if args.json else emit_text(v))
        print()


if __name__ == "__main__":
    main()
