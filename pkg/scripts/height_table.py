"""Table of e=1 escape levels (quasi-F-split heights) for a few hypersurfaces.

    python3 scripts/height_table.py [--n-max 4] [--check-oracle]

--check-oracle reruns each row with the dense brute-force recursion in
tests/oracles.py, at degree bound min(D, --oracle-deg) to keep it tractable.
"""
import argparse
import os
import sys
import time
from dataclasses import dataclass

from qfedder import RingConfig, parse_poly, qfs_height


@dataclass(frozen=True)
class Row:
    f: str
    p: int
    vars: tuple = ("x", "y", "z")


ROWS = [
    Row("x^3+y^3+z^3", 2),
    Row("x^3+y^3+z^3", 3),
    Row("x^3+y^3+z^3", 5),
    Row("x^3+y^3+z^3", 7),
    Row("z^2+x^3+y^2*z", 2),
    Row("z^2+x^3+y^5", 2),
    Row("z^2+x^3+y^5", 3),
    Row("x*y", 3, ("x", "y")),
    Row("x^4+y^4+z^4", 3),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n-max", type=int, default=4)
    ap.add_argument("--check-oracle", action="store_true")
    ap.add_argument("--oracle-deg", type=int, default=14)
    args = ap.parse_args()
    if args.check_oracle:
        sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "tests"))
        from oracles import height_oracle
    print(f"{'f':<18} {'p':>2} {'height':>7} {'D':>4} {'soundness':<16} {'secs':>6}" + ("  oracle" if args.check_oracle else ""))
    for row in ROWS:
        cfg = RingConfig(row.vars, row.p, 2)
        f = parse_poly(row.f, cfg)
        t0 = time.perf_counter()
        v = qfs_height(f, args.n_max)
        dt = time.perf_counter() - t0
        line = (f"{row.f:<18} {row.p:>2} {str(v.certificate['height']):>7} {v.certificate['degree_bound']:>4} "
                f"{v.soundness.value:<16} {dt:>6.2f}")
        if args.check_oracle:
            D = min(v.certificate["degree_bound"], args.oracle_deg)
            h = height_oracle(dict(f.items()), cfg.k, row.p, args.n_max, D)
            line += f"  {h if h is not None else '>' + str(args.n_max)}"
        print(line)


if __name__ == "__main__":
    main()
