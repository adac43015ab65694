"""Table of point, line and section counts against the closed formulas.

    python3 scripts/count_table.py --max-q 5
"""

import argparse
import time

from hermitian.gf import is_prime
from hermitian.lines import enumerate_lines
from hermitian.pencil import build_pencil
from hermitian.surface import Surface


def prime_powers(limit):
    for p in range(2, limit + 1):
        if is_prime(p):
            a = 1
            while p**a <= limit:
                yield p, a
                a += 1


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-q", type=int, default=4)
    ap.add_argument("--no-lines", action="store_true", help="points only (fast for larger q)")
    args = ap.parse_args()

    head = f"{'q':>3} {'pts':>7} {'base':>6} {'lines':>6} {'base':>5} {'sections':>8} {'ok':>3} {'secs':>6}"
    print(head)
    for p, a in sorted(prime_powers(args.max_q), key=lambda pa: pa[0] ** pa[1]):
        t0 = time.perf_counter()
        S = Surface.over(p, a)
        q = S.q
        n2, n1 = len(S.enumerate_points()), len(S.enumerate_points("base"))
        ok = n2 == S.expected_point_count() and n1 == S.expected_point_count("base")
        l2 = l1 = secs = "-"
        if not args.no_lines:
            lines = enumerate_lines(S)
            l2, l1 = len(lines), len(enumerate_lines(S, "base"))
            secs = len(build_pencil(S, lines[0], sample=0).sections)
            ok &= l2 == S.expected_line_count() and l1 == S.expected_line_count("base") and secs == q**4
        dt = time.perf_counter() - t0
        print(f"{q:>3} {n2:>7} {n1:>6} {l2:>6} {l1:>5} {secs:>8} {'y' if ok else 'N':>3} {dt:>6.2f}")


if __name__ == "__main__":
    main()
