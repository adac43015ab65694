"""Stream the line stabilizer family and compare with the order formula.

    python3 scripts/stabilizer_count.py --p 2 --a 2

At q = 4 the 15.6M elements are generated in chunks and checked for
unitarity without ever being held in memory at once.
"""

import argparse
import time

from hermitian.gf import create_field
from hermitian.unitary import gu_order, line_orbit, stabilizer_count, stabilizer_order


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--a", type=int, default=1)
    ap.add_argument("--orbit", action="store_true", help="also run the line orbit search")
    args = ap.parse_args()

    ctx = create_field(args.p, args.a)
    q = ctx.q
    t0 = time.perf_counter()
    count, bad = stabilizer_count(ctx)
    print(f"q = {q}: {count} unitary members fixing the line, {bad} rejected "
          f"(formula {stabilizer_order(q)}) in {time.perf_counter() - t0:.1f}s")
    if args.orbit:
        t0 = time.perf_counter()
        n = len(line_orbit(ctx))
        print(f"orbit {n} lines, |orbit|*|stab| = {n * count} vs |GU_4| = {gu_order(q)} "
              f"in {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
