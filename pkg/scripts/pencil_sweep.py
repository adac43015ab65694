"""Classify the pencil of planes through every line of the surface.

    python3 scripts/pencil_sweep.py --p 3 --workers 4

Prints the distinct (singular fibers, fiber lines, sections) shapes seen and
any line whose checks fail.
"""

import argparse
import json
import time
from collections import Counter

from hermitian.pencil import pencil_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--a", type=int, default=1)
    ap.add_argument("--sample", type=int, default=3, help="quartic fibers per pencil")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--json", help="write every per-line summary here")
    args = ap.parse_args()

    t0 = time.perf_counter()
    summaries = pencil_sweep(args.p, args.a, sample=args.sample, workers=args.workers)
    dt = time.perf_counter() - t0
    shapes = Counter((s["singular_fibers"], s["fiber_lines"], s["sections"],
                      tuple(s["general_fiber_point_counts"])) for s in summaries)
    failed = [s["line"] for s in summaries if not all(s["checks"].values())]
    print(f"q = {args.p ** args.a}: {len(summaries)} lines in {dt:.2f}s")
    for (fibers, flines, secs, gen), n in sorted(shapes.items()):
        print(f"  {n} lines: {fibers} singular fibers, {flines} fiber lines, "
              f"{secs} sections, general fiber points {list(gen)}")
    print(f"  failing lines: {failed or 'none'}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(summaries, fh, sort_keys=True, indent=1)


if __name__ == "__main__":
    main()
