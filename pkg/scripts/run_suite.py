"""Run the acceptance battery and write its JSON report.

    python3 scripts/run_suite.py --max-size 2 --jobs 1 --out results/suite-n2.json
"""

import argparse
import time
from pathlib import Path

from laxfact.acceptance import criterion_determinism, render, run_suite, suite_report


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-size", type=int, default=2)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--determinism", action="store_true")
    ap.add_argument("--out", type=Path)
    args = ap.parse_args()
    t0 = time.perf_counter()
    results = run_suite(args.max_size, args.jobs)
    if args.determinism:
        results.append(criterion_determinism(args.max_size, 1, max(2, args.jobs)))
    for c in results:
        print(c.line())
    print(f"{time.perf_counter() - t0:.1f} s")
    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(render(suite_report(results, args.max_size)))


if __name__ == "__main__":
    main()
