"""How much the monad/comonad/distributivity verdicts depend on which filler is picked.

For every scheme, compares the extremal pick with the first filler in scan
order, and counts how many components have a unique filler at all.
"""

import argparse

from laxfact.factsys import SCHEME_NAMES, ambient_size_for, make_scheme
from laxfact.laws import build_structure, monad_report
from laxfact.ortho import par_universe


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-size", type=int, default=2)
    args = ap.parse_args()
    print(f"{'scheme':20} {'choice':9} {'theta uniq':>10} {'omega uniq':>10}  failing checks")
    for name in SCHEME_NAMES:
        U = par_universe(args.max_size, ambient_size_for(name, args.max_size))
        s = make_scheme(name, U.category)
        for choice in ("extremal", "first"):
            rep = monad_report(s, U, build_structure(s, choice=choice))
            st = rep["checks"]["structure"].get("details", {})
            bad = [k for k, v in rep["checks"].items() if v["status"] not in ("pass", "vacuous")]
            print(f"{name:20} {choice:9} {st.get('theta_unique', '-'):>10} {st.get('omega_unique', '-'):>10}  {', '.join(bad) or '-'}")


if __name__ == "__main__":
    main()
