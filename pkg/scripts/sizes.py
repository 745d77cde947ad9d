"""Class sizes and timings for every scheme and the pointed classes at N = 1..3."""

import argparse
import time

from laxfact.factsys import SCHEME_NAMES, ambient_size_for, derive_classes, make_scheme
from laxfact.errors import BeyondAmbient
from laxfact.ortho import par_universe
from laxfact.pointed import compute_pointed_classes


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="1,2,3")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    for N in (int(x) for x in args.sizes.split(",")):
        t0 = time.perf_counter()
        U = par_universe(N)
        reps = compute_pointed_classes(U, args.jobs)
        counts = " ".join(f"{k}={len(r.predicate)}{'' if r.methods_agree is not False else '!'}" for k, r in reps.items())
        print(f"N={N} |Par|={len(U)} pointed: {counts} ({time.perf_counter() - t0:.1f} s)")
        for name in SCHEME_NAMES:
            t0 = time.perf_counter()
            SU = par_universe(N, ambient_size_for(name, N))
            try:
                dc = derive_classes(make_scheme(name, SU.category), SU)
                sizes = f"L_F={len(dc.left.members)} R_F={len(dc.right.members)}"
            except BeyondAmbient as exc:
                sizes = f"inconclusive ({exc})"
            print(f"  {name:20} {sizes} ({time.perf_counter() - t0:.1f} s)")


if __name__ == "__main__":
    main()
