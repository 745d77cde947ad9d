"""``laxfact`` command line.

Exit codes: 0 when every requested verdict passes (vacuous included), 1 when
some verdict fails or is inconclusive, 2 on usage, file or resource errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from . import parmap as pm
from .acceptance import CRITERIA, criterion_determinism, render, run_suite, suite_report
from .corpus import bundled, data_dir
from .errors import BeyondAmbient, ContractViolation, LaxfactError, NotPointed, UsageError
from .factsys import SCHEME_NAMES, ambient_size_for, full_scheme_report, make_scheme
from .laws import build_structure, load_structure, monad_report
from .ordcat import FinOrdCategory, dump_category, load_category, validate_category
from .ortho import KINDS, Universe, equivalence_classes, full_universe, left_complement, orthogonality, par_universe, right_complement
from .pointed import CONJECTURES, compute_pointed_classes, conjecture_harness, pointed_verdict, revalidate_verdict
from .restrict import restrict_report


def _write_report(path: Optional[str], data: dict) -> None:
    if path:
        Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _universe(where: str) -> Universe:
    """``par:N``, a file path, or the name of a bundled category."""
    if where.startswith("par:"):
        try:
            n = int(where[4:])
        except ValueError:
            raise UsageError(f"bad Par size in {where!r}") from None
        return par_universe(n)
    p = Path(where)
    if p.exists():
        C = load_category(p)
    elif (data_dir() / f"{where}.json").exists():
        C = bundled(where)
    else:
        raise UsageError(f"no category file or bundled category named {where!r}")
    rep = validate_category(C)
    if not rep.ok:
        raise UsageError(f"{where} is not a valid Ord-enriched category: {rep.violations[:3]}")
    return full_universe(C)


def _names(C: FinOrdCategory, text: str) -> list[int]:
    out = []
    for n in filter(None, (x.strip() for x in text.split(","))):
        try:
            out.append(C.index(n))
        except (KeyError, ContractViolation):
            raise UsageError(f"unknown morphism {n!r} in {C.label}") from None
    return out


def _status_line(name: str, status: str) -> str:
    return f"{name}: {status}"


# -- subcommands ---------------------------------------------------------------------------


def cmd_validate(args) -> int:
    C = load_category(args.file)
    rep = validate_category(C)
    out = {"category": C.label, "objects": C.n_objects, "morphisms": C.n_morphisms, **rep.to_json()}
    _write_report(args.report, out)
    print(f"{C.label}: {C.n_objects} objects, {C.n_morphisms} morphisms, {'valid' if rep.ok else 'INVALID'}")
    for v in rep.violations:
        print(f"  {v}")
    return 0 if rep.ok else 1


def cmd_par(args) -> int:
    C = pm.build_par_category(args.max_size, validate=False)
    rep = validate_category(C) if args.max_size <= 3 or args.validate else None
    homs = {f"{a}->{b}": len(C.hom(a, b)) for a in range(args.max_size + 1) for b in range(args.max_size + 1)}
    out = {"category": C.label, "morphisms": C.n_morphisms, "hom_sizes": homs}
    if rep is not None:
        out["validation"] = rep.to_json()
    if args.export:
        Path(args.export).write_text(dump_category(C), encoding="utf-8")
    _write_report(args.report, out)
    print(f"{C.label}: {C.n_morphisms} morphisms" + ("" if rep is None else f", {'valid' if rep.ok else 'INVALID'}"))
    return 0 if rep is None or rep.ok else 1


def cmd_ortho(args) -> int:
    U = _universe(args.cat)
    C = U.category
    if args.f or args.g:
        if not (args.f and args.g):
            raise UsageError("give both --f and --g")
        f, g = _names(C, args.f)[0], _names(C, args.g)[0]
        ok, w = orthogonality(C, f, g, args.kind)
        out = {"f": C.name(f), "g": C.name(g), "kind": args.kind, "orthogonal": ok}
        if w is not None:
            out["unfillable_square"] = w.names(C)
        print(f"{C.name(f)} {'is' if ok else 'is not'} {args.kind}-orthogonal to {C.name(g)}")
        _write_report(args.report, out)
        return 0
    ec = equivalence_classes(C, U, args.kind, args.jobs)
    same = len({tuple(v) for v in ec.values()}) == 1
    out = {"within": U.label, "kind": args.kind, "classes": {k: [C.name(x) for x in v] for k, v in ec.items()}, "coincide": same}
    _write_report(args.report, out)
    for k, v in ec.items():
        print(f"{k}: {len(v)}")
    print(_status_line("coincide", "pass" if same else "fail"))
    return 0 if same else 1


CLASS_PRESETS = ("zero", "total", "injective", "surjective", "identities")


def _class(U: Universe, what: str) -> list[int]:
    C = U.category
    if what in CLASS_PRESETS:
        if what == "identities":
            return [f for f in U.members if C.is_identity(f)]
        if what == "zero":
            from .pointed import zero_class

            return zero_class(U).members
        if not isinstance(C, pm.ParCategory):
            raise UsageError(f"class {what!r} needs a Par category")
        test = {"total": C.is_total, "injective": C.is_injective, "surjective": C.is_surjective}[what]
        return [f for f in U.members if test(f)]
    return _names(C, what)


def cmd_complement(args) -> int:
    U = _universe(args.cat)
    C = U.category
    H = _class(U, args.of)
    fn = left_complement if args.side == "left" else right_complement
    rep = fn(C, H, U, args.kind, jobs=args.jobs)
    out = rep.to_json(C)
    _write_report(args.report, out)
    print(f"{args.side} {args.kind} complement of {args.of} within {U.label}: {len(rep.members)} morphisms")
    for f in rep.members:
        print(f"  {C.name(f)}")
    return 0


def _scheme_universe(args):
    amb = ambient_size_for(args.scheme, args.max_size)
    U = par_universe(args.max_size, amb)
    s = make_scheme(args.scheme, U.category, **({"lift": args.lift} if getattr(args, "lift", None) else {}))
    return U, s


def cmd_scheme(args) -> int:
    U, s = _scheme_universe(args)
    out = full_scheme_report(s, U, all_fillers=args.all_fillers, jobs=args.jobs)
    _write_report(args.report, out)
    print(f"{s.name} ({s.kind}) within {U.label}")
    print(_status_line("section", out["section"]["status"]))
    for k, v in out["klaws"].items():
        print(_status_line(f"K {k}", v["status"]))
    print(_status_line("predistributive", out["predistributive"]["status"]))
    if "L_F" in out["classes"]:
        print(f"L_F: {len(out['classes']['L_F'])}  R_F: {len(out['classes']['R_F'])}")
    print(_status_line("lwfs", str(out["lwfs"].get("verdict", out["lwfs"].get("status")))))
    return 0 if out["passed"] else 1


def cmd_monad(args) -> int:
    U, s = _scheme_universe(args)
    st = load_structure(s, args.structure) if args.structure else build_structure(s, choice=args.filler_choice)
    if args.structure:
        st.choice = args.filler_choice
    out = monad_report(s, U, st)
    _write_report(args.report, out)
    print(f"{s.name} ({s.kind}) within {U.label}, filler choice {st.choice}")
    for k, v in out["checks"].items():
        print(_status_line(k, v["status"]))
    return 0 if out["passed"] else 1


def cmd_pointed(args) -> int:
    U = _universe(args.cat) if args.cat else par_universe(args.max_size)
    reps = compute_pointed_classes(U, args.jobs)
    v = pointed_verdict(reps)
    out = {"within": U.label, "classes": {k: r.to_json(U.category) for k, r in reps.items()}, "verdict": v.to_json()}
    _write_report(args.report, out)
    for k, r in reps.items():
        print(f"{k}: {len(r.predicate)} (methods agree: {r.methods_agree}, identification: {r.identification_agrees})")
    print(_status_line("pointed-classes", v.status))
    return 0 if v.passed else 1


def cmd_conjecture(args) -> int:
    U = _universe(args.cat)
    ids = CONJECTURES if args.id == "all" else [args.id]
    out, ok = {"within": U.label, "verdicts": []}, True
    for cid in ids:
        v = conjecture_harness(U, cid, args.jobs)
        rv = revalidate_verdict(U.category, v)
        ok &= rv
        entry = v.to_json()
        entry["counterexamples_revalidated"] = rv
        out["verdicts"].append(entry)
        print(f"{cid} within {U.label}: {v.status}" + ("" if rv else " (counterexample failed re-validation)"))
    _write_report(args.report, out)
    return 0 if ok else 1


def cmd_restrict(args) -> int:
    U, s = _scheme_universe(args)
    out = restrict_report(s, U)
    _write_report(args.report, out)
    r = out["restricted"]
    print(f"{s.name} restricted to total maps within {U.label}: ({r['left']['matches']}, {r['right']['matches']})")
    for k, v in out["checks"].items():
        print(_status_line(k, v["status"]))
    return 0 if out["passed"] else 1


def cmd_suite(args) -> int:
    only = [int(x) for x in args.only.split(",")] if args.only else None
    results = run_suite(args.max_size, args.jobs, only)
    if args.determinism:
        results.append(criterion_determinism(args.max_size, 1, max(args.jobs, 2)))
    report = suite_report(results, args.max_size)
    if args.report:
        Path(args.report).write_text(render(report), encoding="utf-8")
    for c in results:
        print(c.line())
    return 0 if report["passed"] else 1


# -- parser ------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="laxfact", description="Check lax/oplax weak factorisation systems on finite Ord-enriched categories.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, size=True):
        sp.add_argument("--jobs", type=int, default=1, help="worker processes (results do not depend on it)")
        sp.add_argument("--report", help="write the JSON report here")
        if size:
            sp.add_argument("--max-size", type=int, default=2, help="largest Par object (default 2)")

    sp = sub.add_parser("validate", help="validate a category description file")
    sp.add_argument("file")
    common(sp, size=False)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("par", help="build Par(FinSet<=N), validate it, optionally export")
    sp.add_argument("--export", help="write the category description file here")
    sp.add_argument("--validate", action="store_true", help="validate even when N > 3")
    common(sp)
    sp.set_defaults(func=cmd_par)

    sp = sub.add_parser("ortho", help="orthogonality of two morphisms, or the equivalence classes of a category")
    sp.add_argument("--cat", required=True, help="par:N, a file, or a bundled category name")
    sp.add_argument("--kind", choices=KINDS, default="lax")
    sp.add_argument("--f")
    sp.add_argument("--g")
    common(sp, size=False)
    sp.set_defaults(func=cmd_ortho)

    sp = sub.add_parser("complement", help="left or right orthogonal complement of a class")
    sp.add_argument("--cat", required=True)
    sp.add_argument("--of", required=True, help=f"one of {', '.join(CLASS_PRESETS)} or comma-separated morphism names")
    sp.add_argument("--side", choices=("left", "right"), required=True)
    sp.add_argument("--kind", choices=KINDS, default="lax")
    common(sp, size=False)
    sp.set_defaults(func=cmd_complement)

    sp = sub.add_parser("scheme", help="functorial factorisation scheme checks")
    ssub = sp.add_subparsers(dest="action", required=True)
    sc = ssub.add_parser("check")
    sc.add_argument("--scheme", choices=SCHEME_NAMES, required=True)
    sc.add_argument("--all-fillers", action="store_true", help="check the constructed diagonal for every filler choice")
    sc.add_argument("--lift", choices=("canonical", "leftmost"), help="fibre pick for transfer schemes")
    common(sc)
    sc.set_defaults(func=cmd_scheme)

    sp = sub.add_parser("monad", help="lax monad, comonad and distributivity checks")
    msub = sp.add_subparsers(dest="action", required=True)
    mc = msub.add_parser("check")
    mc.add_argument("--scheme", choices=SCHEME_NAMES, required=True)
    mc.add_argument("--structure", help="JSON file with 'theta'/'omega' component overrides")
    mc.add_argument("--filler-choice", choices=("extremal", "first"), default="extremal")
    mc.add_argument("--lift", choices=("canonical", "leftmost"))
    common(mc)
    mc.set_defaults(func=cmd_monad)

    sp = sub.add_parser("pointed", help="minimal-map classes and their complements")
    psub = sp.add_subparsers(dest="action", required=True)
    pr = psub.add_parser("report")
    pr.add_argument("--cat", help="use a file category instead of Par")
    common(pr)
    pr.set_defaults(func=cmd_pointed)

    sp = sub.add_parser("conjecture", help="evidence for the pointed-class conjectures")
    sp.add_argument("--id", choices=(*CONJECTURES, "all"), required=True)
    sp.add_argument("--cat", required=True)
    common(sp, size=False)
    sp.set_defaults(func=cmd_conjecture)

    sp = sub.add_parser("restrict", help="restrict a scheme's system to total maps")
    sp.add_argument("--scheme", choices=SCHEME_NAMES, required=True)
    sp.add_argument("--lift", choices=("canonical", "leftmost"))
    common(sp)
    sp.set_defaults(func=cmd_restrict)

    sp = sub.add_parser("suite", help="run the acceptance battery")
    sp.add_argument("--only", help=f"comma-separated criterion numbers (1-{len(CRITERIA)})")
    sp.add_argument("--determinism", action="store_true", help="also compare reports across worker counts")
    common(sp)
    sp.set_defaults(func=cmd_suite)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be at least 1")
    try:
        return args.func(args)
    except (UsageError, ContractViolation, NotPointed) as exc:
        print(f"laxfact: error: {exc}", file=sys.stderr)
        return 2
    except BeyondAmbient as exc:
        print(f"laxfact: error: {exc}", file=sys.stderr)
        return 2
    except LaxfactError as exc:  # pragma: no cover - every subclass is handled above
        print(f"laxfact: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
