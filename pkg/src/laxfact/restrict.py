"""Restricting an (op)lax weak factorisation system on Par to the total maps."""

from __future__ import annotations

from typing import Iterable, Optional

import numpy as np

from . import parmap as pm
from .errors import ContractViolation, PreconditionError
from .factsys import FactorisationScheme, derive_classes
from .ordcat import FinOrdCategory
from .ortho import Square, Universe, Verdict, all_diagonals, check_lwfs, class_membership, pair_matrices, verdict
from .parmap import ParCategory


def total_subcategory(C: ParCategory) -> tuple[FinOrdCategory, dict[int, int]]:
    """The total maps of the ambient Par category as a discrete category.

    Returns the category and the map from ambient indices to its indices.
    """
    if not isinstance(C, ParCategory):
        raise ContractViolation("total maps are only defined for Par categories")
    if "total_sub" in C.cache:
        return C.cache["total_sub"]
    objs = list(range(C.n_objects))
    totals = [f for f in range(C.n_morphisms) if C.is_total(f)]
    index = {f: i for i, f in enumerate(totals)}
    arr = np.asarray(totals, dtype=np.int64)
    lut = np.full(C.n_morphisms + 1, -1, dtype=np.int64)
    lut[arr] = np.arange(len(totals))
    comp = lut[C.comp[np.ix_(arr, arr)]]
    opos = {o: i for i, o in enumerate(objs)}
    T = FinOrdCategory(
        [C.object_names[o] for o in objs],
        [C.name(f) for f in totals],
        [opos[int(C.dom[f])] for f in totals],
        [opos[int(C.cod[f])] for f in totals],
        [index[C.identity(o)] for o in objs],
        comp,
        np.eye(len(totals), dtype=bool),
        label=f"Tot({C.label})",
    )
    C.cache["total_sub"] = (T, index)
    return T, index


def totalise_factorisation(C: ParCategory, f: int, l: int, r: int) -> tuple[int, int, int]:
    """Replace ``f = r . l`` (f total) by a factorisation through D_r with total parts.

    ``l' = nu . l`` and ``r' = r . mu`` where mu includes D_r into the middle
    object and nu is its partial inverse.
    """
    if int(C.comp[r, l]) != int(f):
        raise ContractViolation(f"{C.name(r)} . {C.name(l)} is not {C.name(f)}")
    if not C.is_total(f):
        raise PreconditionError(f"{C.name(f)} is not total")
    rm = C.map(r)
    D = rm.defined
    mu = pm.inclusion(D, rm.dom)
    nu = pm.partial_inverse_of_inclusion(D, rm.dom)
    lt = pm.compose_partial(nu, C.map(l))
    rt = pm.compose_partial(rm, mu)
    return C.id_of(lt), len(D), C.id_of(rt)


TOTAL_PREDICATES = (
    ("all", lambda C, f: True),
    ("bijective", lambda C, f: C.is_injective(f) and C.is_surjective(f)),
    ("injective", lambda C, f: C.is_injective(f)),
    ("surjective", lambda C, f: C.is_surjective(f)),
    ("none", lambda C, f: False),
)


def name_total_class(C: ParCategory, members: Iterable[int], totals: Iterable[int]) -> str:
    """The first predicate on total maps that carves out exactly ``members``."""
    members = set(members)
    totals = list(totals)
    for label, pred in TOTAL_PREDICATES:
        if {f for f in totals if pred(C, f)} == members:
            return label
    return "other"


def total_square_fillers(C: ParCategory, L: Iterable[int], R: Iterable[int], kind: str) -> Verdict:
    """Every (op)lax filler of a commutative square of total maps is total with a strict lower triangle."""
    failures, checked = [], 0
    for l in L:
        for r in R:
            U, V, _, sq, _, _ = pair_matrices(C, l, r, kind)
            for i, j in np.argwhere(sq).tolist():
                u, v = int(U[i]), int(V[j])
                if not (C.is_total(u) and C.is_total(v)) or C.comp[r, u] != C.comp[v, l]:
                    continue
                s = Square(l, r, u, v, kind)
                for d in all_diagonals(C, s):
                    checked += 1
                    if not C.is_total(d):
                        failures.append({"square": s.names(C), "filler": C.name(d), "problem": "filler not total"})
                    elif C.comp[r, d] != v:
                        failures.append({"square": s.names(C), "filler": C.name(d), "problem": "lower triangle not strict"})
    return verdict("total-fillers", failures, checked, {"kind": kind})


def check_restricted_wfs(
    universe: Universe, L: Iterable[int], R: Iterable[int], kind: str, factorisations: Optional[dict] = None
) -> dict:
    """``(L & Tot, R & Tot)`` as an ordinary WFS among total maps.

    ``factorisations`` maps total f to an (l, W, r) of the original system;
    each is totalised and its parts re-checked for membership.
    """
    C = universe.category
    T, index = total_subcategory(C)
    totals_amb = [f for f in universe.members if C.is_total(f)]
    Lt = [f for f in L if C.is_total(f)]
    Rt = [f for f in R if C.is_total(f)]
    TU = Universe(T, tuple(index[f] for f in totals_amb), f"Tot({universe.label})", universe.max_size)
    wfs = check_lwfs(T, [index[f] for f in Lt], [index[f] for f in Rt], TU, "strict")
    left_member = class_membership(T, [index[f] for f in Lt], [index[f] for f in Rt], TU, "strict", left=True)
    right_member = class_membership(T, [index[f] for f in Rt], [index[f] for f in Lt], TU, "strict", left=False)
    out: dict = {
        "left": {"members": [C.name(f) for f in Lt], "matches": name_total_class(C, Lt, totals_amb)},
        "right": {"members": [C.name(f) for f in Rt], "matches": name_total_class(C, Rt, totals_amb)},
        "wfs": wfs,
    }
    if kind == "lax":
        out["fillers"] = Verdict("total-fillers", "not applicable (lax case)")
    else:
        out["fillers"] = total_square_fillers(C, Lt, Rt, kind)
    if factorisations is not None:
        failures, skipped, checked = [], [], 0
        for f in totals_amb:
            if f not in factorisations:
                continue
            l, _, r = factorisations[f]
            if kind == "lax" and C.map(l).defined != C.map(f).defined:
                skipped.append(C.name(f))
                continue
            checked += 1
            lt, k, rt = totalise_factorisation(C, f, l, r)
            if not (C.is_total(lt) and C.is_total(rt)) or C.comp[rt, lt] != f:
                failures.append({"morphism": C.name(f), "problem": "totalised parts not total or do not compose"})
            elif not (left_member(index[lt]) and right_member(index[rt])):
                failures.append({"morphism": C.name(f), "left": C.name(lt), "right": C.name(rt), "problem": "totalised parts leave the classes"})
        v = verdict("totalised", failures, checked, {})
        if skipped:
            v.details["not_applicable_lax_case"] = skipped
        out["totalised"] = v
    return out


def restrict_report(scheme: FactorisationScheme, universe: Universe) -> dict:
    C = scheme.category
    dc = derive_classes(scheme, universe)
    facts = {f: scheme.factor(f) for f in universe.members}
    res = check_restricted_wfs(universe, dc.left.members, dc.right.members, scheme.kind, facts)
    verdicts = [v for v in (res["wfs"], res["fillers"], res.get("totalised")) if v is not None]
    return {
        "scheme": scheme.name,
        "kind": scheme.kind,
        "within": universe.label,
        "restricted": {"left": res["left"], "right": res["right"]},
        "checks": {v.name: v.to_json() for v in verdicts},
        "passed": all(v.passed or v.status.startswith("not applicable") for v in verdicts),
    }
