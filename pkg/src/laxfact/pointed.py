"""Minimal-map classes, their four complements, split epis and the conjecture harness.

Every quantifier ranges over the universe: complements and predicates alike
are truncated, so a "match" is evidence within the universe, never a proof.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import ContractViolation, NotPointed
from .ordcat import FinOrdCategory
from .ortho import (
    ClassReport,
    Square,
    Universe,
    Verdict,
    adjoint_partners,
    all_diagonals,
    is_square,
    left_complement,
    right_complement,
    verdict,
)
from .parmap import ParCategory


def minimal_maps(C: FinOrdCategory, universe: Optional[Universe] = None) -> dict[tuple[int, int], int]:
    """The least element of every non-empty hom-set between universe objects."""
    objs = universe.objects if universe is not None else list(range(C.n_objects))
    cache = C.cache.setdefault("minimal", {})
    out = {}
    for a in objs:
        for b in objs:
            if (a, b) not in cache:
                H = C.hom(a, b)
                if H.size == 0:
                    cache[(a, b)] = None
                else:
                    least = [m for m in H.tolist() if C.leq[m, H].all()]
                    if not least:
                        raise NotPointed(
                            f"hom({C.object_names[a]}, {C.object_names[b]}) in {C.label} has no least element"
                        )
                    cache[(a, b)] = least[0]
            if cache[(a, b)] is not None:
                out[(a, b)] = cache[(a, b)]
    return out


def zero_class(universe: Universe) -> ClassReport:
    C = universe.category
    mins = minimal_maps(C, universe)
    members = sorted(m for m in mins.values() if m in universe)
    return ClassReport("O", universe.label, members, None, "least element per hom-set")


def is_minimal(C: FinOrdCategory, f: int) -> bool:
    H = C.hom(int(C.dom[f]), int(C.cod[f]))
    return bool(C.leq[f, H].all())


def check_absorbency(universe: Universe) -> Verdict:
    """Composites with a minimal map on either side are minimal."""
    C = universe.category
    O = zero_class(universe).members
    failures, checked = [], 0
    for z in O:
        a, b = int(C.dom[z]), int(C.cod[z])
        for x in universe.objects:
            for f in universe.hom(x, a).tolist():
                checked += 1
                if not is_minimal(C, int(C.comp[z, f])):
                    failures.append({"side": "right", "zero": C.name(z), "with": C.name(f)})
            for g in universe.hom(b, x).tolist():
                checked += 1
                if not is_minimal(C, int(C.comp[g, z])):
                    failures.append({"side": "left", "zero": C.name(z), "with": C.name(g)})
    return verdict("absorbency", failures, checked, {"within": universe.label})


# -- direct predicates --------------------------------------------------------------------


def has_lower_partner(universe: Universe, f: int) -> bool:
    """U-predicate: ``id_A <= f* . f`` for some f*."""
    C = universe.category
    A, B = int(C.dom[f]), int(C.cod[f])
    back = universe.hom(B, A)
    return bool(back.size and C.leq[C.identity(A), C.comp[back, f]].any())


def has_upper_partner(universe: Universe, f: int) -> bool:
    """V-predicate: ``id_B <= f . f_*`` for some f_*."""
    C = universe.category
    A, B = int(C.dom[f]), int(C.cod[f])
    back = universe.hom(B, A)
    return bool(back.size and C.leq[C.identity(B), C.comp[f, back]].any())


def dense_domain(universe: Universe, f: int) -> bool:
    """``f . u`` minimal implies ``u`` minimal, for every u into dom f."""
    C = universe.category
    A = int(C.dom[f])
    for x in universe.objects:
        for u in universe.hom(x, A).tolist():
            if is_minimal(C, int(C.comp[f, u])) and not is_minimal(C, u):
                return False
    return True


def dense_image(universe: Universe, f: int) -> bool:
    """``v . f`` minimal implies ``v`` minimal, for every v out of cod f."""
    C = universe.category
    B = int(C.cod[f])
    for y in universe.objects:
        for v in universe.hom(B, y).tolist():
            if is_minimal(C, int(C.comp[v, f])) and not is_minimal(C, v):
                return False
    return True


def is_split_epi(universe: Universe, f: int) -> bool:
    C = universe.category
    A, B = int(C.dom[f]), int(C.cod[f])
    back = universe.hom(B, A)
    return bool(back.size and (C.comp[f, back] == C.identity(B)).any())


def split_epi_class(universe: Universe) -> ClassReport:
    return ClassReport("LI", universe.label, [f for f in universe.members if is_split_epi(universe, f)], None, "direct-predicate")


def _par_identifications(C: ParCategory) -> dict[str, tuple[str, Callable[[int], bool]]]:
    return {
        "U": ("total with injective component", lambda f: C.is_total(f) and C.is_injective(f)),
        "DD": ("total", C.is_total),
        "DI": ("surjective component", C.is_surjective),
        "V": ("surjective component", C.is_surjective),
        "LI": ("surjective component", C.is_surjective),
    }


@dataclass
class PointedClassReport:
    name: str
    within: str
    complement: Optional[list[int]]
    predicate: list[int]
    identification: Optional[tuple[str, list[int]]] = None
    evidence: dict[int, Square] = field(default_factory=dict)

    @property
    def methods_agree(self) -> Optional[bool]:
        if self.complement is None:
            return None
        return sorted(self.complement) == sorted(self.predicate)

    @property
    def identification_agrees(self) -> Optional[bool]:
        if self.identification is None:
            return None
        return sorted(self.identification[1]) == sorted(self.predicate)

    def to_json(self, C: FinOrdCategory) -> dict:
        out = {
            "name": self.name,
            "within": self.within,
            "predicate": [C.name(f) for f in sorted(self.predicate)],
            "count": len(self.predicate),
        }
        if self.complement is not None:
            out["complement"] = [C.name(f) for f in sorted(self.complement)]
            out["methods_agree"] = self.methods_agree
        if self.identification is not None:
            out["identified_with"] = self.identification[0]
            out["identification_agrees"] = self.identification_agrees
        return out


def compute_pointed_classes(universe: Universe, jobs: int = 1) -> dict[str, PointedClassReport]:
    """U, DD, DI, V by complement search and by predicate, plus LI compared with V."""
    C = universe.category
    O = zero_class(universe).members
    comp = {
        "U": left_complement(C, O, universe, "lax", "U", jobs),
        "DD": right_complement(C, O, universe, "lax", "DD", jobs),
        "DI": left_complement(C, O, universe, "oplax", "DI", jobs),
        "V": right_complement(C, O, universe, "oplax", "V", jobs),
    }
    preds = {
        "U": lambda f: has_lower_partner(universe, f),
        "DD": lambda f: dense_domain(universe, f),
        "DI": lambda f: dense_image(universe, f),
        "V": lambda f: has_upper_partner(universe, f),
        "LI": lambda f: is_split_epi(universe, f),
    }
    idents = _par_identifications(C) if isinstance(C, ParCategory) else {}
    out = {}
    for name, pred in preds.items():
        members = [f for f in universe.members if pred(f)]
        cm = comp.get(name)
        ident = None
        if name in idents:
            label, test = idents[name]
            ident = (label, [f for f in universe.members if test(f)])
        out[name] = PointedClassReport(
            name,
            universe.label,
            None if cm is None else cm.members,
            members,
            ident,
            {} if cm is None else cm.evidence,
        )
    # O^oplax-right against the split epis: the complement of V is recorded as LI's complement
    out["LI"].complement = comp["V"].members
    return out


def pointed_verdict(reports: dict[str, PointedClassReport]) -> Verdict:
    failures = []
    for name, rep in reports.items():
        if rep.methods_agree is False:
            failures.append({"class": name, "problem": "complement search and predicate disagree"})
        if rep.identification_agrees is False:
            failures.append({"class": name, "problem": f"differs from the {rep.identification[0]} maps"})
    within = next(iter(reports.values())).within if reports else ""
    return verdict("pointed-classes", failures, len(reports), {"within": within})


# -- conjecture harness ---------------------------------------------------------------------

CONJECTURES = ("u-right-complement", "v-left-complement", "li-left-complement")


def _sbar(universe: Universe, jobs: int) -> tuple[list[int], str]:
    C = universe.category
    if isinstance(C, ParCategory):
        return [f for f in universe.members if C.is_injective(f)], "injective component"
    dd = right_complement(C, zero_class(universe).members, universe, "lax", jobs=jobs).members
    return left_complement(C, dd, universe, "lax", jobs=jobs).members, "left lax complement of DD"


def _part(C, claim: str, lhs: ClassReport, rhs: list[int], rhs_label: str, universe: Universe, extra_evidence=None) -> dict:
    L, R = set(lhs.members), set(rhs)
    cex = []
    for f in sorted(L ^ R):
        entry = {"morphism": C.name(f), "in": "complement only" if f in L else "predicate only"}
        sq = lhs.evidence.get(f) or (extra_evidence or {}).get(f)
        if f not in L and sq is not None:
            entry["square"] = sq.names(C)
            entry["_square"] = sq
        cex.append(entry)
    return {
        "claim": claim,
        "lhs": [C.name(f) for f in sorted(L)],
        "rhs": [C.name(f) for f in sorted(R)],
        "rhs_description": rhs_label,
        "equal": L == R,
        "trivial": L == R and (len(L) == len(universe) or not L),
        "counterexamples": cex[:20],
    }


@dataclass
class ConjectureVerdict:
    conjecture: str
    within: str
    status: str
    parts: list[dict]

    def to_json(self) -> dict:
        parts = [{k: ([{kk: vv for kk, vv in c.items() if kk != "_square"} for c in v] if k == "counterexamples" else v) for k, v in p.items()} for p in self.parts]
        return {"conjecture": self.conjecture, "within": self.within, "status": self.status, "parts": parts}

    def squares(self) -> list[Square]:
        return [c["_square"] for p in self.parts for c in p["counterexamples"] if "_square" in c]


def conjecture_harness(universe: Universe, cid: str, jobs: int = 1) -> ConjectureVerdict:
    """Both sides of a conjecture within the universe; match, degenerate or counterexample.

    ``degenerate`` means the first part holds with both sides all of the
    universe or both empty, and every further part holds.
    """
    if cid not in CONJECTURES:
        raise ContractViolation(f"unknown conjecture {cid!r}; expected one of {', '.join(CONJECTURES)}")
    C = universe.category
    O = zero_class(universe).members
    parts = []
    if cid == "u-right-complement":
        U = left_complement(C, O, universe, "lax", "U", jobs)
        comp = right_complement(C, U.members, universe, "lax", "U-right", jobs)
        pred = [f for f in universe.members if (universe.hom(C.cod[f], C.dom[f]).size and C.leq[C.comp[f, universe.hom(C.cod[f], C.dom[f])], C.identity(C.cod[f])].any())]
        parts.append(_part(C, "right lax complement of U = {f | f.f* <= id_B}", comp, pred, "f.f* <= id_B for some f*", universe))
        inter = ClassReport("U-right & U", universe.label, sorted(set(comp.members) & set(U.members)), "lax", "intersection", {**U.evidence, **comp.evidence})
        la = [f for f in universe.members if any(g in universe for g in adjoint_partners(C, f, "lax"))]
        parts.append(_part(C, "intersection with U = left adjoints", inter, la, "has a right adjoint", universe))
    elif cid == "v-left-complement":
        V = right_complement(C, O, universe, "oplax", "V", jobs)
        comp = right_complement(C, V.members, universe, "oplax", "V-right", jobs)
        pred = [f for f in universe.members if (universe.hom(C.cod[f], C.dom[f]).size and C.leq[C.comp[universe.hom(C.cod[f], C.dom[f]), f], C.identity(C.dom[f])].any())]
        parts.append(_part(C, "right oplax complement of V = {f | f_*.f <= id_A}", comp, pred, "f_*.f <= id_A for some f_*", universe))
        inter = ClassReport("V-right & V", universe.label, sorted(set(comp.members) & set(V.members)), "oplax", "intersection", {**V.evidence, **comp.evidence})
        ra = [f for f in universe.members if any(g in universe for g in adjoint_partners(C, f, "oplax"))]
        parts.append(_part(C, "intersection with V = right adjoints", inter, ra, "has a left adjoint", universe))
    else:
        LI = split_epi_class(universe)
        comp = left_complement(C, LI.members, universe, "oplax", "LI-left", jobs)
        sbar, label = _sbar(universe, jobs)
        parts.append(_part(C, "left oplax complement of LI = S-bar", comp, sbar, label, universe))
    if not all(p["equal"] for p in parts):
        status = "counterexample"
    elif parts[0]["trivial"]:
        status = "degenerate"
    else:
        status = "match"
    return ConjectureVerdict(cid, universe.label, status, parts)


def revalidate(C: FinOrdCategory, s: Square) -> bool:
    """A reported counterexample square is a genuine square with no diagonal."""
    return is_square(C, s) and not all_diagonals(C, s)


def revalidate_verdict(C: FinOrdCategory, v: ConjectureVerdict) -> bool:
    """Every square attached to a counterexample re-validates as unfillable."""
    return all(revalidate(C, s) for s in v.squares())
