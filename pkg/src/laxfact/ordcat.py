"""Finite Ord-enriched categories backed by dense numpy tables.

Morphisms are interned as integers ``0..M-1``.  ``comp[g, f]`` holds the
index of ``g . f`` (or -1 when ``cod f != dom g``) and ``leq[f, g]`` the
reflexive-transitive closure of the declared hom-set order.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CategoryFileError, ContractViolation, ResourceError

DEFAULT_CAP = 10_000


def morphism_cap() -> int:
    """Total-morphism cap, overridable through ``LAXFACT_CAP``."""
    raw = os.environ.get("LAXFACT_CAP")
    if raw is None:
        return DEFAULT_CAP
    try:
        return int(raw)
    except ValueError:
        raise ResourceError(f"LAXFACT_CAP is not an integer: {raw!r}") from None


def check_cap(count: int, what: str = "category") -> None:
    cap = morphism_cap()
    if count > cap:
        raise ResourceError(f"{what} has {count} morphisms, above the cap of {cap} (set LAXFACT_CAP to raise it)")


def order_closure(order: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure of a square boolean relation (Warshall)."""
    closed = np.array(order, dtype=bool, copy=True)
    np.fill_diagonal(closed, True)
    for k in range(closed.shape[0]):
        closed |= closed[:, k : k + 1] & closed[k : k + 1, :]
    return closed


class FinOrdCategory:
    """A finite category whose hom-sets are partially ordered.

    ``order`` is the relation as declared; ``leq`` is its closure and is what
    every downstream check consults.  Construct through :func:`load_category`
    or a builder so that tables are consistent; :func:`validate_category`
    reports anything that is not.
    """

    def __init__(
        self,
        object_names: list[str],
        names: list[str],
        dom: list[int],
        cod: list[int],
        identities: list[int],
        comp: np.ndarray,
        order: np.ndarray,
        label: str = "",
    ):
        check_cap(len(names), label or "category")
        self.object_names = list(object_names)
        self.names = list(names)
        self.dom = np.asarray(dom, dtype=np.int64)
        self.cod = np.asarray(cod, dtype=np.int64)
        self.identities = np.asarray(identities, dtype=np.int64)
        self.comp = np.asarray(comp, dtype=np.int64)
        self.order = np.asarray(order, dtype=bool)
        self.leq = order_closure(self.order)
        self.label = label
        self._index = {n: i for i, n in enumerate(self.names)}
        self._homs: dict[tuple[int, int], np.ndarray] = {}
        buckets: dict[tuple[int, int], list[int]] = {}
        for i, (a, b) in enumerate(zip(self.dom.tolist(), self.cod.tolist())):
            buckets.setdefault((a, b), []).append(i)
        for key, ids in buckets.items():
            self._homs[key] = np.asarray(ids, dtype=np.int64)
        self._empty = np.zeros(0, dtype=np.int64)
        self.cache: dict = {}

    def __getstate__(self):
        state = self.__dict__.copy()
        state["cache"] = {}
        return state

    # -- basic structure -------------------------------------------------
    @property
    def n_objects(self) -> int:
        return len(self.object_names)

    @property
    def n_morphisms(self) -> int:
        return len(self.names)

    def __repr__(self) -> str:
        return f"FinOrdCategory({self.label or '?'}: {self.n_objects} objects, {self.n_morphisms} morphisms)"

    def hom(self, a: int, b: int) -> np.ndarray:
        return self._homs.get((int(a), int(b)), self._empty)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ContractViolation(f"unknown morphism {name!r} in {self.label or 'category'}") from None

    def name(self, f: int) -> str:
        return self.names[int(f)]

    def identity(self, a: int) -> int:
        return int(self.identities[a])

    def is_identity(self, f: int) -> bool:
        return int(self.identities[self.dom[f]]) == int(f)

    def compose(self, g: int, f: int) -> int:
        """``g . f``; raises on a non-composable pair."""
        if self.cod[f] != self.dom[g]:
            raise ContractViolation(
                f"cannot compose {self.names[g]} after {self.names[f]}: cod={self.cod[f]} but dom={self.dom[g]}"
            )
        return int(self.comp[g, f])

    def compose_chain(self, *ms: int) -> int:
        """Compose right-to-left: ``compose_chain(h, g, f) == h . g . f``."""
        out = ms[-1]
        for m in reversed(ms[:-1]):
            out = self.compose(m, out)
        return out

    def parallel(self, f: int, g: int) -> bool:
        return self.dom[f] == self.dom[g] and self.cod[f] == self.cod[g]

    def le(self, f: int, g: int) -> bool:
        if not self.parallel(f, g):
            raise ContractViolation(f"order comparison of non-parallel {self.names[f]} and {self.names[g]}")
        return bool(self.leq[f, g])

    @property
    def is_discrete(self) -> bool:
        return bool(np.array_equal(self.leq, np.eye(self.n_morphisms, dtype=bool)))

    def reversed(self) -> "FinOrdCategory":
        """Same category with every hom-set order flipped."""
        rev = FinOrdCategory(
            self.object_names,
            self.names,
            self.dom.tolist(),
            self.cod.tolist(),
            self.identities.tolist(),
            self.comp,
            self.order.T,
            label=f"{self.label}^rev" if self.label else "rev",
        )
        return rev

    def canonical_order(self) -> list[int]:
        return sorted(range(self.n_morphisms), key=lambda i: (int(self.dom[i]), int(self.cod[i]), i))


# -- validation ---------------------------------------------------------------


@dataclass
class ValidationReport:
    structural: list[str] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.structural and not self.violations

    def to_json(self) -> dict:
        return {"ok": self.ok, "structural": self.structural, "violations": self.violations}


def _structural_checks(C: FinOrdCategory, report: ValidationReport) -> None:
    n = C.n_morphisms
    for a in range(C.n_objects):
        i = int(C.identities[a])
        if not (0 <= i < n) or C.dom[i] != a or C.cod[i] != a:
            report.structural.append(f"identity of object {C.object_names[a]} is not an endomorphism of it")
    comp = C.comp
    composable = C.dom[:, None] == C.cod[None, :]  # [g, f]
    defined = comp >= 0
    safe = np.where(defined, comp, 0)
    wrong = composable & defined & ((C.dom[safe] != C.dom[None, :]) | (C.cod[safe] != C.cod[:, None]))
    for g, f in np.argwhere(composable & ~defined).tolist():
        report.structural.append(f"missing composite {C.names[g]} . {C.names[f]}")
    for g, f in np.argwhere(wrong).tolist():
        report.structural.append(
            f"composite {C.names[g]} . {C.names[f]} = {C.names[comp[g, f]]} has the wrong domain or codomain"
        )
    for g, f in np.argwhere(~composable & defined).tolist():
        report.structural.append(f"composite declared for non-composable {C.names[g]} . {C.names[f]}")
    bad = np.argwhere(C.order & ~((C.dom[:, None] == C.dom[None, :]) & (C.cod[:, None] == C.cod[None, :])))
    for f, g in bad.tolist():
        report.structural.append(f"order relates non-parallel {C.names[f]} <= {C.names[g]}")


def _law_checks(C: FinOrdCategory, report: ValidationReport, limit: int) -> None:
    names = C.names
    out = report.violations

    def add(msg: str) -> None:
        if len(out) < limit:
            out.append(msg)

    for f in range(C.n_morphisms):
        a, b = int(C.dom[f]), int(C.cod[f])
        if C.comp[C.identities[b], f] != f:
            add(f"left identity fails at {names[f]}")
        if C.comp[f, C.identities[a]] != f:
            add(f"right identity fails at {names[f]}")

    objs = range(C.n_objects)
    for a in objs:
        for b in objs:
            F = C.hom(a, b)
            if F.size == 0:
                continue
            for c in objs:
                G = C.hom(b, c)
                if G.size == 0:
                    continue
                GF = C.comp[np.ix_(G, F)]
                for d in objs:
                    H = C.hom(c, d)
                    if H.size == 0:
                        continue
                    left = C.comp[H[:, None, None], GF[None, :, :]]
                    HG = C.comp[np.ix_(H, G)]
                    right = C.comp[HG[:, :, None], F[None, None, :]]
                    for i, j, k in np.argwhere(left != right)[:limit].tolist():
                        add(f"associativity fails at ({names[H[i]]}, {names[G[j]]}, {names[F[k]]})")

    rel = C.order
    for f in np.flatnonzero(~np.diagonal(rel)).tolist():
        add(f"order not reflexive at {names[f]}")
    trans = (rel.astype(np.int64) @ rel.astype(np.int64)) > 0
    for f, g in np.argwhere(trans & ~rel)[:limit].tolist():
        add(f"order not transitive: {names[f]} <= ... <= {names[g]} but not {names[f]} <= {names[g]}")
    anti = C.leq & C.leq.T & ~np.eye(C.n_morphisms, dtype=bool)
    for f, g in np.argwhere(anti).tolist():
        if f < g:
            add(f"order not antisymmetric: {names[f]} and {names[g]}")

    # Whiskering on both sides against the closed order is equivalent to
    # monotonicity of composition in both arguments jointly.
    leq = C.leq
    pairs = np.argwhere(leq & ~np.eye(C.n_morphisms, dtype=bool))
    for f, f2 in pairs.tolist():
        b = int(C.cod[f])
        a = int(C.dom[f])
        for c in objs:
            G = C.hom(b, c)
            if G.size:
                l, r = C.comp[G, f], C.comp[G, f2]
                for k in np.flatnonzero(~leq[l, r]).tolist():
                    add(f"composition not monotone: {names[f]} <= {names[f2]} but {names[G[k]]} . {names[f]} !<= {names[G[k]]} . {names[f2]}")
            H = C.hom(c, a)
            if H.size:
                l, r = C.comp[f, H], C.comp[f2, H]
                for k in np.flatnonzero(~leq[l, r]).tolist():
                    add(f"composition not monotone: {names[f]} <= {names[f2]} but {names[f]} . {names[H[k]]} !<= {names[f2]} . {names[H[k]]}")


def validate_category(C: FinOrdCategory, limit: int = 200) -> ValidationReport:
    """Every violated identity/associativity/order/monotonicity instance, up to ``limit`` each kind.

    Structural problems (composites with wrong endpoints, missing entries)
    are reported separately and suppress the law checks.
    """
    report = ValidationReport()
    _structural_checks(C, report)
    if report.structural:
        return report
    _law_checks(C, report, limit)
    return report


# -- file format --------------------------------------------------------------


def _line_of(text: str, needle: str) -> int | None:
    pos = text.find(needle)
    if pos < 0:
        return None
    return text.count("\n", 0, pos) + 1


def _where(text: str, *parts: str) -> str:
    pattern = r"\[\s*" + r"\s*,\s*".join(re.escape(json.dumps(p)) for p in parts) + r"\s*[,\]]"
    m = re.search(pattern, text)
    if m:
        return f" (line {text.count(chr(10), 0, m.start()) + 1})"
    return ""


def parse_category(text: str, label: str = "", close_order: bool = True) -> FinOrdCategory:
    """Build a category from the JSON description format.

    The declared ``leq`` pairs are closed reflexively and transitively; a
    closure that is not antisymmetric is rejected.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CategoryFileError(f"{label}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    for key in ("objects", "morphisms", "identities", "compose"):
        if key not in data:
            raise CategoryFileError(f"{label}: missing key {key!r}")
    objects = [str(o) for o in data["objects"]]
    obj_index = {o: i for i, o in enumerate(objects)}
    if len(obj_index) != len(objects):
        raise CategoryFileError(f"{label}: duplicate object names")
    names: list[str] = []
    dom: list[int] = []
    cod: list[int] = []
    for entry in data["morphisms"]:
        try:
            n, d, c = entry["name"], entry["dom"], entry["cod"]
        except (KeyError, TypeError):
            raise CategoryFileError(f"{label}: bad morphism entry {entry!r}{_where(text, str(entry))}") from None
        if d not in obj_index or c not in obj_index:
            line = _line_of(text, json.dumps(n))
            raise CategoryFileError(f"{label}: morphism {n!r} has unknown endpoint" + (f" (line {line})" if line else ""))
        names.append(str(n))
        dom.append(obj_index[d])
        cod.append(obj_index[c])
    check_cap(len(names), label or "category file")
    index = {n: i for i, n in enumerate(names)}
    if len(index) != len(names):
        raise CategoryFileError(f"{label}: duplicate morphism names")

    def lookup(n: str, ctx: str) -> int:
        if n not in index:
            line = _line_of(text, json.dumps(n)) if n else None
            raise CategoryFileError(f"{label}: unknown morphism {n!r} in {ctx}" + (f" (line {line})" if line else ""))
        return index[n]

    identities = [-1] * len(objects)
    for o, n in data["identities"].items():
        if o not in obj_index:
            raise CategoryFileError(f"{label}: identity for unknown object {o!r}")
        identities[obj_index[o]] = lookup(n, "identities")
    missing = [objects[i] for i, v in enumerate(identities) if v < 0]
    if missing:
        raise CategoryFileError(f"{label}: no identity declared for {missing}")

    M = len(names)
    comp = np.full((M, M), -1, dtype=np.int64)
    for entry in data["compose"]:
        if not isinstance(entry, list) or len(entry) != 3:
            raise CategoryFileError(f"{label}: compose entry {entry!r} is not [g, f, gf]")
        g, f, gf = (lookup(x, "compose") for x in entry)
        if comp[g, f] >= 0 and comp[g, f] != gf:
            raise CategoryFileError(f"{label}: conflicting composites for {entry[0]} . {entry[1]}{_where(text, *entry)}")
        comp[g, f] = gf
    # identity composites are implied
    for a, i in enumerate(identities):
        for f in range(M):
            if cod[f] == a and comp[i, f] < 0:
                comp[i, f] = f
            if dom[f] == a and comp[f, i] < 0:
                comp[f, i] = f

    order = np.eye(M, dtype=bool) if close_order else np.zeros((M, M), dtype=bool)
    for entry in data.get("leq", []):
        if not isinstance(entry, list) or len(entry) != 2:
            raise CategoryFileError(f"{label}: leq entry {entry!r} is not [f, g]")
        f, g = (lookup(x, "leq") for x in entry)
        if dom[f] != dom[g] or cod[f] != cod[g]:
            raise CategoryFileError(f"{label}: leq relates non-parallel {entry[0]}, {entry[1]}{_where(text, *entry)}")
        order[f, g] = True
    if close_order:
        order = order_closure(order)
        anti = order & order.T & ~np.eye(M, dtype=bool)
        if anti.any():
            f, g = np.argwhere(anti)[0].tolist()
            raise CategoryFileError(f"{label}: order closure is not antisymmetric ({names[f]} and {names[g]})")
    return FinOrdCategory(objects, names, dom, cod, identities, comp, order, label=label)


def load_category(path: str | os.PathLike, close_order: bool = True) -> FinOrdCategory:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CategoryFileError(f"{path}: {exc.strerror}") from None
    return parse_category(text, label=path.stem, close_order=close_order)


def category_to_json(C: FinOrdCategory) -> dict:
    """Description-file dict with morphisms in canonical (dom, cod, index) order."""
    order = C.canonical_order()
    objs = C.object_names
    morphisms = [{"name": C.names[i], "dom": objs[C.dom[i]], "cod": objs[C.cod[i]]} for i in order]
    identities = {objs[a]: C.names[C.identities[a]] for a in range(C.n_objects)}
    compose = []
    for f in order:
        for g in order:
            c = C.comp[g, f]
            if c >= 0:
                compose.append([C.names[g], C.names[f], C.names[c]])
    leq = [[C.names[f], C.names[g]] for f in order for g in order if f != g and C.leq[f, g]]
    return {"objects": objs, "morphisms": morphisms, "identities": identities, "compose": compose, "leq": leq}


def dump_category(C: FinOrdCategory) -> str:
    data = category_to_json(C)
    lines = ["{"]
    lines.append(f'  "objects": {json.dumps(data["objects"])},')
    lines.append('  "morphisms": [')
    lines.append(",\n".join("    " + json.dumps(m) for m in data["morphisms"]))
    lines.append("  ],")
    lines.append(f'  "identities": {json.dumps(data["identities"], sort_keys=True)},')
    lines.append('  "compose": [')
    lines.append(",\n".join("    " + json.dumps(c) for c in data["compose"]))
    lines.append("  ],")
    lines.append('  "leq": [')
    lines.append(",\n".join("    " + json.dumps(c) for c in data["leq"]))
    lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"
