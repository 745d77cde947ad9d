"""Squares, diagonal fillers and (op)lax weak orthogonality.

For a pair ``f: A -> B``, ``g: C -> D`` every check reduces to three boolean
matrices over ``U = Hom(A, C)``, ``V = Hom(B, D)`` and ``Dg = Hom(B, C)``:

* ``sq[u, v]``  -- ``(u, v)`` is a square of the requested kind,
* ``up[u, d]``  -- the upper triangle holds for ``d``,
* ``lo[v, d]``  -- the lower triangle holds for ``d``,

and the square is fillable iff ``up[u] & lo[v]`` is non-empty.
"""

from __future__ import annotations

import concurrent.futures as cf
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from .errors import ContractViolation
from .ordcat import FinOrdCategory

KINDS = ("lax", "oplax", "strict")


def check_kind(kind: str) -> str:
    if kind not in KINDS:
        raise ContractViolation(f"unknown square kind {kind!r}; expected one of {KINDS}")
    return kind


@dataclass(frozen=True)
class Square:
    """``(u, v): f -> g`` with ``u: dom f -> dom g`` and ``v: cod f -> cod g``."""

    f: int
    g: int
    u: int
    v: int
    kind: str = "lax"

    def names(self, C: FinOrdCategory) -> dict:
        return {"f": C.name(self.f), "g": C.name(self.g), "u": C.name(self.u), "v": C.name(self.v), "kind": self.kind}


@dataclass
class Universe:
    """The morphisms a check quantifies over, inside an ambient category.

    Witnesses (diagonals, middle objects of factorisations) may use any
    morphism of ``category``; classes and complements only range over
    ``members``.
    """

    category: FinOrdCategory
    members: tuple[int, ...]
    label: str
    max_size: Optional[int] = None

    def __post_init__(self):
        self.members = tuple(sorted(int(m) for m in self.members))
        self._set = frozenset(self.members)
        self._mask = np.zeros(self.category.n_morphisms, dtype=bool)
        self._mask[list(self.members)] = True

    def __contains__(self, f: int) -> bool:
        return int(f) in self._set

    def __len__(self) -> int:
        return len(self.members)

    @property
    def objects(self) -> list[int]:
        C = self.category
        return sorted({int(C.dom[m]) for m in self.members} | {int(C.cod[m]) for m in self.members})

    def hom(self, a: int, b: int) -> np.ndarray:
        H = self.category.hom(a, b)
        return H[self._mask[H]]


def full_universe(C: FinOrdCategory) -> Universe:
    return Universe(C, tuple(range(C.n_morphisms)), label=C.label or "category")


def par_universe(max_size: int, ambient_size: Optional[int] = None) -> Universe:
    """Morphisms of Par(FinSet<=N), inside Par(FinSet<=ambient_size)."""
    from .parmap import build_par_category

    amb = build_par_category(max(ambient_size or max_size, max_size))
    members = [i for i in range(amb.n_morphisms) if amb.dom[i] <= max_size and amb.cod[i] <= max_size]
    return Universe(amb, tuple(members), label=f"Par<={max_size}", max_size=max_size)


# -- per-pair matrices -----------------------------------------------------------


def _le(C: FinOrdCategory, kind: str, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Elementwise 2-cell ``x => y`` in the sense the kind uses for 'x is below y'."""
    if kind == "strict":
        return x == y
    return C.leq[x, y]


def pair_matrices(C: FinOrdCategory, f: int, g: int, kind: str):
    check_kind(kind)
    A, B = int(C.dom[f]), int(C.cod[f])
    Cc, D = int(C.dom[g]), int(C.cod[g])
    U, V, Dg = C.hom(A, Cc), C.hom(B, D), C.hom(B, Cc)
    gu, vf = C.comp[g, U], C.comp[V, f]
    df, gd = C.comp[Dg, f], C.comp[g, Dg]
    if kind == "lax":
        sq = C.leq[gu[:, None], vf[None, :]]
        up = C.leq[U[:, None], df[None, :]]
        lo = C.leq[gd[None, :], V[:, None]]
    elif kind == "oplax":
        sq = C.leq[vf[None, :], gu[:, None]]
        up = C.leq[df[None, :], U[:, None]]
        lo = C.leq[V[:, None], gd[None, :]]
    else:
        sq = gu[:, None] == vf[None, :]
        up = U[:, None] == df[None, :]
        lo = gd[None, :] == V[:, None]
    return U, V, Dg, sq, up, lo


def _fill(up: np.ndarray, lo: np.ndarray) -> np.ndarray:
    if up.shape[1] == 0:
        return np.zeros((up.shape[0], lo.shape[0]), dtype=bool)
    return (up.astype(np.int32) @ lo.T.astype(np.int32)) > 0


def is_square(C: FinOrdCategory, s: Square) -> bool:
    check_kind(s.kind)
    f, g, u, v = s.f, s.g, s.u, s.v
    if not (C.dom[u] == C.dom[f] and C.cod[u] == C.dom[g] and C.dom[v] == C.cod[f] and C.cod[v] == C.cod[g]):
        raise ContractViolation(f"square shape mismatch: {s.names(C)}")
    gu, vf = C.comp[g, u], C.comp[v, f]
    if s.kind == "lax":
        return bool(C.leq[gu, vf])
    if s.kind == "oplax":
        return bool(C.leq[vf, gu])
    return bool(gu == vf)


def is_filler(C: FinOrdCategory, s: Square, d: int) -> bool:
    if C.dom[d] != C.cod[s.f] or C.cod[d] != C.dom[s.g]:
        raise ContractViolation(f"{C.name(d)} is not a candidate diagonal for {s.names(C)}")
    df, gd = C.comp[d, s.f], C.comp[s.g, d]
    if s.kind == "lax":
        return bool(C.leq[s.u, df] and C.leq[gd, s.v])
    if s.kind == "oplax":
        return bool(C.leq[df, s.u] and C.leq[s.v, gd])
    return bool(df == s.u and gd == s.v)


def all_diagonals(C: FinOrdCategory, s: Square) -> list[int]:
    """Every filler of ``s`` in canonical order."""
    Dg = C.hom(C.cod[s.f], C.dom[s.g])
    if Dg.size == 0:
        return []
    df, gd = C.comp[Dg, s.f], C.comp[s.g, Dg]
    if s.kind == "lax":
        ok = C.leq[s.u, df] & C.leq[gd, s.v]
    elif s.kind == "oplax":
        ok = C.leq[df, s.u] & C.leq[s.v, gd]
    else:
        ok = (df == s.u) & (gd == s.v)
    return Dg[ok].tolist()


def find_diagonal(C: FinOrdCategory, s: Square) -> Optional[int]:
    """First filler in canonical order, or None."""
    ds = all_diagonals(C, s)
    return ds[0] if ds else None


def squares(C: FinOrdCategory, f: int, g: int, kind: str) -> list[Square]:
    U, V, _, sq, _, _ = pair_matrices(C, f, g, kind)
    return [Square(f, g, int(U[i]), int(V[j]), kind) for i, j in np.argwhere(sq).tolist()]


def _orth_cache(C: FinOrdCategory) -> dict:
    return C.cache.setdefault("orth", {})


def orthogonality(C: FinOrdCategory, f: int, g: int, kind: str) -> tuple[bool, Optional[Square]]:
    """Whether every ``kind`` square from f to g has a filler, plus the first that does not."""
    key = (int(f), int(g), kind)
    cache = _orth_cache(C)
    hit = cache.get(key)
    if hit is not None:
        return hit
    U, V, _, sq, up, lo = pair_matrices(C, f, g, kind)
    bad = sq & ~_fill(up, lo)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        res = (False, Square(int(f), int(g), int(U[i]), int(V[j]), kind))
    else:
        res = (True, None)
    cache[key] = res
    return res


def orthogonal(C: FinOrdCategory, f: int, g: int, kind: str = "lax") -> bool:
    return orthogonality(C, f, g, kind)[0]


def lax_orthogonal(C, f, g) -> bool:
    return orthogonal(C, f, g, "lax")


def oplax_orthogonal(C, f, g) -> bool:
    return orthogonal(C, f, g, "oplax")


def strict_orthogonal(C, f, g) -> bool:
    return orthogonal(C, f, g, "strict")


# -- whole relations, optionally in worker processes ------------------------------------

_WORKER_CAT: Optional[FinOrdCategory] = None
PARALLEL_MIN_PAIRS = 400


def _init_worker(C: FinOrdCategory) -> None:
    global _WORKER_CAT
    _WORKER_CAT = C


def _worker_rows(args):
    rows, cols, kind = args
    C = _WORKER_CAT
    out = []
    for f in rows:
        for g in cols:
            ok, w = orthogonality(C, f, g, kind)
            out.append((f, g, ok, None if w is None else (w.u, w.v)))
    return out


def ensure_relation(C: FinOrdCategory, X: Iterable[int], Y: Iterable[int], kind: str, jobs: int = 1) -> None:
    """Populate the orthogonality cache for every pair in X x Y.

    With ``jobs > 1`` pairs are evaluated in worker processes; results are
    keyed by pair so the cache content does not depend on scheduling.
    """
    X, Y = [int(x) for x in X], [int(y) for y in Y]
    cache = _orth_cache(C)
    todo = [f for f in X if any((f, g, kind) not in cache for g in Y)]
    if not todo:
        return
    if jobs <= 1 or len(todo) * len(Y) < PARALLEL_MIN_PAIRS:
        for f in todo:
            for g in Y:
                orthogonality(C, f, g, kind)
        return
    chunk = max(1, len(todo) // (jobs * 4))
    batches = [(todo[i : i + chunk], Y, kind) for i in range(0, len(todo), chunk)]
    with cf.ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(C,)) as pool:
        for result in pool.map(_worker_rows, batches):
            for f, g, ok, w in result:
                cache[(f, g, kind)] = (ok, None if w is None else Square(f, g, w[0], w[1], kind))


# -- classes and complements ---------------------------------------------------------


@dataclass
class ClassReport:
    """A class of morphisms within a universe together with the evidence behind it."""

    name: str
    universe: str
    members: list[int]
    kind: Optional[str] = None
    method: str = "complement-search"
    evidence: dict[int, Square] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def __contains__(self, f: int) -> bool:
        return int(f) in set(self.members)

    @property
    def member_set(self) -> frozenset:
        return frozenset(self.members)

    def to_json(self, C: FinOrdCategory) -> dict:
        out = {
            "name": self.name,
            "within": self.universe,
            "kind": self.kind,
            "method": self.method,
            "members": [C.name(m) for m in sorted(self.members)],
            "count": len(self.members),
        }
        if self.evidence:
            out["excluded"] = {C.name(f): s.names(C) for f, s in sorted(self.evidence.items())}
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def left_complement(
    C: FinOrdCategory, H: Iterable[int], universe: Universe, kind: str = "lax", name: str = "", jobs: int = 1
) -> ClassReport:
    """``{f in universe | f is orthogonal to every h in H}`` with one failing square per excluded f."""
    H = sorted(set(int(h) for h in H))
    ensure_relation(C, universe.members, H, kind, jobs)
    members, evidence = [], {}
    for f in universe.members:
        for h in H:
            ok, w = orthogonality(C, f, h, kind)
            if not ok:
                evidence[f] = w
                break
        else:
            members.append(f)
    return ClassReport(name or f"left-{kind}-complement", universe.label, members, kind, "complement-search", evidence)


def right_complement(
    C: FinOrdCategory, H: Iterable[int], universe: Universe, kind: str = "lax", name: str = "", jobs: int = 1
) -> ClassReport:
    """``{g in universe | every h in H is orthogonal to g}``."""
    H = sorted(set(int(h) for h in H))
    ensure_relation(C, H, universe.members, kind, jobs)
    members, evidence = [], {}
    for g in universe.members:
        for h in H:
            ok, w = orthogonality(C, h, g, kind)
            if not ok:
                evidence[g] = w
                break
        else:
            members.append(g)
    return ClassReport(name or f"right-{kind}-complement", universe.label, members, kind, "complement-search", evidence)


def adjoint_partners(C: FinOrdCategory, f: int, kind: str = "lax") -> list[int]:
    """Morphisms ``g`` making ``f`` an equivalence for ``kind``.

    lax: ``f -| g`` (id <= g.f, f.g <= id); oplax: ``g -| f``; strict: inverses.
    """
    A, B = int(C.dom[f]), int(C.cod[f])
    G = C.hom(B, A)
    if G.size == 0:
        return []
    gf, fg = C.comp[G, f], C.comp[f, G]
    ia, ib = C.identity(A), C.identity(B)
    if kind == "lax":
        ok = C.leq[ia, gf] & C.leq[fg, ib]
    elif kind == "oplax":
        ok = C.leq[gf, ia] & C.leq[ib, fg]
    else:
        ok = (gf == ia) & (fg == ib)
    return G[ok].tolist()


def equivalence_classes(C: FinOrdCategory, universe: Universe, kind: str = "lax", jobs: int = 1) -> dict[str, list[int]]:
    """The four classes whose coincidence characterises the kind's equivalences.

    ``self``: f orthogonal to itself; ``partner``: an adjoint partner exists;
    ``left-universal``: f orthogonal to every member; ``right-universal``:
    every member orthogonal to f.
    """
    X = universe.members
    ensure_relation(C, X, X, kind, jobs)
    return {
        "self": [f for f in X if orthogonal(C, f, f, kind)],
        "partner": [f for f in X if adjoint_partners(C, f, kind)],
        "left-universal": [f for f in X if all(orthogonal(C, f, g, kind) for g in X)],
        "right-universal": [f for f in X if all(orthogonal(C, g, f, kind) for g in X)],
    }


# -- verdicts ------------------------------------------------------------------------


@dataclass
class Verdict:
    """Outcome of a named check.  ``status`` is pass, fail, vacuous or inconclusive."""

    name: str
    status: str
    details: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status in ("pass", "vacuous")

    def to_json(self) -> dict:
        out = {"name": self.name, "status": self.status}
        if self.details:
            out["details"] = self.details
        if self.failures:
            out["failures"] = self.failures
        return out


def verdict(name: str, failures: list, checked: int, details: Optional[dict] = None) -> Verdict:
    if failures:
        status = "fail"
    elif checked == 0:
        status = "vacuous"
    else:
        status = "pass"
    d = {"checked": checked}
    if details:
        d.update(details)
    return Verdict(name, status, d, failures[:50])


def check_prefactorisation(
    C: FinOrdCategory, L: Iterable[int], R: Iterable[int], universe: Universe, kind: str = "lax", jobs: int = 1
) -> Verdict:
    L, R = sorted(set(L)), sorted(set(R))
    rc = right_complement(C, L, universe, kind, jobs=jobs)
    lc = left_complement(C, R, universe, kind, jobs=jobs)
    failures = []
    for g in sorted(set(rc.members) ^ set(R)):
        side = "missing from R" if g in rc else "in R but not orthogonal to L"
        entry = {"morphism": C.name(g), "problem": f"right complement of L: {side}"}
        if g in rc.evidence:
            entry["square"] = rc.evidence[g].names(C)
        failures.append(entry)
    for f in sorted(set(lc.members) ^ set(L)):
        side = "missing from L" if f in lc else "in L but not orthogonal to R"
        entry = {"morphism": C.name(f), "problem": f"left complement of R: {side}"}
        if f in lc.evidence:
            entry["square"] = lc.evidence[f].names(C)
        failures.append(entry)
    return verdict("prefactorisation", failures, len(universe), {"within": universe.label, "kind": kind})


def build_prefactorisation(
    C: FinOrdCategory, H: Iterable[int], side: str, universe: Universe, kind: str = "lax", jobs: int = 1
) -> tuple[ClassReport, ClassReport, Verdict]:
    """``(^(H^), H^)`` for ``side='right'`` or ``(^H, (^H)^)`` for ``side='left'``, re-checked."""
    H = sorted(set(H))
    if side == "right":
        R = right_complement(C, H, universe, kind, name="R", jobs=jobs)
        L = left_complement(C, R.members, universe, kind, name="L", jobs=jobs)
    elif side == "left":
        L = left_complement(C, H, universe, kind, name="L", jobs=jobs)
        R = right_complement(C, L.members, universe, kind, name="R", jobs=jobs)
    else:
        raise ContractViolation(f"side must be 'left' or 'right', not {side!r}")
    return L, R, check_prefactorisation(C, L.members, R.members, universe, kind, jobs)


def class_membership(C: FinOrdCategory, cls: Iterable[int], opposite: Iterable[int], universe: Universe, kind: str, left: bool) -> Callable[[int], bool]:
    """Membership test extended beyond the universe.

    Universe members are looked up in ``cls``; other ambient morphisms count
    as members when they are orthogonal to every element of ``opposite``
    (i.e. they lie in the complement that defines ``cls``).
    """
    cls = frozenset(cls)
    opposite = sorted(set(opposite))
    memo: dict[int, bool] = {}

    def member(x: int) -> bool:
        x = int(x)
        if x in universe:
            return x in cls
        if x not in memo:
            if left:
                memo[x] = all(orthogonal(C, x, r, kind) for r in opposite)
            else:
                memo[x] = all(orthogonal(C, l, x, kind) for l in opposite)
        return memo[x]

    return member


def find_factorisation(
    C: FinOrdCategory, f: int, left_member: Callable[[int], bool], right_member: Callable[[int], bool]
) -> Optional[tuple[int, int, int]]:
    """First ``(l, W, r)`` with ``r . l == f``, scanning W, then l, then r, in canonical order."""
    A, B = int(C.dom[f]), int(C.cod[f])
    for W in range(C.n_objects):
        Ls, Rs = C.hom(A, W), C.hom(W, B)
        if Ls.size == 0 or Rs.size == 0:
            continue
        hits = C.comp[np.ix_(Rs, Ls)] == f  # [r, l]
        for j, i in np.argwhere(hits.T).tolist():
            l, r = int(Ls[j]), int(Rs[i])
            if left_member(l) and right_member(r):
                return l, W, r
    return None


def check_lwfs(
    C: FinOrdCategory,
    L: Iterable[int],
    R: Iterable[int],
    universe: Universe,
    kind: str = "lax",
    jobs: int = 1,
    hints: Optional[dict[int, tuple[int, int, int]]] = None,
) -> Verdict:
    """Prefactorisation check plus an (L, R)-factorisation of every universe member.

    Factorisations may pass through ambient objects outside the universe;
    such components are judged by orthogonality against the opposite class.
    ``hints`` maps f to a candidate ``(l, W, r)`` tried before the search.
    """
    L, R = sorted(set(L)), sorted(set(R))
    pre = check_prefactorisation(C, L, R, universe, kind, jobs)
    lm = class_membership(C, L, R, universe, kind, left=True)
    rm = class_membership(C, R, L, universe, kind, left=False)
    witnesses, failures = {}, list(pre.failures)
    for f in universe.members:
        w = None
        if hints and f in hints:
            l, W, r = hints[f]
            if C.comp[r, l] == f and lm(l) and rm(r):
                w = (l, W, r)
        if w is None:
            w = find_factorisation(C, f, lm, rm)
        if w is None:
            failures.append({"morphism": C.name(f), "problem": "no (L, R)-factorisation in the ambient category"})
        else:
            l, W, r = w
            witnesses[C.name(f)] = {"left": C.name(l), "mid": C.object_names[W], "right": C.name(r)}
    v = verdict("lwfs", failures, len(universe), {"within": universe.label, "kind": kind, "prefactorisation": pre.status})
    v.details["witnesses"] = witnesses
    return v
