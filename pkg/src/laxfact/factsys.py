"""Functorial factorisation schemes and their law checkers.

A scheme assigns to every morphism ``f`` a factorisation ``f = Rf . Lf``
through a middle object ``Kf`` and to every square ``(u, v): f -> g`` of
its kind a morphism ``K(u, v): Kf -> Kg``.  The checkers below verify the
section law, the action on squares, predistributivity and the underlying
weak factorisation system over a :class:`~laxfact.ortho.Universe`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import parmap as pm
from .errors import BeyondAmbient, ContractViolation, PreconditionError
from .ordcat import FinOrdCategory
from .ortho import (
    ClassReport,
    Square,
    Universe,
    Verdict,
    all_diagonals,
    check_lwfs,
    ensure_relation,
    find_diagonal,
    is_filler,
    is_square,
    orthogonality,
    pair_matrices,
    verdict,
)
from .parmap import PartialMap, ParCategory


class FactorisationScheme:
    """Base class; subclasses provide :meth:`_factor` and :meth:`kmap`."""

    name = "scheme"

    def __init__(self, category: FinOrdCategory, kind: str):
        self.category = category
        self.kind = kind
        self._factors: dict[int, tuple[int, int, int]] = {}
        self._kcache: dict[tuple[int, int, int, int], int] = {}

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name}, {self.kind}, {self.category.label})"

    def factor(self, f: int) -> tuple[int, int, int]:
        """``(Lf, Kf, Rf)``; raises BeyondAmbient if Kf is not an ambient object."""
        f = int(f)
        if f not in self._factors:
            self._factors[f] = self._factor(f)
        return self._factors[f]

    def L(self, f: int) -> int:
        return self.factor(f)[0]

    def K(self, f: int) -> int:
        return self.factor(f)[1]

    def R(self, f: int) -> int:
        return self.factor(f)[2]

    def _factor(self, f: int) -> tuple[int, int, int]:
        raise NotImplementedError

    def kmap(self, s: Square) -> int:
        key = (s.f, s.g, s.u, s.v)
        if key not in self._kcache:
            self._kcache[key] = self._kmap(s)
        return self._kcache[key]

    def _kmap(self, s: Square) -> int:
        raise NotImplementedError

    def kmap_batch(self, f: int, g: int, U: np.ndarray, V: np.ndarray) -> np.ndarray:
        return np.asarray([self.kmap(Square(f, g, int(u), int(v), self.kind)) for u, v in zip(U, V)], dtype=np.int64)

    # arrow-category functors on squares: L(u, v) = (u, K(u, v)), R(u, v) = (K(u, v), v)
    def L_square(self, s: Square) -> Square:
        return Square(self.L(s.f), self.L(s.g), s.u, self.kmap(s), self.kind)

    def R_square(self, s: Square) -> Square:
        return Square(self.R(s.f), self.R(s.g), self.kmap(s), s.v, self.kind)

    def eta(self, f: int) -> Square:
        """``eta_f = (Lf, id): f -> Rf``."""
        C = self.category
        return Square(f, self.R(f), self.L(f), C.identity(C.cod[f]), self.kind)

    def epsilon(self, f: int) -> Square:
        """``eps_f = (id, Rf): Lf -> f``."""
        C = self.category
        return Square(self.L(f), f, C.identity(C.dom[f]), self.R(f), self.kind)

    def require_kind(self, kind: Optional[str]) -> None:
        if kind is not None and kind != self.kind:
            raise ContractViolation(f"{kind} checker applied to the {self.kind} scheme {self.name}")


# -- concrete schemes -----------------------------------------------------------------


class TrivialScheme(FactorisationScheme):
    """``f = id . f`` (side='left') or ``f = f . id`` (side='right'); valid in any category."""

    def __init__(self, category: FinOrdCategory, side: str = "left", kind: str = "lax"):
        if side not in ("left", "right"):
            raise ContractViolation(f"side must be left or right, not {side!r}")
        super().__init__(category, kind)
        self.side = side
        self.name = f"trivial-{side}"

    def _factor(self, f):
        C = self.category
        if self.side == "left":
            b = int(C.cod[f])
            return f, b, C.identity(b)
        a = int(C.dom[f])
        return C.identity(a), a, f

    def _kmap(self, s):
        return s.v if self.side == "left" else s.u

    def kmap_batch(self, f, g, U, V):
        return np.asarray(V if self.side == "left" else U, dtype=np.int64)


class DomainTotalScheme(FactorisationScheme):
    """``f = Rf . Lf`` with Lf the partial identity onto D_f and Rf = phi_f total.

    ``K(u, v) = Lg . u . incl(D_f)``: defined on D_{g.u} and sending a to u(a).
    """

    name = "domain-total"

    def __init__(self, category: ParCategory):
        super().__init__(category, "lax")
        self._incl: dict[int, int] = {}

    def parts(self, f: int) -> tuple[PartialMap, PartialMap, PartialMap]:
        p = self.category.map(f)
        D = p.defined
        Lf = pm.partial_inverse_of_inclusion(D, p.dom)
        Rf = PartialMap(len(D), p.cod, tuple(p.values[i] for i in D))
        return Lf, Rf, pm.inclusion(D, p.dom)

    def _factor(self, f):
        C = self.category
        Lf, Rf, incl = self.parts(f)
        self._incl[int(f)] = C.id_of(incl)
        return C.id_of(Lf), Lf.cod, C.id_of(Rf)

    def inclusion(self, f: int) -> int:
        self.factor(f)
        return self._incl[int(f)]

    def _kmap(self, s):
        C = self.category
        return int(C.comp[C.comp[self.L(s.g), s.u], self.inclusion(s.f)])

    def kmap_batch(self, f, g, U, V):
        C = self.category
        return C.comp[C.comp[self.L(g), np.asarray(U, dtype=np.int64)], self.inclusion(f)]


@dataclass(frozen=True)
class BaseFactoriser:
    """A factorisation ``phi = m . e`` of total maps of finite sets with a chosen lift."""

    name: str
    left_name: str
    right_name: str
    is_left: Callable[[PartialMap], bool]
    is_right: Callable[[PartialMap], bool]
    factor: Callable[[tuple, int], tuple[tuple, int, tuple]]


def _image_factor(values: tuple, n: int) -> tuple[tuple, int, tuple]:
    img = sorted(set(values))
    pos = {b: j for j, b in enumerate(img)}
    return tuple(pos[t] for t in values), len(img), tuple(img)


def _graph_factor(values: tuple, n: int) -> tuple[tuple, int, tuple]:
    d = len(values)
    return tuple(range(d)), d + n, tuple(values) + tuple(range(n))


IMAGE = BaseFactoriser("epi-mono", "surjective", "injective", pm.is_surjective, pm.is_injective, _image_factor)
GRAPH = BaseFactoriser("mono-epi", "injective", "surjective", pm.is_injective, pm.is_surjective, _graph_factor)
BASES = {"epi-mono": IMAGE, "mono-epi": GRAPH}


def stability_check(base: BaseFactoriser, max_size: int, side: str = "left") -> Optional[dict]:
    """Search for a pullback of an E-map (or M-map) along an injection that leaves the class.

    Returns None when stable within sizes <= max_size, else a description of
    the counterexample pullback.
    """
    pred = base.is_left if side == "left" else base.is_right
    for x in range(max_size + 1):
        for y in range(max_size + 1):
            for e in pm.enumerate_partial_maps(x, y):
                if not pm.is_total(e) or not pred(e):
                    continue
                for z in range(y + 1):
                    for sub in itertools.combinations(range(y), z):
                        pos = {b: j for j, b in enumerate(sub)}
                        pre = [i for i in range(x) if e.values[i] in pos]
                        pb = PartialMap(len(pre), z, tuple(pos[e.values[i]] for i in pre))
                        if not pred(pb):
                            return {"map": str(e), "along": str(pm.inclusion(sub, y)), "pullback": str(pb)}
    return None


class TransferScheme(FactorisationScheme):
    """Oplax scheme on Par induced by a factorisation of total maps.

    ``Lf = (sigma_f, e_phi)``, ``Rf = (id, m_phi)``.  ``K(u, v)`` is defined on
    the preimage of D_v under Rf and given there by the base lift ``k``: the
    value forced through e, otherwise an element of the fibre of m_g.  The
    fibre pick is ``canonical`` (last in scan: for the coproduct factorisation
    this is the copy in the B summand, which keeps K functorial) or
    ``leftmost``.  Epi-mono fibres of unforced points never arise, so both
    picks agree there.
    """

    def __init__(self, category: ParCategory, base: BaseFactoriser, check_stability: bool = True, lift: str = "canonical"):
        super().__init__(category, "oplax")
        if lift not in ("canonical", "leftmost"):
            raise ContractViolation(f"lift must be canonical or leftmost, not {lift!r}")
        self.base = base
        self.lift = lift
        self.name = f"transfer-{base.name}" + ("" if lift == "canonical" else "-leftmost")
        if check_stability:
            n = min(category.max_size, 3)
            for side in ("left",):
                bad = stability_check(base, n, side)
                if bad is not None:
                    raise PreconditionError(f"{base.left_name} maps are not stable under pullback: {bad}")

    def parts(self, f: int) -> tuple[PartialMap, PartialMap]:
        p = self.category.map(f)
        D = p.defined
        e, k, m = self.base.factor(tuple(p.values[i] for i in D), p.cod)
        lvals: list[Optional[int]] = [None] * p.dom
        for j, i in enumerate(D):
            lvals[i] = e[j]
        return PartialMap(p.dom, k, tuple(lvals)), PartialMap(k, p.cod, m)

    def _factor(self, f):
        C = self.category
        l, r = self.parts(f)
        return C.id_of(l), l.cod, C.id_of(r)

    def left_member(self, f: int) -> bool:
        """Membership in E-bar: the partial component lies in E."""
        return self.base.is_left(self.category.map(f))

    def right_member(self, f: int) -> bool:
        return self.base.is_right(self.category.map(f))

    def _kmap(self, s):
        C = self.category
        lf, rf = self.parts(s.f)
        lg, rg = self.parts(s.g)
        u, v = C.map(s.u), C.map(s.v)
        fmap = C.map(s.f)
        forced: dict[int, int] = {}
        for x in fmap.defined:
            if v.values[fmap.values[x]] is None:
                continue
            y, z = lf.values[x], lg.values[u.values[x]]
            if y in forced and forced[y] != z:
                raise AssertionError(f"base lift is not well defined for {s.names(C)}")
            forced[y] = z
        kvals: list[Optional[int]] = []
        for y in range(lf.cod):
            b = v.values[rf.values[y]]
            if b is None:
                kvals.append(None)
            elif y in forced:
                kvals.append(forced[y])
            else:
                fibre = [z for z in range(rg.dom) if rg.values[z] == b]
                if not fibre:
                    raise AssertionError(f"no base lift for {s.names(C)}")
                kvals.append(fibre[-1] if self.lift == "canonical" else fibre[0])
        for y, z in enumerate(kvals):
            if z is not None and rg.values[z] != v.values[rf.values[y]]:
                raise AssertionError(f"base lift fails the lower triangle for {s.names(C)}")
        return C.id_of(PartialMap(lf.cod, lg.cod, tuple(kvals)))

    def stable_diagonal(self, s: Square) -> int:
        """The oplax diagonal ``(sigma_v, sigma_g . d)`` for f in E-bar, g in M-bar.

        ``d: D_v -> D_g`` is the base lift of the square whose left side is
        phi_f pulled back to D_v and whose top is u restricted to D_{v.f}.
        """
        C = self.category
        f, g, u, v = (C.map(x) for x in (s.f, s.g, s.u, s.v))
        forced: dict[int, int] = {}
        for x in f.defined:
            b = f.values[x]
            if v.values[b] is None:
                continue
            z = u.values[x]
            if z is None or g.values[z] is None:
                raise ContractViolation(f"{s.names(C)} is not an oplax square")
            if b in forced and forced[b] != z:
                raise AssertionError("top map does not factor through phi_f")
            forced[b] = z
        vals: list[Optional[int]] = []
        for b in range(f.cod):
            if v.values[b] is None:
                vals.append(None)
            elif b in forced:
                vals.append(forced[b])
            else:
                fibre = [z for z in g.defined if g.values[z] == v.values[b]]
                if not fibre:
                    raise AssertionError(f"no lift of {v} through {g}")
                vals.append(fibre[0])
        return C.id_of(PartialMap(f.cod, g.dom, tuple(vals)))


def make_scheme(name: str, category: FinOrdCategory, lift: str = "canonical") -> FactorisationScheme:
    if name in ("trivial-left", "trivial-right"):
        return TrivialScheme(category, name.split("-")[1])
    if not isinstance(category, ParCategory):
        raise ContractViolation(f"scheme {name!r} is only defined on Par categories")
    if name == "domain-total":
        return DomainTotalScheme(category)
    if name.startswith("transfer-") and name[len("transfer-") :] in BASES:
        return TransferScheme(category, BASES[name[len("transfer-") :]], lift=lift)
    raise ContractViolation(f"unknown scheme {name!r}")


SCHEME_NAMES = ("domain-total", "transfer-epi-mono", "transfer-mono-epi", "trivial-left", "trivial-right")


def ambient_size_for(scheme_name: str, max_size: int) -> int:
    """Objects needed to hold every middle object for Par<=max_size."""
    if scheme_name == "transfer-mono-epi":
        return min(2 * max_size, pm.HARD_CAP)
    return max_size


# -- checkers -------------------------------------------------------------------------


def _factor_or_none(scheme: FactorisationScheme, f: int):
    try:
        return scheme.factor(f)
    except BeyondAmbient:
        return None


def _with_inconclusive(v: Verdict, beyond: list[str]) -> Verdict:
    if beyond:
        v.details["beyond_ambient"] = beyond[:50]
        if v.status in ("pass", "vacuous"):
            v.status = "inconclusive"
    return v


def check_section(scheme: FactorisationScheme, universe: Universe) -> Verdict:
    """``Rf . Lf == f`` for every member."""
    C = scheme.category
    failures, beyond = [], []
    for f in universe.members:
        fac = _factor_or_none(scheme, f)
        if fac is None:
            beyond.append(C.name(f))
            continue
        l, _, r = fac
        if C.comp[r, l] != f:
            failures.append({"morphism": C.name(f), "L": C.name(l), "R": C.name(r), "composite": C.name(C.comp[r, l])})
    return _with_inconclusive(verdict("section", failures, len(universe), {"scheme": scheme.name}), beyond)


@dataclass
class SquareTable:
    """All squares of one kind between universe members, with their K images."""

    f: np.ndarray
    g: np.ndarray
    u: np.ndarray
    v: np.ndarray
    k: np.ndarray
    keys: np.ndarray
    order: np.ndarray
    base: int

    def __len__(self) -> int:
        return len(self.f)

    def lookup(self, f, g, u, v) -> np.ndarray:
        key = ((f * self.base + g) * self.base + u) * self.base + v
        pos = np.searchsorted(self.keys, key)
        pos = np.minimum(pos, len(self.keys) - 1)
        found = self.keys[pos] == key
        return np.where(found, self.order[pos], -1)


def square_table(scheme: FactorisationScheme, universe: Universe) -> SquareTable:
    C = scheme.category
    cache = C.cache.setdefault("square_tables", {})
    key = (scheme.name, scheme.kind, universe.label, universe.members)
    if key in cache:
        return cache[key]
    cols = {k: [] for k in "fguvk"}
    for f in universe.members:
        for g in universe.members:
            U, V, _, sq, _, _ = pair_matrices(C, f, g, scheme.kind)
            idx = np.argwhere(sq)
            if idx.size == 0:
                continue
            uu, vv = U[idx[:, 0]], V[idx[:, 1]]
            cols["f"].append(np.full(len(uu), f))
            cols["g"].append(np.full(len(uu), g))
            cols["u"].append(uu)
            cols["v"].append(vv)
            cols["k"].append(scheme.kmap_batch(f, g, uu, vv))
    arrs = {k: (np.concatenate(v) if v else np.zeros(0, dtype=np.int64)).astype(np.int64) for k, v in cols.items()}
    base = C.n_morphisms
    keys = ((arrs["f"] * base + arrs["g"]) * base + arrs["u"]) * base + arrs["v"]
    order = np.argsort(keys, kind="stable")
    table = SquareTable(arrs["f"], arrs["g"], arrs["u"], arrs["v"], arrs["k"], keys[order], order, base)
    cache[key] = table
    return table


# Above this many composable square pairs the composite law is checked on a
# seeded sample (recorded as "sampled" in the verdict details).
COMPOSITE_BUDGET = 60_000_000
COMPOSITE_CHUNK = 2_000_000


def check_k_laws(scheme: FactorisationScheme, universe: Universe, kind: Optional[str] = None) -> dict[str, Verdict]:
    """Action of K on squares: the two factor squares, identities, composites, eta/epsilon cells."""
    scheme.require_kind(kind)
    C = scheme.category
    beyond = [C.name(f) for f in universe.members if _factor_or_none(scheme, f) is None]
    if beyond:
        return {
            name: _with_inconclusive(Verdict(name, "vacuous", {"scheme": scheme.name}), beyond)
            for name in ("factor-squares", "identity", "composite", "eta-naturality", "epsilon-naturality")
        }
    T = square_table(scheme, universe)
    Lm = {f: scheme.L(f) for f in universe.members}
    Rm = {f: scheme.R(f) for f in universe.members}
    Lfa = np.asarray([Lm[int(x)] for x in T.f], dtype=np.int64)
    Lga = np.asarray([Lm[int(x)] for x in T.g], dtype=np.int64)
    Rfa = np.asarray([Rm[int(x)] for x in T.f], dtype=np.int64)
    Rga = np.asarray([Rm[int(x)] for x in T.g], dtype=np.int64)
    top_a, top_b = C.comp[Lga, T.u], C.comp[T.k, Lfa]  # Lg.u vs K.Lf
    bot_a, bot_b = C.comp[Rga, T.k], C.comp[T.v, Rfa]  # Rg.K vs v.Rf
    if scheme.kind == "lax":
        top_ok, bot_ok = C.leq[top_a, top_b], C.leq[bot_a, bot_b]
    elif scheme.kind == "oplax":
        top_ok, bot_ok = C.leq[top_b, top_a], C.leq[bot_b, bot_a]
    else:
        top_ok, bot_ok = top_a == top_b, bot_a == bot_b

    def describe(i: int, what: str) -> dict:
        return {
            "square": Square(int(T.f[i]), int(T.g[i]), int(T.u[i]), int(T.v[i]), scheme.kind).names(C),
            "K": C.name(T.k[i]),
            "problem": what,
        }

    details = {"scheme": scheme.name, "within": universe.label, "squares": len(T)}
    bad_top = np.flatnonzero(~top_ok)
    bad_bot = np.flatnonzero(~bot_ok)
    fs = [describe(i, "upper factor square") for i in bad_top[:25]] + [describe(i, "lower factor square") for i in bad_bot[:25]]
    out = {"factor-squares": verdict("factor-squares", fs, len(T), details)}
    out["eta-naturality"] = verdict(
        "eta-naturality", [describe(i, "eta_g.(u,v) vs R(u,v).eta_f") for i in bad_top[:25]], len(T), details
    )
    out["epsilon-naturality"] = verdict(
        "epsilon-naturality", [describe(i, "eps_g.L(u,v) vs (u,v).eps_f") for i in bad_bot[:25]], len(T), details
    )

    id_fail = []
    for f in universe.members:
        a, b = int(C.dom[f]), int(C.cod[f])
        k = scheme.kmap(Square(f, f, C.identity(a), C.identity(b), scheme.kind))
        if k != C.identity(scheme.K(f)):
            id_fail.append({"morphism": C.name(f), "K(id,id)": C.name(k)})
    out["identity"] = verdict("identity", id_fail, len(universe), details)

    comp_fail, checked = [], 0
    order_g = np.argsort(T.g, kind="stable")
    order_f = np.argsort(T.f, kind="stable")
    sg, sf = T.g[order_g], T.f[order_f]
    by_g, by_f = {}, {}
    for g in universe.members:
        lo, hi = np.searchsorted(sg, [g, g + 1])
        by_g[g] = order_g[lo:hi]
        lo, hi = np.searchsorted(sf, [g, g + 1])
        by_f[g] = order_f[lo:hi]
    total = sum(len(by_g[g]) * len(by_f[g]) for g in universe.members)
    exhaustive = total <= COMPOSITE_BUDGET
    if not exhaustive:
        busy = sum(1 for g in universe.members if len(by_g[g]) and len(by_f[g]))
        per_side = max(1, int((COMPOSITE_BUDGET / max(busy, 1)) ** 0.5))
    for g in universe.members:
        inc, outg = by_g[g], by_f[g]
        if inc.size == 0 or outg.size == 0:
            continue
        if not exhaustive:
            rng = np.random.default_rng(int(g))
            if inc.size > per_side:
                inc = np.sort(rng.choice(inc, per_side, replace=False))
            if outg.size > per_side:
                outg = np.sort(rng.choice(outg, per_side, replace=False))
        step = max(1, COMPOSITE_CHUNK // inc.size)
        for c0 in range(0, outg.size, step):
            oc = outg[c0 : c0 + step]
            uu = C.comp[T.u[oc][:, None], T.u[inc][None, :]]
            vv = C.comp[T.v[oc][:, None], T.v[inc][None, :]]
            ff = np.broadcast_to(T.f[inc][None, :], uu.shape)
            hh = np.broadcast_to(T.g[oc][:, None], uu.shape)
            pos = T.lookup(ff, hh, uu, vv)
            checked += pos.size
            missing = pos < 0
            kk = np.where(missing, -1, T.k[np.maximum(pos, 0)])
            lhs = C.comp[T.k[oc][:, None], T.k[inc][None, :]]
            bad = missing | (lhs != kk)
            for i, j in np.argwhere(bad)[:10].tolist():
                a, b = int(inc[j]), int(oc[i])
                comp_fail.append(
                    {
                        "first": Square(int(T.f[a]), int(T.g[a]), int(T.u[a]), int(T.v[a]), scheme.kind).names(C),
                        "second": Square(int(T.f[b]), int(T.g[b]), int(T.u[b]), int(T.v[b]), scheme.kind).names(C),
                        "K(composite)": None if missing[i, j] else C.name(kk[i, j]),
                        "K(second).K(first)": C.name(lhs[i, j]),
                    }
                )
            if len(comp_fail) >= 50:
                break
        if len(comp_fail) >= 50:
            break
    details = dict(details)
    details["composable_pairs"] = total
    if not exhaustive:
        details["sampled"] = True
    out["composite"] = verdict("composite", comp_fail, checked, details)
    return out


def rho_square(scheme: FactorisationScheme, f: int) -> Square:
    return scheme.eta(f)


def lambda_square(scheme: FactorisationScheme, f: int) -> Square:
    return scheme.epsilon(f)


def find_rho(scheme: FactorisationScheme, f: int) -> Optional[int]:
    """First filler of eta_f = (Lf, id): f -> Rf."""
    return find_diagonal(scheme.category, scheme.eta(f))


def find_lambda(scheme: FactorisationScheme, f: int) -> Optional[int]:
    """First filler of eps_f = (id, Rf): Lf -> f."""
    return find_diagonal(scheme.category, scheme.epsilon(f))


def all_rho(scheme, f) -> list[int]:
    return all_diagonals(scheme.category, scheme.eta(f))


def all_lambda(scheme, f) -> list[int]:
    return all_diagonals(scheme.category, scheme.epsilon(f))


def check_predistributive(scheme: FactorisationScheme, universe: Universe, kind: Optional[str] = None) -> Verdict:
    """``Lf`` orthogonal to ``R(Lf)`` and ``L(Rf)`` orthogonal to ``Rf`` for every member.

    The filler phrasing (rho_{Lf} and lambda_{Rf} exist) is evaluated too and
    any disagreement between the two phrasings is recorded.
    """
    scheme.require_kind(kind)
    C = scheme.category
    failures, beyond, disagree = [], [], []
    for f in universe.members:
        try:
            l, _, r = scheme.factor(f)
            rl, lr = scheme.R(l), scheme.L(r)
            ok1, w1 = orthogonality(C, l, rl, scheme.kind)
            ok2, w2 = orthogonality(C, lr, r, scheme.kind)
            rho_l = find_rho(scheme, l)
            lam_r = find_lambda(scheme, r)
        except BeyondAmbient:
            beyond.append(C.name(f))
            continue
        if not ok1:
            failures.append({"morphism": C.name(f), "problem": "Lf not orthogonal to RLf", "square": w1.names(C)})
        if not ok2:
            failures.append({"morphism": C.name(f), "problem": "LRf not orthogonal to Rf", "square": w2.names(C)})
        if ok1 != (rho_l is not None) or ok2 != (lam_r is not None):
            disagree.append(C.name(f))
    v = verdict("predistributive", failures, len(universe), {"scheme": scheme.name, "within": universe.label})
    v.details["filler_phrasing_disagreements"] = disagree
    return _with_inconclusive(v, beyond)


@dataclass
class DerivedClasses:
    left: ClassReport
    right: ClassReport
    rho_class: list[int]
    lambda_class: list[int]

    def to_json(self, C) -> dict:
        return {
            "L_F": self.left.to_json(C),
            "R_F": self.right.to_json(C),
            "eta_fillable_matches_L_F": sorted(self.rho_class) == sorted(self.left.members),
            "epsilon_fillable_matches_R_F": sorted(self.lambda_class) == sorted(self.right.members),
        }


def derive_classes(scheme: FactorisationScheme, universe: Universe) -> DerivedClasses:
    """``L_F = {f | f orth Rf}``, ``R_F = {f | Lf orth f}`` plus the eta/epsilon filler classes."""
    C = scheme.category
    lm, rm, ev_l, ev_r, rho, lam = [], [], {}, {}, [], []
    for f in universe.members:
        l, _, r = scheme.factor(f)
        ok, w = orthogonality(C, f, r, scheme.kind)
        if ok:
            lm.append(f)
        else:
            ev_l[f] = w
        ok, w = orthogonality(C, l, f, scheme.kind)
        if ok:
            rm.append(f)
        else:
            ev_r[f] = w
        if find_rho(scheme, f) is not None:
            rho.append(f)
        if find_lambda(scheme, f) is not None:
            lam.append(f)
    left = ClassReport("L_F", universe.label, lm, scheme.kind, "f orthogonal to Rf", ev_l)
    right = ClassReport("R_F", universe.label, rm, scheme.kind, "Lf orthogonal to f", ev_r)
    return DerivedClasses(left, right, rho, lam)


def constructed_diagonal(scheme: FactorisationScheme, s: Square, rho: int, lam: int) -> int:
    """``lambda_g . K(u, v) . rho_f``."""
    C = scheme.category
    return int(C.comp[lam, C.comp[scheme.kmap(s), rho]])


def check_underlying_lwfs(
    scheme: FactorisationScheme, universe: Universe, all_fillers: bool = False, jobs: int = 1, classes: Optional[DerivedClasses] = None
) -> dict[str, Verdict]:
    """``(L_F, R_F)`` is an (op)lax WFS and the constructed diagonals fill every square between them."""
    C = scheme.category
    dc = classes or derive_classes(scheme, universe)
    L, R = dc.left.members, dc.right.members
    hints = {f: scheme.factor(f) for f in universe.members}
    lw = check_lwfs(C, L, R, universe, scheme.kind, jobs=jobs, hints=hints)
    failures, checked = [], 0
    rho = {f: (all_rho(scheme, f) if all_fillers else [find_rho(scheme, f)]) for f in L}
    lam = {g: (all_lambda(scheme, g) if all_fillers else [find_lambda(scheme, g)]) for g in R}
    for f in L:
        for g in R:
            U, V, _, sq, _, _ = pair_matrices(C, f, g, scheme.kind)
            for i, j in np.argwhere(sq).tolist():
                s = Square(f, g, int(U[i]), int(V[j]), scheme.kind)
                for r_ in rho[f]:
                    for l_ in lam[g]:
                        checked += 1
                        if r_ is None or l_ is None:
                            failures.append({"square": s.names(C), "problem": "missing rho or lambda"})
                            continue
                        d = constructed_diagonal(scheme, s, r_, l_)
                        if not is_filler(C, s, d):
                            failures.append({"square": s.names(C), "rho": C.name(r_), "lambda": C.name(l_), "delta": C.name(d)})
    cons = verdict(
        "constructed-diagonal", failures, checked, {"scheme": scheme.name, "within": universe.label, "all_fillers": all_fillers}
    )
    return {"lwfs": lw, "constructed-diagonal": cons}


def check_theorem_uniqueness(
    scheme: FactorisationScheme, L: list[int], R: list[int], universe: Universe, classes: Optional[DerivedClasses] = None
) -> Verdict:
    """If (L, R) is a WFS whose factorisations include the scheme's, it equals (L_F, R_F)."""
    C = scheme.category
    dc = classes or derive_classes(scheme, universe)
    lw = check_lwfs(C, L, R, universe, scheme.kind)
    lm_ok = all(scheme.L(f) in set(L) for f in universe.members if scheme.L(f) in universe)
    rm_ok = all(scheme.R(f) in set(R) for f in universe.members if scheme.R(f) in universe)
    applicable = lw.passed and lm_ok and rm_ok
    failures = []
    if applicable and (sorted(L) != sorted(dc.left.members) or sorted(R) != sorted(dc.right.members)):
        failures.append({"problem": "WFS with the scheme's factorisations differs from (L_F, R_F)"})
    v = verdict("theorem-uniqueness", failures, 1 if applicable else 0, {"scheme": scheme.name, "applicable": applicable})
    return v


# -- transfer-specific checks ----------------------------------------------------------------


def check_transfer_orthogonality(scheme: TransferScheme, universe: Universe) -> Verdict:
    """Every E-bar member is oplax orthogonal to every M-bar member, via the constructed diagonal.

    For an orthogonal base the diagonal is built from the unique base lift;
    for each square the lower triangle must commute strictly.
    """
    C = scheme.category
    E = [f for f in universe.members if scheme.left_member(f)]
    M = [g for g in universe.members if scheme.right_member(g)]
    failures, checked = [], 0
    for f in E:
        for g in M:
            U, V, _, sq, _, _ = pair_matrices(C, f, g, "oplax")
            for i, j in np.argwhere(sq).tolist():
                s = Square(f, g, int(U[i]), int(V[j]), "oplax")
                checked += 1
                try:
                    d = scheme.stable_diagonal(s)
                except AssertionError as exc:
                    failures.append({"square": s.names(C), "problem": str(exc)})
                    continue
                if not is_filler(C, s, d):
                    failures.append({"square": s.names(C), "delta": C.name(d), "problem": "not an oplax diagonal"})
                elif C.comp[g, d] != s.v:
                    failures.append({"square": s.names(C), "delta": C.name(d), "problem": "lower triangle not strict"})
    return verdict("transfer-orthogonality", failures, checked, {"scheme": scheme.name, "E": len(E), "M": len(M)})


def non_uniqueness_witness(f: PartialMap) -> dict:
    """Two distinct (injective, surjective)-factorisations of a non-zero partial map.

    Through ``D_f x B`` via ``<id, phi_f>`` then the projection, and through
    ``D_f + B`` via the coproduct injection then ``[phi_f, id]``.
    """
    if pm.is_zero(f):
        raise PreconditionError(f"{f} is the zero map; the product route needs a non-empty partial domain")
    D, n = f.defined, f.cod
    rank = {x: j for j, x in enumerate(D)}
    prod_mid = len(D) * n
    l1 = PartialMap(f.dom, prod_mid, tuple(None if t is None else rank[i] * n + t for i, t in enumerate(f.values)))
    r1 = PartialMap(prod_mid, n, tuple(k % n for k in range(prod_mid)))
    co_mid = len(D) + n
    l2 = PartialMap(f.dom, co_mid, tuple(None if t is None else rank[i] for i, t in enumerate(f.values)))
    r2 = PartialMap(co_mid, n, tuple(f.values[x] for x in D) + tuple(range(n)))
    routes = {"product": (l1, r1), "coproduct": (l2, r2)}
    checks = {}
    for key, (l, r) in routes.items():
        checks[key] = {
            "left": str(l),
            "right": str(r),
            "mid": l.cod,
            "composite_ok": pm.compose_partial(r, l) == f,
            "left_injective": pm.is_injective(l),
            "right_surjective": pm.is_surjective(r),
        }
    checks["distinct"] = routes["product"] != routes["coproduct"]
    checks["ok"] = checks["distinct"] and all(
        c["composite_ok"] and c["left_injective"] and c["right_surjective"] for k, c in checks.items() if k in routes
    )
    return checks


def check_square_kinds(scheme: FactorisationScheme, universe: Universe) -> Verdict:
    """eta_f and eps_f are squares of the scheme's kind."""
    C = scheme.category
    failures = []
    for f in universe.members:
        for s, what in ((scheme.eta(f), "eta"), (scheme.epsilon(f), "epsilon")):
            if not is_square(C, s):
                failures.append({"morphism": C.name(f), "problem": f"{what} is not a {scheme.kind} square"})
    return verdict("unit-counit-squares", failures, len(universe), {"scheme": scheme.name})


def full_scheme_report(scheme: FactorisationScheme, universe: Universe, all_fillers: bool = False, jobs: int = 1) -> dict:
    """The scheme-check report: section, K laws, predistributivity, classes, LWFS."""
    C = scheme.category
    ensure_relation(C, universe.members, universe.members, scheme.kind, jobs)
    out: dict = {"scheme": scheme.name, "kind": scheme.kind, "within": universe.label}
    sec = check_section(scheme, universe)
    out["section"] = sec.to_json()
    kl = check_k_laws(scheme, universe)
    out["klaws"] = {k: v.to_json() for k, v in kl.items()}
    pre = check_predistributive(scheme, universe)
    out["predistributive"] = pre.to_json()
    verdicts = [sec, pre, *kl.values()]
    try:
        dc = derive_classes(scheme, universe)
    except BeyondAmbient as exc:
        out["classes"] = {"status": "inconclusive", "reason": str(exc)}
        out["lwfs"] = {"status": "inconclusive"}
        verdicts.append(Verdict("classes", "inconclusive"))
    else:
        out["classes"] = {"L_F": [C.name(f) for f in dc.left.members], "R_F": [C.name(f) for f in dc.right.members]}
        out["classes_detail"] = dc.to_json(C)
        ul = check_underlying_lwfs(scheme, universe, all_fillers=all_fillers, jobs=jobs, classes=dc)
        out["lwfs"] = {"verdict": ul["lwfs"].status, "witnesses": ul["lwfs"].details.get("witnesses", {})}
        out["lwfs_detail"] = {k: v.to_json() for k, v in ul.items()}
        verdicts.extend(ul.values())
    if isinstance(scheme, TransferScheme):
        tv = check_transfer_orthogonality(scheme, universe)
        out["transfer_orthogonality"] = tv.to_json()
        verdicts.append(tv)
    out["passed"] = all(v.passed for v in verdicts)
    return out
