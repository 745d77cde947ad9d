"""Lax monad / comonad structure of a factorisation scheme and the distributivity law.

Squares are composed componentwise; laws are compared componentwise in the
hom-order appropriate to the scheme's kind (``a <= b`` for lax, ``b <= a``
for oplax, equality for strict).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import BeyondAmbient, CategoryFileError, ContractViolation
from .factsys import (
    FactorisationScheme,
    check_predistributive,
    derive_classes,
    find_lambda,
    find_rho,
)
from .ortho import Square, Universe, Verdict, all_diagonals, find_diagonal, is_filler, is_square, pair_matrices, verdict


class MissingFiller(Exception):
    def __init__(self, what: str, f: int):
        super().__init__(f"{what} has no filler at {f}")
        self.what, self.f = what, f


def compose_squares(C, second: Square, first: Square) -> Square:
    if first.g != second.f:
        raise ContractViolation("squares are not composable")
    return Square(first.f, second.g, int(C.comp[second.u, first.u]), int(C.comp[second.v, first.v]), first.kind)


def identity_square(C, f: int, kind: str) -> Square:
    return Square(f, f, C.identity(C.dom[f]), C.identity(C.cod[f]), kind)


def related(C, kind: str, a: int, b: int) -> bool:
    """``a <= b`` read in the kind's direction."""
    if kind == "lax":
        return bool(C.leq[a, b])
    if kind == "oplax":
        return bool(C.leq[b, a])
    return a == b


@dataclass
class Structure:
    """Theta (monad multiplication) and omega (comonad comultiplication) components.

    Components are computed on demand unless overridden.  ``choice='extremal'``
    takes the first filler (in scan order) that is maximal in the hom-order
    (minimal for oplax schemes, the order-dual); ``choice='first'`` takes the
    first filler outright.  The two agree whenever fillers are unique.
    """

    scheme: FactorisationScheme
    choice: str = "extremal"
    theta_override: dict[int, int] = field(default_factory=dict)
    omega_override: dict[int, int] = field(default_factory=dict)
    _theta: dict[int, Optional[int]] = field(default_factory=dict)
    _omega: dict[int, Optional[int]] = field(default_factory=dict)

    @property
    def C(self):
        return self.scheme.category

    @property
    def kind(self) -> str:
        return self.scheme.kind

    def theta(self, f: int) -> int:
        """``Theta_f: K(Rf) -> Kf``, the filler of eps_{Rf}."""
        f = int(f)
        if f in self.theta_override:
            return self.theta_override[f]
        if f not in self._theta:
            self._theta[f] = self._pick(self.scheme.epsilon(self.scheme.R(f)))
        if self._theta[f] is None:
            raise MissingFiller("eps_{Rf}", f)
        return self._theta[f]

    def omega(self, f: int) -> int:
        """``omega_f: Kf -> K(Lf)``, the filler of eta_{Lf}."""
        f = int(f)
        if f in self.omega_override:
            return self.omega_override[f]
        if f not in self._omega:
            self._omega[f] = self._pick(self.scheme.eta(self.scheme.L(f)))
        if self._omega[f] is None:
            raise MissingFiller("eta_{Lf}", f)
        return self._omega[f]

    def _pick(self, sq: Square) -> Optional[int]:
        if self.choice == "first":
            return find_diagonal(self.C, sq)
        ds = all_diagonals(self.C, sq)
        le = self.C.leq if self.kind != "oplax" else self.C.leq.T
        for d in ds:
            if not any(e != d and le[d, e] for e in ds):
                return d
        return None

    def mu(self, f: int) -> Square:
        """``mu_f = (Theta_f, id): RRf -> Rf``."""
        s = self.scheme
        r = s.R(f)
        return Square(s.R(r), r, self.theta(f), self.C.identity(self.C.cod[f]), self.kind)

    def delta(self, f: int) -> Square:
        """``Omega_f = (id, omega_f): Lf -> LLf``."""
        s = self.scheme
        l = s.L(f)
        return Square(l, s.L(l), self.C.identity(self.C.dom[f]), self.omega(f), self.kind)

    def dist(self, f: int) -> Square:
        """``Delta_f = (omega_f, Theta_f): LRf -> RLf``."""
        s = self.scheme
        return Square(s.L(s.R(f)), s.R(s.L(f)), self.omega(f), self.theta(f), self.kind)

    def unique(self, f: int, which: str) -> bool:
        sq = self.scheme.epsilon(self.scheme.R(f)) if which == "theta" else self.scheme.eta(self.scheme.L(f))
        return len(all_diagonals(self.C, sq)) == 1


def build_structure(scheme: FactorisationScheme, overrides: Optional[dict] = None, choice: str = "extremal") -> Structure:
    if choice not in ("extremal", "first"):
        raise ContractViolation(f"filler choice must be extremal or first, not {choice!r}")
    st = Structure(scheme, choice)
    if overrides:
        C = scheme.category
        try:
            st.theta_override = {C.index(k): C.index(v) for k, v in overrides.get("theta", {}).items()}
            st.omega_override = {C.index(k): C.index(v) for k, v in overrides.get("omega", {}).items()}
        except (ContractViolation, AttributeError) as exc:
            raise CategoryFileError(f"structure file does not map morphism names to morphism names: {exc}") from None
        for what, table, square in (("theta", st.theta_override, lambda f: scheme.epsilon(scheme.R(f))), ("omega", st.omega_override, lambda f: scheme.eta(scheme.L(f)))):
            for f, d in table.items():
                sq = square(f)
                if C.dom[d] != C.cod[sq.f] or C.cod[d] != C.dom[sq.g]:
                    raise CategoryFileError(f"{what} component for {C.name(f)} must be a map {C.object_names[C.cod[sq.f]]} -> {C.object_names[C.dom[sq.g]]}, got {C.name(d)}")
    return st


def load_structure(scheme: FactorisationScheme, path: str) -> Structure:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CategoryFileError(f"{path}: {exc}") from None
    if not isinstance(data, dict):
        raise CategoryFileError(f"{path}: expected an object with 'theta'/'omega' maps")
    return build_structure(scheme, data)


def structure_report(st: Structure, universe: Universe) -> Verdict:
    """Every member has Theta_f and omega_f; records uniqueness."""
    C = st.C
    failures, unique_theta, unique_omega, beyond = [], 0, 0, []
    for f in universe.members:
        try:
            st.theta(f)
            unique_theta += st.unique(f, "theta")
        except MissingFiller:
            failures.append({"morphism": C.name(f), "problem": "no Theta (eps_{Rf} unfillable)"})
        except BeyondAmbient:
            beyond.append(C.name(f))
        try:
            st.omega(f)
            unique_omega += st.unique(f, "omega")
        except MissingFiller:
            failures.append({"morphism": C.name(f), "problem": "no omega (eta_{Lf} unfillable)"})
        except BeyondAmbient:
            beyond.append(C.name(f))
    v = verdict("structure", failures, len(universe), {"scheme": st.scheme.name, "theta_unique": unique_theta, "omega_unique": unique_omega})
    if beyond:
        v.details["beyond_ambient"] = sorted(set(beyond))
        if v.passed:
            v.status = "inconclusive"
    return v


def _law_entry(C, law: str, f: int, lhs: Square, rhs: Square) -> dict:
    return {
        "law": law,
        "morphism": C.name(f),
        "lhs": [C.name(lhs.u), C.name(lhs.v)],
        "rhs": [C.name(rhs.u), C.name(rhs.v)],
    }


def _run_laws(st: Structure, universe: Universe, name: str, laws, exact: bool = False) -> Verdict:
    """``laws(f)`` yields ``(law, lhs, rhs, relation)`` with relation 'le' or 'eq'.

    ``exact`` compares every law as an equality.
    """
    C, kind = st.C, st.kind
    failures, per_law, beyond, checked = [], {}, [], 0
    for f in universe.members:
        try:
            items = list(laws(f))
        except MissingFiller as exc:
            failures.append({"law": "structure", "morphism": C.name(f), "problem": str(exc)})
            continue
        except BeyondAmbient:
            beyond.append(C.name(f))
            continue
        for law, lhs, rhs, rel in items:
            checked += 1
            if rel == "eq" or exact:
                ok = lhs.u == rhs.u and lhs.v == rhs.v
            else:
                ok = related(C, kind, lhs.u, rhs.u) and related(C, kind, lhs.v, rhs.v)
            per_law.setdefault(law, [0, 0])[0 if ok else 1] += 1
            if not ok:
                failures.append(_law_entry(C, law, f, lhs, rhs))
    details = {"scheme": st.scheme.name, "kind": kind, "within": universe.label, "exact": exact}
    details["laws"] = {k: {"pass": v[0], "fail": v[1]} for k, v in sorted(per_law.items())}
    v = verdict(name, failures, checked, details)
    if beyond:
        v.details["beyond_ambient"] = beyond
        if v.passed:
            v.status = "inconclusive"
    return v


def _kmap_checked(st: Structure, s: Square) -> int:
    if not is_square(st.C, s):
        raise MissingFiller(f"a non-{st.kind} square from", s.f)
    return st.scheme.kmap(s)


def check_lax_monad_laws(st: Structure, universe: Universe, exact: bool = False) -> Verdict:
    """Unit and associativity laws for (R, eta, mu), lax in the scheme's direction.

    unit-left: id <= mu_f . R(eta_f); unit-right: id <= mu_f . eta_{Rf};
    associativity: mu_f . R(mu_f) <= mu_f . mu_{Rf}.
    """
    C, s = st.C, st.scheme

    def laws(f):
        r = s.R(f)
        ident = identity_square(C, r, st.kind)
        eta_f = s.eta(f)
        R_eta = Square(r, s.R(r), _kmap_checked(st, eta_f), eta_f.v, st.kind)
        yield "unit-left", ident, compose_squares(C, st.mu(f), R_eta), "le"
        yield "unit-right", ident, compose_squares(C, st.mu(f), s.eta(r)), "le"
        mu_f = st.mu(f)
        R_mu = Square(s.R(s.R(r)), s.R(r), _kmap_checked(st, mu_f), mu_f.v, st.kind)
        yield "associativity", compose_squares(C, mu_f, R_mu), compose_squares(C, mu_f, st.mu(r)), "le"

    return _run_laws(st, universe, "monad-laws", laws, exact)


def check_lax_comonad_laws(st: Structure, universe: Universe, exact: bool = False) -> Verdict:
    """Counit and coassociativity laws for (L, eps, Omega), dual to the monad laws.

    counit-left: eps_{Lf} . Omega_f <= id; counit-right: L(eps_f) . Omega_f <= id;
    coassociativity: Omega_{Lf} . Omega_f <= L(Omega_f) . Omega_f.
    """
    C, s = st.C, st.scheme

    def laws(f):
        l = s.L(f)
        ident = identity_square(C, l, st.kind)
        om = st.delta(f)
        yield "counit-left", compose_squares(C, s.epsilon(l), om), ident, "le"
        eps_f = s.epsilon(f)
        L_eps = Square(s.L(l), l, eps_f.u, _kmap_checked(st, eps_f), st.kind)
        yield "counit-right", compose_squares(C, L_eps, om), ident, "le"
        L_om = Square(s.L(l), s.L(s.L(l)), om.u, _kmap_checked(st, om), st.kind)
        yield "coassociativity", compose_squares(C, st.delta(l), om), compose_squares(C, L_om, om), "le"

    return _run_laws(st, universe, "comonad-laws", laws, exact)


def check_distributivity_law(st: Structure, universe: Universe) -> Verdict:
    """Both hexagons of Delta: LR => RL, compared for equality at every member.

    mu-hexagon:    mu_{Lf} . R(Delta_f) . Delta_{Rf}  =  Delta_f . L(mu_f)
    Omega-hexagon: Delta_{Lf} . L(Delta_f) . Omega_{Rf}  =  R(Omega_f) . Delta_f
    """
    C, s = st.C, st.scheme

    def R_sq(sq: Square) -> Square:
        return Square(s.R(sq.f), s.R(sq.g), _kmap_checked(st, sq), sq.v, st.kind)

    def L_sq(sq: Square) -> Square:
        return Square(s.L(sq.f), s.L(sq.g), sq.u, _kmap_checked(st, sq), st.kind)

    def laws(f):
        r, l = s.R(f), s.L(f)
        d = st.dist(f)
        if not is_square(C, d):
            raise MissingFiller(f"Delta (not a {st.kind} square)", f)
        lhs = compose_squares(C, st.mu(l), compose_squares(C, R_sq(d), st.dist(r)))
        rhs = compose_squares(C, d, L_sq(st.mu(f)))
        yield "mu-hexagon", lhs, rhs, "eq"
        lhs = compose_squares(C, st.dist(l), compose_squares(C, L_sq(d), st.delta(r)))
        rhs = compose_squares(C, R_sq(st.delta(f)), d)
        yield "omega-hexagon", lhs, rhs, "eq"

    v = _run_laws(st, universe, "distributivity", laws)
    if v.status == "fail" and st.scheme.name == "domain-total":
        v.status = "expected-unknown"
    return v


def check_lawfs_implies_lfwfs(st: Structure, universe: Universe) -> dict[str, Verdict]:
    """Predistributivity with theta/omega as the designated fillers.

    On squares (u, v): Lf -> RLf the diagonal is theta_{Lf} . K(u,v) . omega_f;
    on squares LRf -> Rf it is theta_f . K(u,v) . omega_{Rf}.
    """
    C, s = st.C, st.scheme
    pre = check_predistributive(s, universe)
    failures, checked, beyond = [], 0, []
    for f in universe.members:
        try:
            l, r = s.L(f), s.R(f)
            pairs = [
                ("Lf->RLf", l, s.R(l), lambda K: C.comp[st.theta(l), C.comp[K, st.omega(f)]]),
                ("LRf->Rf", s.L(r), r, lambda K: C.comp[st.theta(f), C.comp[K, st.omega(r)]]),
            ]
            for label, a, b, diag in pairs:
                U, V, _, sq, _, _ = pair_matrices(C, a, b, st.kind)
                for i, j in np.argwhere(sq).tolist():
                    square = Square(a, b, int(U[i]), int(V[j]), st.kind)
                    d = int(diag(s.kmap(square)))
                    checked += 1
                    if not is_filler(C, square, d):
                        failures.append({"morphism": C.name(f), "pair": label, "square": square.names(C), "delta": C.name(d)})
        except MissingFiller as exc:
            failures.append({"morphism": C.name(f), "problem": str(exc)})
        except BeyondAmbient:
            beyond.append(C.name(f))
    v = verdict("structure-diagonals", failures, checked, {"scheme": s.name, "within": universe.label})
    if beyond:
        v.details["beyond_ambient"] = beyond
        if v.passed:
            v.status = "inconclusive"
    return {"predistributive": pre, "structure-diagonals": v}


def check_unit_restriction(st: Structure, universe: Universe) -> Verdict:
    """``id_{Kf} <= Theta_f . L(Rf)`` wherever Theta_f exists."""
    C, s = st.C, st.scheme
    failures, checked = [], 0
    for f in universe.members:
        try:
            th = st.theta(f)
        except (MissingFiller, BeyondAmbient):
            continue
        checked += 1
        k = C.identity(s.K(f))
        if not related(C, st.kind, k, int(C.comp[th, s.L(s.R(f))])):
            failures.append({"morphism": C.name(f), "theta": C.name(th)})
    return verdict("unit-restriction", failures, checked, {"scheme": s.name})


def check_lax_algebra(scheme: FactorisationScheme, universe: Universe) -> Verdict:
    """eps_f fillers coincide with the lambda making (lambda, id): Rf -> f a square with id <= lambda . Lf."""
    C, kind = scheme.category, scheme.kind
    failures = []
    for f in universe.members:
        l, r = scheme.L(f), scheme.R(f)
        fillers = set(all_diagonals(C, scheme.epsilon(f)))
        ida = C.identity(C.dom[f])
        algebra = set()
        for lam in C.hom(scheme.K(f), C.dom[f]).tolist():
            sq = Square(r, f, lam, C.identity(C.cod[f]), kind)
            if is_square(C, sq) and related(C, kind, ida, int(C.comp[lam, l])):
                algebra.add(lam)
        if fillers != algebra:
            failures.append({"morphism": C.name(f), "fillers": sorted(C.name(x) for x in fillers), "algebras": sorted(C.name(x) for x in algebra)})
    return verdict("lax-algebra", failures, len(universe), {"scheme": scheme.name})


def check_partner_observation(scheme: FactorisationScheme, universe: Universe) -> Verdict:
    """For f in L_F and R_F, ``lambda_f . rho_f`` is an adjoint partner of f.

    lax: f -| lambda.rho; oplax: lambda.rho -| f.
    """
    C, kind = scheme.category, scheme.kind
    dc = derive_classes(scheme, universe)
    both = sorted(set(dc.left.members) & set(dc.right.members))
    failures = []
    for f in both:
        p = int(C.comp[find_lambda(scheme, f), find_rho(scheme, f)])
        ia, ib = C.identity(C.dom[f]), C.identity(C.cod[f])
        pf, fp = int(C.comp[p, f]), int(C.comp[f, p])
        ok = related(C, kind, ia, pf) and related(C, kind, fp, ib)
        if not ok:
            failures.append({"morphism": C.name(f), "partner": C.name(p)})
    return verdict("partner-observation", failures, len(both), {"scheme": scheme.name})


def corrupt_structure(st: Structure, universe: Universe, which: str = "theta") -> tuple[Structure, dict]:
    """Replace one component by another parallel morphism so that some law breaks.

    Scans members and replacements in canonical order and returns the first
    corruption the law checkers detect, with a description.
    """
    C = st.C
    for f in universe.members:
        try:
            orig = st.theta(f) if which == "theta" else st.omega(f)
        except (MissingFiller, BeyondAmbient):
            continue
        for alt in C.hom(C.dom[orig], C.cod[orig]).tolist():
            if alt == orig:
                continue
            bad = Structure(st.scheme, st.choice, dict(st.theta_override), dict(st.omega_override))
            (bad.theta_override if which == "theta" else bad.omega_override)[f] = alt
            check = check_lax_monad_laws if which == "theta" else check_lax_comonad_laws
            v = check(bad, universe)
            laws = sorted({x["law"] for x in v.failures if x.get("law") not in (None, "structure")})
            if laws:
                desc = {"component": which, "morphism": C.name(f), "original": C.name(orig), "replacement": C.name(alt)}
                desc["failed_laws"] = laws
                desc["verdict"] = v
                return bad, desc
    raise ContractViolation("no detectable corruption exists within the universe")


def monad_report(scheme: FactorisationScheme, universe: Universe, st: Optional[Structure] = None) -> dict:
    st = st or build_structure(scheme)
    out: dict = {"scheme": scheme.name, "kind": scheme.kind, "within": universe.label, "filler_choice": st.choice}
    verdicts = [structure_report(st, universe)]
    verdicts.append(check_lax_monad_laws(st, universe))
    verdicts.append(check_lax_comonad_laws(st, universe))
    verdicts.append(check_distributivity_law(st, universe))
    verdicts.extend(check_lawfs_implies_lfwfs(st, universe).values())
    verdicts.append(check_unit_restriction(st, universe))
    out["checks"] = {v.name: v.to_json() for v in verdicts}
    out["passed"] = all(v.passed or v.status == "expected-unknown" for v in verdicts)
    return out
