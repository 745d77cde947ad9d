"""Partial maps between the finite sets ``{0..m-1}`` and the category Par(FinSet<=N).

The undefined value is ``None`` in :class:`PartialMap` and ``-1`` in the
numpy assignment arrays.  Morphisms of :class:`ParCategory` are numbered
by ``(dom, cod, rank)`` where ``rank`` is the lexicographic position of the
assignment with undefined sorting first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import ContractViolation, ResourceError
from .ordcat import FinOrdCategory, check_cap, validate_category

HARD_CAP = 4
DEFAULT_SIZE = 3


@dataclass(frozen=True)
class PartialMap:
    dom: int
    cod: int
    values: tuple[Optional[int], ...]

    def __post_init__(self):
        if len(self.values) != self.dom:
            raise ContractViolation(f"assignment of length {len(self.values)} for domain size {self.dom}")
        for t in self.values:
            if t is not None and not (0 <= t < self.cod):
                raise ContractViolation(f"value {t} outside codomain of size {self.cod}")

    @classmethod
    def of(cls, cod: int, values: Sequence[Optional[int]]) -> "PartialMap":
        return cls(len(values), cod, tuple(values))

    def __str__(self) -> str:
        body = ",".join("⊥" if t is None else str(t) for t in self.values)
        return f"{self.dom}⇀{self.cod} [{body}]"

    def __call__(self, i: int) -> Optional[int]:
        return self.values[i]

    @property
    def defined(self) -> tuple[int, ...]:
        """The partial domain D_f as a sorted tuple."""
        return tuple(i for i, t in enumerate(self.values) if t is not None)

    @property
    def image(self) -> tuple[int, ...]:
        return tuple(sorted({t for t in self.values if t is not None}))

    def rank(self) -> int:
        r = 0
        for t in self.values:
            r = r * (self.cod + 1) + (0 if t is None else t + 1)
        return r


def identity(n: int) -> PartialMap:
    return PartialMap(n, n, tuple(range(n)))


def zero_map(m: int, n: int) -> PartialMap:
    return PartialMap(m, n, (None,) * m)


def is_zero(f: PartialMap) -> bool:
    return all(t is None for t in f.values)


def is_total(f: PartialMap) -> bool:
    return all(t is not None for t in f.values)


def is_injective(f: PartialMap) -> bool:
    """Injectivity of the partial component phi_f."""
    img = [t for t in f.values if t is not None]
    return len(img) == len(set(img))


def is_surjective(f: PartialMap) -> bool:
    """Surjectivity of the partial component phi_f."""
    return len(set(t for t in f.values if t is not None)) == f.cod


def compose_partial(g: PartialMap, f: PartialMap) -> PartialMap:
    """``g . f`` by preimage: defined at i iff f(i) is defined and lies in D_g."""
    if f.cod != g.dom:
        raise ContractViolation(f"cannot compose {g} after {f}")
    return PartialMap(f.dom, g.cod, tuple(None if t is None else g.values[t] for t in f.values))


def restriction_leq(f: PartialMap, g: PartialMap) -> bool:
    """``f`` is a domain restriction of ``g``."""
    if f.dom != g.dom or f.cod != g.cod:
        raise ContractViolation(f"restriction order on non-parallel {f} and {g}")
    return all(a is None or a == b for a, b in zip(f.values, g.values))


def enumerate_partial_maps(m: int, n: int) -> list[PartialMap]:
    if m > HARD_CAP or n > HARD_CAP or m < 0 or n < 0:
        raise ResourceError(f"hom-set {m}⇀{n} outside the supported sizes 0..{HARD_CAP}")
    choices = (None,) + tuple(range(n))
    return [PartialMap(m, n, vals) for vals in itertools.product(choices, repeat=m)]


def is_adjoint(f: PartialMap, g: PartialMap) -> bool:
    """``f -| g``: id <= g.f and f.g <= id in the restriction order."""
    if f.dom != g.cod or f.cod != g.dom:
        return False
    return restriction_leq(identity(f.dom), compose_partial(g, f)) and restriction_leq(
        compose_partial(f, g), identity(f.cod)
    )


def adjunction_partner(f: PartialMap) -> Optional[PartialMap]:
    """The right adjoint of ``f`` if it has one.

    Over a discrete base these are exactly the total maps with injective
    component, and the partner is the partial inverse.
    """
    if not is_total(f) or not is_injective(f):
        return None
    inv: list[Optional[int]] = [None] * f.cod
    for i, t in enumerate(f.values):
        inv[t] = i
    return PartialMap(f.cod, f.dom, tuple(inv))


def reflect_adjunction(f: PartialMap, g: PartialMap) -> tuple[PartialMap, PartialMap]:
    """Send an adjoint pair ``f -| g`` to the total pair ``(id, phi~_f) -| (id, phi_g)``.

    ``phi_f`` factors through the inclusion of ``D_g``; both results are
    maps between ``A`` and ``|D_g|`` (skeleton object).
    """
    if not is_adjoint(f, g):
        raise ContractViolation(f"{f} and {g} are not an adjoint pair")
    dg = g.defined
    pos = {b: j for j, b in enumerate(dg)}
    try:
        tilde = PartialMap(f.dom, len(dg), tuple(pos[t] for t in f.values))
    except KeyError:  # pragma: no cover - excluded by the adjunction check
        raise ContractViolation("phi_f does not factor through D_g") from None
    phi_g = PartialMap(len(dg), g.cod, tuple(g.values[b] for b in dg))
    return tilde, phi_g


def inclusion(subset: Sequence[int], n: int) -> PartialMap:
    """Total map ``|subset| -> n`` listing the subset in order."""
    return PartialMap(len(subset), n, tuple(subset))


def partial_inverse_of_inclusion(subset: Sequence[int], n: int) -> PartialMap:
    """``n ⇀ |subset|`` sending each member to its rank; undefined elsewhere."""
    pos = {b: j for j, b in enumerate(subset)}
    return PartialMap(n, len(subset), tuple(pos.get(i) for i in range(n)))


# -- the category -------------------------------------------------------------


def _assignments(m: int, n: int) -> np.ndarray:
    """All assignments m -> {-1..n-1} in rank order, shape ((n+1)**m, m)."""
    if m == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((n + 1,) * m).reshape(m, -1).T
    return grids.astype(np.int64) - 1


def _ranks(arr: np.ndarray, n: int) -> np.ndarray:
    m = arr.shape[-1]
    weights = (n + 1) ** np.arange(m - 1, -1, -1, dtype=np.int64)
    return ((arr + 1) * weights).sum(axis=-1)


class ParCategory(FinOrdCategory):
    """Skeleton of Par(FinSet) on the objects ``0..N`` with the restriction order."""

    def __init__(self, max_size: int):
        if max_size < 0 or max_size > HARD_CAP:
            raise ResourceError(f"Par size {max_size} outside 0..{HARD_CAP}")
        self.max_size = N = max_size
        sizes = range(N + 1)
        total = sum((n + 1) ** m for m in sizes for n in sizes)
        check_cap(total, f"Par<={N}")
        self.assign: dict[tuple[int, int], np.ndarray] = {}
        self.offset: dict[tuple[int, int], int] = {}
        names, dom, cod = [], [], []
        for m in sizes:
            for n in sizes:
                arr = _assignments(m, n)
                self.assign[(m, n)] = arr
                self.offset[(m, n)] = len(names)
                names.extend(f"p{m}_{n}_{k}" for k in range(arr.shape[0]))
                dom.extend([m] * arr.shape[0])
                cod.extend([n] * arr.shape[0])
        M = len(names)
        comp = np.full((M, M), -1, dtype=np.int64)
        order = np.zeros((M, M), dtype=bool)
        for m in sizes:
            for b in sizes:
                F = self.assign[(m, b)]
                fidx = np.where(F < 0, b, F)
                f_ids = self.offset[(m, b)] + np.arange(F.shape[0])
                for n in sizes:
                    G = self.assign[(b, n)]
                    gpad = np.concatenate([G, np.full((G.shape[0], 1), -1, dtype=np.int64)], axis=1)
                    R = gpad[:, fidx]  # (|G|, |F|, m)
                    ids = self.offset[(m, n)] + _ranks(R, n)
                    g_ids = self.offset[(b, n)] + np.arange(G.shape[0])
                    comp[np.ix_(g_ids, f_ids)] = ids
            for n in sizes:
                A = self.assign[(m, n)]
                ids = self.offset[(m, n)] + np.arange(A.shape[0])
                le = ((A[:, None, :] < 0) | (A[:, None, :] == A[None, :, :])).all(axis=2)
                order[np.ix_(ids, ids)] = le
        identities = [self.offset[(a, a)] + _ranks(np.arange(a, dtype=np.int64), a) for a in sizes]
        super().__init__([str(a) for a in sizes], names, dom, cod, [int(i) for i in identities], comp, order, label=f"Par<={N}")

    def map(self, f: int) -> PartialMap:
        m, n = int(self.dom[f]), int(self.cod[f])
        arr = self.assign[(m, n)][f - self.offset[(m, n)]]
        return PartialMap(m, n, tuple(None if t < 0 else int(t) for t in arr))

    def id_of(self, p: PartialMap) -> int:
        if p.dom > self.max_size or p.cod > self.max_size:
            from .errors import BeyondAmbient

            raise BeyondAmbient(f"{p} needs objects beyond Par<={self.max_size}")
        return self.offset[(p.dom, p.cod)] + p.rank()

    def values(self, f: int) -> np.ndarray:
        m, n = int(self.dom[f]), int(self.cod[f])
        return self.assign[(m, n)][f - self.offset[(m, n)]]

    def is_total(self, f: int) -> bool:
        return bool((self.values(f) >= 0).all())

    def is_injective(self, f: int) -> bool:
        v = self.values(f)
        v = v[v >= 0]
        return len(set(v.tolist())) == v.size

    def is_surjective(self, f: int) -> bool:
        v = self.values(f)
        return len(set(v[v >= 0].tolist())) == int(self.cod[f])

    def is_zero(self, f: int) -> bool:
        return bool((self.values(f) < 0).all())


_PAR_CACHE: dict[int, ParCategory] = {}


def clear_par_cache() -> None:
    """Drop the shared Par instances (and with them every memoised relation)."""
    _PAR_CACHE.clear()


def build_par_category(max_size: int = DEFAULT_SIZE, validate: bool | None = None) -> ParCategory:
    """Par(FinSet<=N); validated exhaustively for N <= 3 unless told otherwise.

    Instances are cached and shared; they are never mutated after construction.
    """
    if max_size in _PAR_CACHE:
        C = _PAR_CACHE[max_size]
        check_cap(C.n_morphisms, C.label)
        return C
    C = ParCategory(max_size)
    if validate is None:
        validate = max_size <= 3
    if validate:
        report = validate_category(C)
        if not report.ok:  # pragma: no cover - would be an internal bug
            raise AssertionError(f"Par<={max_size} failed validation: {report.to_json()}")
    _PAR_CACHE[max_size] = C
    return C
