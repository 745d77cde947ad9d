"""Brute-force references written directly on value tuples, independent of the numpy tables."""

from __future__ import annotations

import itertools
from typing import Optional

Map = tuple[int, int, tuple[Optional[int], ...]]


def maps(m: int, n: int) -> list[Map]:
    return [(m, n, v) for v in itertools.product([None, *range(n)], repeat=m)]


def all_maps(N: int) -> list[Map]:
    return [f for m in range(N + 1) for n in range(N + 1) for f in maps(m, n)]


def comp(g: Map, f: Map) -> Map:
    assert f[1] == g[0]
    return (f[0], g[1], tuple(None if x is None else g[2][x] for x in f[2]))


def ident(n: int) -> Map:
    return (n, n, tuple(range(n)))


def leq(f: Map, g: Map) -> bool:
    """Restriction order: g extends f."""
    return all(a is None or a == b for a, b in zip(f[2], g[2]))


def below(kind: str, x: Map, y: Map) -> bool:
    if kind == "lax":
        return leq(x, y)
    if kind == "oplax":
        return leq(y, x)
    return x == y


def orthogonal(f: Map, g: Map, kind: str = "lax") -> bool:
    """Every (op)lax square from f to g has a filler.  Oplax flips every inequality."""
    A, B = f[0], f[1]
    Cc, D = g[0], g[1]
    for u in maps(A, Cc):
        for v in maps(B, D):
            if not below(kind, comp(g, u), comp(v, f)):
                continue
            if not any(below(kind, u, comp(d, f)) and below(kind, comp(g, d), v) for d in maps(B, Cc)):
                return False
    return True


def total(f: Map) -> bool:
    return None not in f[2]


def injective_on_domain(f: Map) -> bool:
    vals = [x for x in f[2] if x is not None]
    return len(vals) == len(set(vals))


def surjective(f: Map) -> bool:
    return set(x for x in f[2] if x is not None) == set(range(f[1]))


def left_adjoints(N: int) -> list[Map]:
    """f with some g: id <= g.f and f.g <= id."""
    out = []
    for f in all_maps(N):
        for g in maps(f[1], f[0]):
            if leq(ident(f[0]), comp(g, f)) and leq(comp(f, g), ident(f[1])):
                out.append(f)
                break
    return out


def zero(m: int, n: int) -> Map:
    return (m, n, (None,) * m)


def split_epi(f: Map) -> bool:
    return any(comp(f, s) == ident(f[1]) for s in maps(f[1], f[0]))
