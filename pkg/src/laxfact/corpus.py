"""Small hand-built Ord-enriched categories and the bundled corpus files.

The three non-discrete examples are our own constructions, chosen so that
every hom-set has a least element (the pointed classes are defined) while
the order is not discrete.
"""

from __future__ import annotations

import itertools
import json
from importlib import resources
from pathlib import Path

import numpy as np

from .ordcat import FinOrdCategory, dump_category, load_category, parse_category
from .parmap import build_par_category


def monoid_category(label: str, elements: list[str], table: dict[tuple[str, str], str], order: list[tuple[str, str]]) -> FinOrdCategory:
    """One-object category from a multiplication table ``table[(g, f)] = g.f``; elements[0] is the unit."""
    data = {
        "objects": ["*"],
        "morphisms": [{"name": e, "dom": "*", "cod": "*"} for e in elements],
        "identities": {"*": elements[0]},
        "compose": [[g, f, table[(g, f)]] for g in elements for f in elements if (g, f) in table],
        "leq": [list(p) for p in order],
    }
    return parse_category(json.dumps(data), label=label)


def _absorbing_table(elements: list[str], idem: str) -> dict[tuple[str, str], str]:
    unit, zero = elements[0], elements[-1]
    table = {}
    for g in elements:
        for f in elements:
            if g == unit:
                table[(g, f)] = f
            elif f == unit:
                table[(g, f)] = g
            elif zero in (g, f):
                table[(g, f)] = zero
            else:
                table[(g, f)] = idem
    return table


def zero_below_idempotent() -> FinOrdCategory:
    """Monoid {1, a, 0} with a.a = a, 0 absorbing, ordered 0 <= a <= 1."""
    el = ["1", "a", "0"]
    return monoid_category("zero-below-idempotent", el, _absorbing_table(el, "a"), [("0", "a"), ("a", "1")])


def unit_below_idempotent() -> FinOrdCategory:
    """Monoid {1, e, 0} with e.e = e, 0 absorbing, ordered 0 <= 1 <= e."""
    el = ["1", "e", "0"]
    return monoid_category("unit-below-idempotent", el, _absorbing_table(el, "e"), [("0", "1"), ("1", "e")])


def monotone_maps() -> FinOrdCategory:
    """Monotone maps between the chains 1 and 2 = {0 < 1}, ordered pointwise."""
    sizes = {"1": 1, "2": 2}
    maps = []
    for a, b in itertools.product(sizes, repeat=2):
        for vals in itertools.product(range(sizes[b]), repeat=sizes[a]):
            if all(vals[i] <= vals[i + 1] for i in range(len(vals) - 1)):
                maps.append((a, b, vals))
    name = {m: f"m{m[0]}{m[1]}_{''.join(map(str, m[2]))}" for m in maps}
    compose, leq = [], []
    for f in maps:
        for g in maps:
            if f[1] == g[0]:
                gf = (f[0], g[1], tuple(g[2][x] for x in f[2]))
                compose.append([name[g], name[f], name[gf]])
            if f[:2] == g[:2] and f != g and all(x <= y for x, y in zip(f[2], g[2])):
                leq.append([name[f], name[g]])
    data = {
        "objects": list(sizes),
        "morphisms": [{"name": name[m], "dom": m[0], "cod": m[1]} for m in maps],
        "identities": {o: name[(o, o, tuple(range(n)))] for o, n in sizes.items()},
        "compose": compose,
        "leq": leq,
    }
    return parse_category(json.dumps(data), label="monotone-maps")


def broken_category_text() -> str:
    """The zero-below-idempotent monoid with 0 <= a dropped: composition is no longer monotone."""
    doc = json.loads(dump_category(zero_below_idempotent()))
    doc["leq"] = [["0", "1"]]
    return json.dumps(doc, indent=1) + "\n"


EXAMPLES = {
    "zero-below-idempotent": zero_below_idempotent,
    "unit-below-idempotent": unit_below_idempotent,
    "monotone-maps": monotone_maps,
}


def corpus_files() -> dict[str, str]:
    """File name -> contents for the whole bundled corpus."""
    out = {f"par{n}.json": dump_category(build_par_category(n)) for n in (1, 2, 3)}
    for name, build in EXAMPLES.items():
        out[f"{name}.json"] = dump_category(build())
    out["broken.json"] = broken_category_text()
    return out


def data_dir() -> Path:
    return Path(str(resources.files("laxfact") / "data"))


def bundled(name: str) -> FinOrdCategory:
    return load_category(data_dir() / f"{name}.json")


def example_names() -> list[str]:
    return list(EXAMPLES)


def write_corpus(target: Path | None = None) -> list[Path]:
    target = Path(target) if target is not None else data_dir()
    target.mkdir(parents=True, exist_ok=True)
    written = []
    for fname, text in sorted(corpus_files().items()):
        p = target / fname
        p.write_text(text, encoding="utf-8")
        written.append(p)
    return written


def matrix_summary(C: FinOrdCategory) -> dict:
    return {"objects": C.n_objects, "morphisms": C.n_morphisms, "order_pairs": int(np.count_nonzero(C.leq)) - C.n_morphisms}
