import json

import pytest
from hypothesis import given, settings, strategies as st

import oracles as O
from laxfact.corpus import EXAMPLES, monotone_maps, unit_below_idempotent, zero_below_idempotent
from laxfact.errors import ContractViolation, NotPointed
from laxfact.ordcat import parse_category
from laxfact.ortho import full_universe, left_complement, par_universe, right_complement
from laxfact.pointed import (
    CONJECTURES,
    check_absorbency,
    compute_pointed_classes,
    conjecture_harness,
    is_split_epi,
    minimal_maps,
    pointed_verdict,
    revalidate,
    revalidate_verdict,
    split_epi_class,
    zero_class,
)

MAPS2 = O.all_maps(2)
ZEROS2 = [O.zero(m, n) for m in range(3) for n in range(3)]


def _ids(par_index, maps):
    return sorted(par_index[f] for f in maps)


def test_zero_class(U2, par_index):
    z = zero_class(U2)
    assert len(z.members) == 9
    assert z.members == _ids(par_index, ZEROS2)
    assert check_absorbency(U2).status == "pass"


@pytest.fixture(scope="module")
def reports2(U2):
    return compute_pointed_classes(U2)


def test_pointed_class_sizes(reports2):
    assert {k: len(r.predicate) for k, r in reports2.items()} == {"U": 8, "DD": 11, "DI": 9, "V": 9, "LI": 9}
    assert pointed_verdict(reports2).status == "pass"


@pytest.mark.parametrize(
    "name, side, kind",
    [("U", "left", "lax"), ("DD", "right", "lax"), ("DI", "left", "oplax"), ("V", "right", "oplax")],
)
def test_complements_against_brute_force(reports2, par_index, name, side, kind):
    if side == "left":
        want = [f for f in MAPS2 if all(O.orthogonal(f, z, kind) for z in ZEROS2)]
    else:
        want = [g for g in MAPS2 if all(O.orthogonal(z, g, kind) for z in ZEROS2)]
    assert sorted(reports2[name].complement) == _ids(par_index, want)


def test_split_epis_against_brute_force(U2, par_index):
    assert split_epi_class(U2).members == _ids(par_index, [f for f in MAPS2 if O.split_epi(f)])


@pytest.mark.parametrize("name, values, cod, expected", [
    ("retraction", [0, 0], 1, True),
    ("partial surjection", [None, 0], 1, True),
    ("missing a point", [0, 0], 2, False),
    ("identity", [0, 1], 2, True),
])
def test_split_epi_examples(U2, name, values, cod, expected):
    from laxfact.parmap import PartialMap

    C = U2.category
    assert is_split_epi(U2, C.id_of(PartialMap.of(cod, values))) is expected, name


@pytest.mark.parametrize("N", [1, 3])
def test_other_sizes_agree(N):
    reps = compute_pointed_classes(par_universe(N))
    assert pointed_verdict(reps).status == "pass"
    if N == 3:
        assert {k: len(r.predicate) for k, r in reps.items()} == {"U": 24, "DD": 60, "DI": 35, "V": 35, "LI": 35}


def test_file_categories():
    for name, build in EXAMPLES.items():
        U = full_universe(build())
        reps = compute_pointed_classes(U)
        assert set(reps) == {"U", "DD", "DI", "V", "LI"}
        assert all(r.identification is None for r in reps.values())
    assert check_absorbency(full_universe(monotone_maps())).status == "fail"
    assert check_absorbency(full_universe(zero_below_idempotent())).status == "pass"


def test_not_pointed():
    doc = {
        "objects": ["a", "b"],
        "morphisms": [
            {"name": "ia", "dom": "a", "cod": "a"},
            {"name": "ib", "dom": "b", "cod": "b"},
            {"name": "f", "dom": "a", "cod": "b"},
            {"name": "g", "dom": "a", "cod": "b"},
        ],
        "identities": {"a": "ia", "b": "ib"},
        "compose": [],
    }
    C = parse_category(json.dumps(doc), label="antichain")
    with pytest.raises(NotPointed):
        minimal_maps(C)


def test_conjecture_verdicts_on_par2(U2):
    got = {cid: conjecture_harness(U2, cid) for cid in CONJECTURES}
    assert got["u-right-complement"].status == "degenerate"
    assert got["li-left-complement"].status == "match"
    v = got["v-left-complement"]
    assert v.status == "counterexample"
    assert len(v.parts[0]["lhs"]) == 20 and len(v.parts[0]["rhs"]) == 23
    assert v.squares() and revalidate_verdict(U2.category, v)
    assert all(revalidate(U2.category, s) for s in v.squares())
    json.dumps(v.to_json())


def test_c2_witness_by_hand(par2):
    """f = g = 2 -> 1 constant, u = id_2, v = id_1: an oplax square with no oplax filler."""
    from laxfact.ortho import Square

    f = par2.index("p2_1_3")
    s = Square(f, f, par2.identity(2), par2.identity(1), "oplax")
    assert revalidate(par2, s)
    assert O.orthogonal((2, 1, (0, 0)), (2, 1, (0, 0)), "oplax") is False


def test_li_conjecture_on_file_category():
    v = conjecture_harness(full_universe(unit_below_idempotent()), "li-left-complement")
    assert v.status in ("match", "degenerate", "counterexample")
    assert v.parts[0]["rhs_description"] == "left lax complement of DD"


def test_unknown_conjecture(U2):
    with pytest.raises(ContractViolation):
        conjecture_harness(U2, "p-equals-np")


# -- properties --------------------------------------------------------------------------------


@settings(max_examples=25)
@given(st.sets(st.integers(0, 22), max_size=8))
def test_left_complements_of_supersets_of_zero_lie_in_u(U2, extra):
    C = U2.category
    zeros = zero_class(U2).members
    H = sorted(set(zeros) | extra)
    u = set(left_complement(C, zeros, U2, "lax").members)
    assert set(left_complement(C, H, U2, "lax").members) <= u


def test_totals_lie_in_dense_domain(reports2, U2):
    C = U2.category
    assert {f for f in U2.members if C.is_total(f)} <= set(reports2["DD"].predicate)
