import pytest

import oracles as O
from laxfact.errors import ContractViolation
from laxfact.ortho import (
    KINDS,
    Square,
    Universe,
    all_diagonals,
    build_prefactorisation,
    check_lwfs,
    equivalence_classes,
    full_universe,
    is_filler,
    is_square,
    left_complement,
    orthogonality,
    par_universe,
    right_complement,
    squares,
)
from laxfact.parmap import PartialMap


@pytest.fixture(scope="module")
def oracle_relation(par_index):
    return {
        kind: {(par_index[f], par_index[g]): O.orthogonal(f, g, kind) for f in O.all_maps(2) for g in O.all_maps(2)}
        for kind in KINDS
    }


@pytest.mark.parametrize("kind", KINDS)
def test_orthogonality_matches_brute_force(par2, oracle_relation, kind):
    wrong = [(par2.name(f), par2.name(g)) for (f, g), ok in oracle_relation[kind].items() if orthogonality(par2, f, g, kind)[0] != ok]
    assert wrong == []


@pytest.mark.parametrize("kind", KINDS)
def test_witness_squares_are_unfillable(par2, kind):
    for f in range(par2.n_morphisms):
        for g in range(par2.n_morphisms):
            ok, w = orthogonality(par2, f, g, kind)
            if not ok:
                assert is_square(par2, w) and all_diagonals(par2, w) == []


def test_squares_and_fillers_agree(par2):
    f, g = par2.index("p2_1_3"), par2.index("p1_2_1")
    for s in squares(par2, f, g, "lax"):
        assert is_square(par2, s)
        for d in all_diagonals(par2, s):
            assert is_filler(par2, s, d)


def test_shape_mismatch_is_a_contract_violation(par2):
    f = par2.index("p1_1_1")
    with pytest.raises(ContractViolation):
        is_square(par2, Square(f, f, par2.index("p2_1_0"), f))
    with pytest.raises(ContractViolation):
        orthogonality(par2, f, f, "colax")


@pytest.mark.parametrize("N", [1, 2, 3])
def test_lax_equivalences_are_left_adjoints(N):
    U = par_universe(N)
    C = U.category
    classes = equivalence_classes(C, U, "lax")
    expected = sorted(C.id_of(PartialMap(*f)) for f in O.left_adjoints(N)) if N <= 2 else None
    for name, members in classes.items():
        assert members == classes["self"], name
        assert all(C.is_total(f) and C.is_injective(f) for f in members)
    if expected is not None:
        assert classes["self"] == expected


@pytest.mark.parametrize("kind, test", [("oplax", "surjective-partial-inverse"), ("strict", "bijective")])
def test_other_kinds_coincide(U2, kind, test):
    C = U2.category
    classes = equivalence_classes(C, U2, kind)
    assert len({tuple(v) for v in classes.values()}) == 1
    if kind == "strict":
        assert classes["self"] == [f for f in U2.members if C.is_total(f) and C.is_injective(f) and C.is_surjective(f)]
    else:
        # right adjoints in Par: partial inverses of total injections
        assert classes["self"] == [f for f in U2.members if C.is_injective(f) and C.is_surjective(f)]


def test_complements_match_oracle(U2, par_index):
    C = U2.category
    totals = [par_index[f] for f in O.all_maps(2) if O.total(f)]
    lc = left_complement(C, totals, U2, "lax")
    want = sorted(par_index[f] for f in O.all_maps(2) if all(O.orthogonal(f, t) for t in O.all_maps(2) if O.total(t)))
    assert lc.members == want
    assert len(lc.members) == 20
    assert all(C.is_injective(f) for f in lc.members)
    rc = right_complement(C, lc.members, U2, "lax")
    assert rc.members == sorted(totals)
    for f, s in lc.evidence.items():
        assert all_diagonals(C, s) == [] and s.f == f


def test_prefactorisation_builder(U2):
    C = U2.category
    totals = [f for f in U2.members if C.is_total(f)]
    L, R, v = build_prefactorisation(C, totals, "left", U2)
    assert v.passed and R.members == totals
    with pytest.raises(ContractViolation):
        build_prefactorisation(C, totals, "up", U2)


def test_lwfs_verdicts(U2):
    C = U2.category
    totals = [f for f in U2.members if C.is_total(f)]
    injective = [f for f in U2.members if C.is_injective(f)]
    assert check_lwfs(C, injective, totals, U2, "lax").status == "pass"
    bad = check_lwfs(C, injective, totals[:-1], U2, "lax")
    assert bad.status == "fail"


def test_universe_hom_masks_members():
    U = par_universe(1, 2)
    C = U.category
    assert C.n_morphisms == 23 and len(U) == 5
    assert len(U.hom(1, 1)) == 2 and len(U.hom(2, 2)) == 0
    sparse = Universe(C, (C.index("p1_1_0"), C.index("p2_2_8")), "two")
    assert sparse.hom(1, 1).tolist() == [C.index("p1_1_0")]
    assert sparse.objects == [1, 2]


def test_parallel_relation_is_identical():
    from laxfact import ortho

    U = par_universe(2)
    C = U.category
    ortho._orth_cache(C).clear()
    seq = equivalence_classes(C, U, "lax", jobs=1)
    seq_cache = dict(ortho._orth_cache(C))
    ortho._orth_cache(C).clear()
    par = equivalence_classes(C, U, "lax", jobs=2)
    assert seq == par
    assert {k: v[0] for k, v in seq_cache.items()} == {k: v[0] for k, v in ortho._orth_cache(C).items()}


def test_full_universe_of_file_category():
    from laxfact.corpus import monotone_maps

    U = full_universe(monotone_maps())
    assert len(U) == 7
    classes = equivalence_classes(U.category, U, "lax")
    assert len({tuple(v) for v in classes.values()}) == 1
