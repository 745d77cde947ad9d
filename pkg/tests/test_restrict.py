import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from laxfact import parmap as pm
from laxfact.errors import ContractViolation, PreconditionError
from laxfact.factsys import ambient_size_for, make_scheme
from laxfact.ortho import par_universe
from laxfact.parmap import PartialMap
from laxfact.restrict import check_restricted_wfs, name_total_class, restrict_report, total_subcategory, totalise_factorisation

P3 = pm.build_par_category(3)


def test_total_subcategory_is_discrete():
    T, index = total_subcategory(P3)
    assert T.n_morphisms == sum(n**m for m in range(4) for n in range(4))
    assert not (T.leq & ~np.eye(T.n_morphisms, dtype=bool)).any()
    assert total_subcategory(P3)[0] is T
    f = P3.id_of(PartialMap.of(2, [1, 0, 1]))
    assert T.name(index[f]) == P3.name(f)


def test_total_subcategory_needs_par():
    from laxfact.corpus import monotone_maps

    with pytest.raises(ContractViolation):
        total_subcategory(monotone_maps())


def test_totalise_example():
    l = P3.id_of(PartialMap.of(3, [0, 2]))
    r = P3.id_of(PartialMap.of(1, [0, None, 0]))
    f = P3.id_of(PartialMap.of(1, [0, 0]))
    lt, k, rt = totalise_factorisation(P3, f, l, r)
    assert k == 2
    assert P3.map(lt) == PartialMap.of(2, [0, 1])
    assert P3.map(rt) == PartialMap.of(1, [0, 0])


def test_totalise_preconditions():
    l = P3.id_of(PartialMap.of(1, [0, None]))
    r = P3.id_of(pm.identity(1))
    with pytest.raises(PreconditionError):
        totalise_factorisation(P3, l, l, r)
    with pytest.raises(ContractViolation):
        totalise_factorisation(P3, P3.id_of(PartialMap.of(1, [0, 0])), l, r)


def _maps(m, n):
    return st.tuples(*[st.one_of(st.none(), st.integers(0, n - 1)) if n else st.none() for _ in range(m)]).map(
        lambda v: PartialMap(m, n, tuple(v))
    )


@given(data=st.data())
def test_totalise_is_idempotent(data):
    a, w, b = (data.draw(st.integers(0, 3)) for _ in range(3))
    lp, rp = data.draw(_maps(a, w)), data.draw(_maps(w, b))
    fp = pm.compose_partial(rp, lp)
    assume(pm.is_total(fp))
    f, l, r = P3.id_of(fp), P3.id_of(lp), P3.id_of(rp)
    lt, k, rt = totalise_factorisation(P3, f, l, r)
    assert P3.is_total(lt) and P3.is_total(rt) and P3.comp[rt, lt] == f
    assert k == len(rp.defined)
    assert totalise_factorisation(P3, f, lt, rt) == (lt, k, rt)


def test_name_total_class():
    totals = [f for f in range(P3.n_morphisms) if P3.is_total(f)]
    assert name_total_class(P3, totals, totals) == "all"
    assert name_total_class(P3, [f for f in totals if P3.is_injective(f)], totals) == "injective"
    assert name_total_class(P3, [], totals) == "none"
    assert name_total_class(P3, totals[:3], totals) == "other"


@pytest.mark.parametrize(
    "name, left, right",
    [("transfer-epi-mono", "surjective", "injective"), ("transfer-mono-epi", "injective", "surjective")],
)
def test_oplax_restrictions(name, left, right):
    U = par_universe(2, ambient_size_for(name, 2))
    rep = restrict_report(make_scheme(name, U.category), U)
    assert (rep["restricted"]["left"]["matches"], rep["restricted"]["right"]["matches"]) == (left, right)
    assert rep["passed"], rep["checks"]
    assert rep["checks"]["total-fillers"]["status"] == "pass"


def test_lax_case_fillers_not_applicable():
    U = par_universe(2)
    rep = restrict_report(make_scheme("domain-total", U.category), U)
    assert rep["checks"]["total-fillers"]["status"] == "not applicable (lax case)"
    assert rep["restricted"]["right"]["matches"] == "all"


def test_restricted_wfs_rejects_wrong_classes():
    U = par_universe(2)
    C = U.category
    inj = [f for f in U.members if C.is_injective(f)]
    out = check_restricted_wfs(U, inj, inj, "oplax")
    assert out["wfs"].status == "fail"
