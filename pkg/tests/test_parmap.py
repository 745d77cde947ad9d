import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles as O
from laxfact import parmap as pm
from laxfact.errors import ContractViolation, ResourceError
from laxfact.parmap import PartialMap


@pytest.mark.parametrize("N, count", [(0, 1), (1, 5), (2, 23), (3, 144)])
def test_morphism_counts(N, count):
    C = pm.build_par_category(N)
    assert C.n_morphisms == count == len(O.all_maps(N))


def test_hom_sizes_are_powers():
    C = pm.build_par_category(3)
    for m in range(4):
        for n in range(4):
            assert len(C.hom(m, n)) == (n + 1) ** m


def test_names_follow_rank(par2):
    for i in range(par2.n_morphisms):
        p = par2.map(i)
        assert par2.name(i) == f"p{p.dom}_{p.cod}_{p.rank()}"
    assert par2.map(par2.index("p2_1_0")).values == (None, None)


def test_composition_matches_oracle(par2, par_index):
    for f in O.all_maps(2):
        for g in O.all_maps(2):
            if f[1] == g[0]:
                assert par2.comp[par_index[g], par_index[f]] == par_index[O.comp(g, f)]


def test_order_is_restriction(par2, par_index):
    for f in O.all_maps(2):
        for g in O.all_maps(2):
            if f[:2] == g[:2]:
                assert bool(par2.leq[par_index[f], par_index[g]]) == O.leq(f, g)


def test_hard_cap():
    with pytest.raises(ResourceError):
        pm.build_par_category(pm.HARD_CAP + 1)


def test_partial_map_contracts():
    with pytest.raises(ContractViolation):
        PartialMap(2, 1, (0,))
    with pytest.raises(ContractViolation):
        PartialMap.of(1, [1])
    with pytest.raises(ContractViolation):
        pm.compose_partial(PartialMap.of(2, [0]), PartialMap.of(3, [0]))


def test_partial_map_basics():
    f = PartialMap.of(2, [1, None, 0])
    assert f.defined == (0, 2) and f.image == (0, 1)
    assert str(f) == "3⇀2 [1,⊥,0]"
    assert pm.is_surjective(f) and pm.is_injective(f) and not pm.is_total(f)
    assert pm.is_zero(pm.zero_map(3, 2))


def test_inclusion_and_partial_inverse():
    mu = pm.inclusion((0, 2), 3)
    nu = pm.partial_inverse_of_inclusion((0, 2), 3)
    assert mu.values == (0, 2) and nu.values == (0, None, 1)
    assert pm.compose_partial(nu, mu) == pm.identity(2)
    assert pm.restriction_leq(pm.compose_partial(mu, nu), pm.identity(3))


def test_adjunction_partner_is_the_partial_inverse():
    f = PartialMap.of(3, [2, 0])
    g = pm.adjunction_partner(f)
    assert g == PartialMap.of(2, [1, None, 0])
    assert pm.is_adjoint(f, g)
    assert pm.adjunction_partner(PartialMap.of(1, [0, 0])) is None
    assert pm.adjunction_partner(PartialMap.of(2, [None])) is None


def test_left_adjoints_are_total_injections():
    lefts = O.left_adjoints(2)
    assert all(O.total(f) and O.injective_on_domain(f) for f in lefts)
    assert len(lefts) == 8


def test_enumeration_order():
    ms = pm.enumerate_partial_maps(2, 1)
    assert [m.values for m in ms] == [(None, None), (None, 0), (0, None), (0, 0)]
    assert [m.rank() for m in ms] == [0, 1, 2, 3]


def test_cache_returns_same_object():
    assert pm.build_par_category(1) is pm.build_par_category(1)
    pm.clear_par_cache()
    assert pm.build_par_category(1).n_morphisms == 5


# -- properties against the oracle -------------------------------------------------------------


@st.composite
def partial_maps(draw, dom=None, cod=None, N=4):
    m = draw(st.integers(0, N)) if dom is None else dom
    n = draw(st.integers(0, N)) if cod is None else cod
    vals = draw(st.lists(st.one_of(st.none(), st.integers(0, n - 1)) if n else st.none(), min_size=m, max_size=m))
    return PartialMap(m, n, tuple(vals))


@st.composite
def composable_triple(draw, N=4):
    f = draw(partial_maps(N=N))
    g = draw(partial_maps(dom=f.cod, N=N))
    h = draw(partial_maps(dom=g.cod, N=N))
    return f, g, h


def _t(p: PartialMap):
    return (p.dom, p.cod, p.values)


@given(composable_triple())
def test_composition_associative(fgh):
    f, g, h = fgh
    assert pm.compose_partial(h, pm.compose_partial(g, f)) == pm.compose_partial(pm.compose_partial(h, g), f)
    assert _t(pm.compose_partial(g, f)) == O.comp(_t(g), _t(f))


@given(partial_maps())
def test_identities_are_units(f):
    assert pm.compose_partial(pm.identity(f.cod), f) == f == pm.compose_partial(f, pm.identity(f.dom))


@given(composable_triple(N=3))
def test_composition_monotone_in_restriction_order(fgh):
    f, g, _ = fgh
    smaller = PartialMap(f.dom, f.cod, tuple(v if i % 2 else None for i, v in enumerate(f.values)))
    assert pm.restriction_leq(smaller, f)
    assert pm.restriction_leq(pm.compose_partial(g, smaller), pm.compose_partial(g, f))


@given(partial_maps(N=3))
def test_index_round_trip(f):
    C = pm.build_par_category(3)
    assert C.map(C.id_of(f)) == f
    assert C.is_total(C.id_of(f)) == pm.is_total(f)
    assert np.array_equal(C.values(C.id_of(f)), [-1 if v is None else v for v in f.values])
