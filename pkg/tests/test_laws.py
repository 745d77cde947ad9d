import json

import pytest

from laxfact.errors import CategoryFileError, ContractViolation
from laxfact.factsys import SCHEME_NAMES, ambient_size_for, make_scheme
from laxfact.laws import (
    build_structure,
    check_distributivity_law,
    check_lax_algebra,
    check_lax_comonad_laws,
    check_lax_monad_laws,
    check_lawfs_implies_lfwfs,
    check_partner_observation,
    check_unit_restriction,
    compose_squares,
    corrupt_structure,
    identity_square,
    load_structure,
    monad_report,
    related,
    structure_report,
)
from laxfact.ortho import Square, all_diagonals, par_universe


def _setup(name, N=2):
    U = par_universe(N, ambient_size_for(name, N))
    return U, make_scheme(name, U.category)


def test_square_helpers(par2):
    f = par2.index("p2_1_3")
    idsq = identity_square(par2, f, "lax")
    assert compose_squares(par2, idsq, idsq) == idsq
    with pytest.raises(ContractViolation):
        compose_squares(par2, identity_square(par2, par2.index("p1_1_1"), "lax"), idsq)
    lo, hi = par2.index("p1_1_0"), par2.index("p1_1_1")
    assert related(par2, "lax", lo, hi) and not related(par2, "oplax", lo, hi)
    assert related(par2, "oplax", hi, lo) and not related(par2, "strict", lo, hi)


def test_domain_total_theta_is_identity():
    """Rf is total, so R(Rf) = Rf and eps_{Rf} has the identity as its top-extremal filler."""
    U, s = _setup("domain-total")
    st = build_structure(s)
    C = U.category
    for f in U.members:
        assert st.theta(f) == C.identity(s.K(f))


@pytest.mark.parametrize("name", ["domain-total", "transfer-epi-mono", "trivial-left", "trivial-right"])
def test_extremal_pick_is_extremal(name):
    U, s = _setup(name)
    st = build_structure(s)
    C = U.category
    for f in U.members:
        for comp, sq in ((st.theta(f), s.epsilon(s.R(f))), (st.omega(f), s.eta(s.L(f)))):
            ds = all_diagonals(C, sq)
            assert comp in ds
            above = [d for d in ds if d != comp and related(C, s.kind, comp, d)]
            assert above == []


@pytest.mark.parametrize("name", ["domain-total", "transfer-epi-mono", "trivial-left", "trivial-right"])
def test_monad_and_comonad_laws(name):
    U, s = _setup(name)
    st = build_structure(s)
    assert structure_report(st, U).status == "pass"
    m = check_lax_monad_laws(st, U)
    c = check_lax_comonad_laws(st, U)
    assert m.status == "pass", m.failures[:3]
    assert c.status == "pass", c.failures[:3]
    assert set(m.details["laws"]) == {"unit-left", "unit-right", "associativity"}
    assert set(c.details["laws"]) == {"counit-left", "counit-right", "coassociativity"}
    assert check_unit_restriction(st, U).status == "pass"


@pytest.mark.parametrize("name", ["transfer-epi-mono", "trivial-left", "trivial-right"])
def test_distributivity(name):
    U, s = _setup(name)
    assert check_distributivity_law(build_structure(s), U).status == "pass"


def test_domain_total_distributivity_is_not_asserted():
    U, s = _setup("domain-total")
    assert check_distributivity_law(build_structure(s), U).status in ("pass", "expected-unknown")


def test_first_filler_breaks_trivial_left_hexagons():
    U, s = _setup("trivial-left")
    v = check_distributivity_law(build_structure(s, choice="first"), U)
    assert v.status == "fail"
    assert check_distributivity_law(build_structure(s), U).status == "pass"


def test_mono_epi_unit_left():
    U, s = _setup("transfer-mono-epi")
    v = check_lax_monad_laws(build_structure(s), U)
    assert v.status == "fail"
    assert {x["law"] for x in v.failures} == {"unit-left"}
    assert v.details["laws"]["unit-left"]["fail"] == 3


@pytest.mark.parametrize("name", ["domain-total", "transfer-epi-mono", "trivial-left"])
def test_structure_diagonals(name):
    U, s = _setup(name)
    out = check_lawfs_implies_lfwfs(build_structure(s), U)
    assert all(v.status == "pass" for v in out.values())


@pytest.mark.parametrize("name", ["domain-total", "transfer-epi-mono"])
def test_algebra_and_partner_observations(name):
    U, s = _setup(name)
    assert check_lax_algebra(s, U).status == "pass"
    assert check_partner_observation(s, U).status in ("pass", "vacuous")


@pytest.mark.parametrize("which", ["theta", "omega"])
def test_corrupted_structure_is_caught(which):
    U, s = _setup("domain-total")
    st = build_structure(s)
    bad, desc = corrupt_structure(st, U, which)
    assert desc["failed_laws"]
    assert desc["replacement"] != desc["original"]
    check = check_lax_monad_laws if which == "theta" else check_lax_comonad_laws
    assert check(bad, U).status == "fail"
    assert check(st, U).status == "pass"


@pytest.mark.parametrize("name", ["domain-total", "transfer-epi-mono", "trivial-left"])
def test_laws_hold_as_equalities_on_par2(name):
    U, s = _setup(name)
    st = build_structure(s)
    for check in (check_lax_monad_laws, check_lax_comonad_laws):
        v = check(st, U, exact=True)
        assert v.status == "pass" and v.details["exact"] is True


def test_structure_file(tmp_path):
    U, s = _setup("domain-total")
    C = U.category
    st = build_structure(s)
    f = U.members[5]
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"theta": {C.name(f): C.name(st.theta(f))}}))
    loaded = load_structure(s, p)
    assert loaded.theta_override == {f: st.theta(f)}
    p.write_text(json.dumps({"theta": {"nope": "p0_0_0"}}))
    with pytest.raises(CategoryFileError):
        load_structure(s, p)
    p.write_text("[1]")
    with pytest.raises(CategoryFileError):
        load_structure(s, p)
    with pytest.raises(ContractViolation):
        build_structure(s, choice="random")


@pytest.mark.parametrize("name", SCHEME_NAMES)
def test_monad_report_shape(name):
    U, s = _setup(name)
    rep = monad_report(s, U)
    assert rep["filler_choice"] == "extremal"
    assert set(rep["checks"]) >= {"structure", "monad-laws", "comonad-laws", "distributivity"}
    assert rep["passed"] == (name != "transfer-mono-epi")
