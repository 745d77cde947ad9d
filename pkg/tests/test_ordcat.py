import json

import numpy as np
import pytest

from laxfact.corpus import broken_category_text, bundled, example_names, zero_below_idempotent
from laxfact.errors import CategoryFileError, ContractViolation, ResourceError
from laxfact.ordcat import dump_category, load_category, parse_category, validate_category

TWO_OBJECTS = {
    "objects": ["a", "b"],
    "morphisms": [
        {"name": "ida", "dom": "a", "cod": "a"},
        {"name": "idb", "dom": "b", "cod": "b"},
        {"name": "f", "dom": "a", "cod": "b"},
        {"name": "g", "dom": "a", "cod": "b"},
    ],
    "identities": {"a": "ida", "b": "idb"},
    "compose": [],
    "leq": [["f", "g"]],
}


def test_parse_small_category():
    C = parse_category(json.dumps(TWO_OBJECTS), label="two")
    assert C.n_objects == 2 and C.n_morphisms == 4
    assert C.compose(C.index("idb"), C.index("f")) == C.index("f")
    assert C.leq[C.index("f"), C.index("g")] and not C.leq[C.index("g"), C.index("f")]
    assert validate_category(C).ok


@pytest.mark.parametrize("name", ["par1", "par2", "par3", *example_names()])
def test_bundled_categories_validate(name):
    rep = validate_category(bundled(name))
    assert rep.ok, rep.violations[:3]


def test_broken_file_reports_monotonicity(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text(broken_category_text())
    rep = validate_category(load_category(p))
    assert not rep.ok
    assert all("not monotone" in v for v in rep.violations)
    assert len(rep.violations) == 2


def test_round_trip_preserves_structure():
    C = zero_below_idempotent()
    D = parse_category(dump_category(C), label=C.label)
    assert D.names == C.names
    assert np.array_equal(C.comp, D.comp) and np.array_equal(C.leq, D.leq)


@pytest.mark.parametrize(
    "mutate, needle",
    [
        (lambda d: d.pop("compose"), "missing key"),
        (lambda d: d["compose"].append(["f", "zz", "f"]), "unknown morphism 'zz'"),
        (lambda d: d["identities"].pop("b"), "no identity"),
        (lambda d: d["leq"].append(["f", "ida"]), "non-parallel"),
        (lambda d: d["leq"].append(["g", "f"]), "not antisymmetric"),
        (lambda d: d["morphisms"].append({"name": "h", "dom": "a", "cod": "c"}), "unknown endpoint"),
    ],
)
def test_malformed_files(mutate, needle):
    d = json.loads(json.dumps(TWO_OBJECTS))
    mutate(d)
    with pytest.raises(CategoryFileError, match=needle):
        parse_category(json.dumps(d, indent=1), label="bad")


def test_malformed_json_reports_line():
    with pytest.raises(CategoryFileError, match="line 2"):
        parse_category('{"objects":\n ]', label="bad")


def test_wrong_identity_composite_is_reported():
    d = json.loads(json.dumps(TWO_OBJECTS))
    d["compose"].append(["f", "ida", "g"])
    rep = validate_category(parse_category(json.dumps(d)))
    assert not rep.ok and not rep.structural
    assert "right identity fails at f" in rep.violations


def test_missing_composite_is_structural():
    d = {
        "objects": ["a"],
        "morphisms": [{"name": "i", "dom": "a", "cod": "a"}, {"name": "e", "dom": "a", "cod": "a"}],
        "identities": {"a": "i"},
        "compose": [],
    }
    rep = validate_category(parse_category(json.dumps(d)))
    assert rep.structural == ["missing composite e . e"]


def test_unknown_name_lookup():
    C = zero_below_idempotent()
    with pytest.raises(ContractViolation):
        C.index("nope")


def test_cap_from_environment(monkeypatch):
    monkeypatch.setenv("LAXFACT_CAP", "3")
    with pytest.raises(ResourceError):
        parse_category(json.dumps(TWO_OBJECTS))
    monkeypatch.setenv("LAXFACT_CAP", "lots")
    with pytest.raises(ResourceError):
        parse_category(json.dumps(TWO_OBJECTS))
