import json
from fractions import Fraction

import pytest

from quatks.catalog import CatalogError, format_rational, load_catalog, parse_entry, parse_rational
from quatks.quat import QuaternionError


def raw_entries():
    from importlib import resources
    return json.loads(resources.files("quatks").joinpath("data/catalog.json").read_text())["entries"]


def test_shipped_catalog():
    entries = load_catalog()
    assert sorted(e.expected_d_B for e in entries if e.maximal) == [1, 6, 14, 22]
    for e in entries:
        e.order()


def test_round_trip():
    for raw in raw_entries():
        assert parse_entry(raw).to_json() == raw


def test_rationals():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert format_rational(Fraction(4, 2)) == "2/1"
    with pytest.raises(ValueError):
        parse_rational(0.5)


@pytest.mark.parametrize("field,value,message", [
    ("basis", ["1/1"] * 15, "16 rationals"),
    ("expected_d_B", 7, "discriminant"),
    ("a", "x/y", "malformed"),
    ("a", "0/1", "nonzero"),
    ("mu_hint", ["0/1"], "mu_hint"),
])
def test_malformed_entries_name_the_entry(field, value, message):
    raw = dict(raw_entries()[1], **{field: value})
    with pytest.raises(CatalogError, match=message) as info:
        parse_entry(raw)
    assert info.value.entry_id == "dB06"


def test_corrupted_basis_fails_order_axioms():
    raw = dict(raw_entries()[1])
    raw["basis"] = raw["basis"][:12] + ["1/3", "1/3", "1/3", "1/3"]
    with pytest.raises(QuaternionError, match="not an order"):
        parse_entry(raw).order()


def test_env_var(tmp_path, monkeypatch):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"entries": raw_entries()[:1]}))
    monkeypatch.setenv("QUATKS_CATALOG", str(path))
    assert [e.id for e in load_catalog()] == ["M2Z"]


def test_unreadable(tmp_path):
    with pytest.raises(CatalogError):
        load_catalog(tmp_path / "missing.json")
    (tmp_path / "bad.json").write_text("{")
    with pytest.raises(CatalogError):
        load_catalog(tmp_path / "bad.json")
    (tmp_path / "dup.json").write_text(json.dumps([raw_entries()[0]] * 2))
    with pytest.raises(CatalogError, match="duplicate"):
        load_catalog(tmp_path / "dup.json")
