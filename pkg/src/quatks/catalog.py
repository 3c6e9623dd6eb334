"""Catalog of (algebra, order) entries read from JSON.

Rationals are stored as "num/den" strings.  The packaged catalog is used
unless a path is given or QUATKS_CATALOG is set.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from quatks.orders import MuElement, Order, find_mu, make_order
from quatks.quat import QuatAlgebra, QuatElement, QuaternionError, discriminant

ENV_VAR = "QUATKS_CATALOG"


class CatalogError(ValueError):
    def __init__(self, entry_id: Optional[str], message: str):
        self.entry_id = entry_id
        super().__init__(f"[{entry_id}] {message}" if entry_id else message)


def parse_rational(s: Union[str, int]) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise ValueError(f"expected a 'num/den' string, got {s!r}")
    return Fraction(s)


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    a: Fraction
    b: Fraction
    basis: tuple[tuple[Fraction, ...], ...]
    expected_d_B: int
    mu_hint: Optional[tuple[Fraction, ...]] = None
    maximal: bool = True

    def algebra(self) -> QuatAlgebra:
        return QuatAlgebra(self.a, self.b)

    def basis_elements(self) -> list[QuatElement]:
        A = self.algebra()
        return [A.element(*row) for row in self.basis]

    def order(self) -> Order:
        """The order, with the order axioms checked (raises QuaternionError)."""
        return make_order(self.algebra(), self.basis_elements())

    def mu(self, O: Optional[Order] = None) -> MuElement:
        O = O if O is not None else self.order()
        if self.mu_hint is None:
            return find_mu(O)
        mu = MuElement(self.algebra().element(*self.mu_hint), self.expected_d_B)
        if not O.contains(mu.mu):
            raise CatalogError(self.id, "mu_hint does not lie in the order")
        return mu

    def to_json(self) -> dict:
        out = {
            "id": self.id,
            "a": format_rational(self.a),
            "b": format_rational(self.b),
            "basis": [format_rational(x) for row in self.basis for x in row],
            "expected_d_B": self.expected_d_B,
        }
        if self.mu_hint is not None:
            out["mu_hint"] = [format_rational(x) for x in self.mu_hint]
        if not self.maximal:
            out["maximal"] = False
        return out


def parse_entry(raw: dict) -> CatalogEntry:
    eid = raw.get("id") if isinstance(raw, dict) else None
    if not isinstance(eid, str) or not eid:
        raise CatalogError(None, f"entry without a string id: {raw!r}")
    try:
        a, b = parse_rational(raw["a"]), parse_rational(raw["b"])
        flat = [parse_rational(x) for x in raw["basis"]]
        d = raw["expected_d_B"]
        hint = raw.get("mu_hint")
        hint = tuple(parse_rational(x) for x in hint) if hint is not None else None
        maximal = raw.get("maximal", True)
    except (KeyError, ValueError, ZeroDivisionError, TypeError) as exc:
        raise CatalogError(eid, f"malformed field: {exc}") from exc
    if len(flat) != 16:
        raise CatalogError(eid, f"basis needs 16 rationals, got {len(flat)}")
    if hint is not None and len(hint) != 4:
        raise CatalogError(eid, "mu_hint needs 4 rationals")
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise CatalogError(eid, f"expected_d_B must be a positive integer, got {d!r}")
    if not isinstance(maximal, bool):
        raise CatalogError(eid, "maximal must be a boolean")
    try:
        actual = discriminant(QuatAlgebra(a, b))
    except QuaternionError as exc:
        raise CatalogError(eid, str(exc)) from exc
    if actual != d:
        raise CatalogError(eid, f"expected_d_B = {d} but discriminant({a}, {b}) = {actual}")
    basis = tuple(tuple(flat[4 * r:4 * r + 4]) for r in range(4))
    return CatalogEntry(eid, a, b, basis, d, hint, maximal)


def default_catalog_path():
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return resources.files("quatks").joinpath("data/catalog.json")


def load_raw(path=None) -> list[dict]:
    """The unparsed entry list."""
    src = Path(path) if path is not None else default_catalog_path()
    try:
        data = json.loads(src.read_text())
    except OSError as exc:
        raise CatalogError(None, f"cannot read catalog {src}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CatalogError(None, f"catalog {src} is not valid JSON: {exc}") from exc
    raw = data.get("entries") if isinstance(data, dict) else data
    if not isinstance(raw, list):
        raise CatalogError(None, "catalog must be a list of entries or {'entries': [...]}")
    return raw


def load_catalog(path=None) -> list[CatalogEntry]:
    """Parse every entry; raises CatalogError naming the first bad entry."""
    entries = [parse_entry(r) for r in load_raw(path)]
    ids = [e.id for e in entries]
    if len(set(ids)) != len(ids):
        raise CatalogError(None, "duplicate entry ids")
    return entries
