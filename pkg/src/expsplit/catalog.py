"""Bundled method catalog.

Integer methods are stored as notation strings and parse to exact rationals.
Irrational methods are stored as 27-decimal coefficient strings (together
with the unit signs of their symmetric construction) and load as double
precision by default, or as mpmath floats for extended-precision checks.
Composed entries are generated from their base method on first access.

The catalog is also shipped as ``data/catalog.json``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Callable, Optional

from .compose import default_doubling_schedule, raise_order
from .gates import COMMUTATOR_4_NOTATION, commutator_method_5
from .notation import Method, Target, Unit, method_to_json, parse_method

__all__ = [
    "CatalogEntry",
    "CATALOG",
    "catalog_ids",
    "get_entry",
    "get_method",
    "R3_1_COEFFICIENTS",
    "R4_COEFFICIENTS",
    "R4_SIGNS",
    "R4_POLYNOMIALS",
    "catalog_as_json",
    "write_catalog_json",
    "bundled_catalog_json",
]

# 3rd-order irrational method, unit signs (+, -, -, +), coefficients to 27
# decimal places, normalised so the time advance D is exactly 1.
R3_1_COEFFICIENTS = (
    "0.451525513208585723409578820",
    "-0.630880954030002500791663663",
    "-1.136710925213995714728206549",
    "-1.219117392452583938929449032",
)
R3_1_SIGNS = (1, -1, -1, 1)

# 4th-order irrational methods from the symmetric construction
# alpha_{7-i} = -alpha_i, a_{7-i} = -a_i; only the first half is stored.
R4_SIGNS = {
    1: (1, -1, 1),
    2: (1, -1, -1),
    3: (1, 1, -1),
    4: (1, 1, 1),
}
R4_COEFFICIENTS = {
    1: (
        "0.675603595979828817023843904",
        "-0.675603595979828817023843904",
        "-0.851207191959657634047687809",
    ),
    2: (
        "-1.075035037431900314780251056",
        "-1.024607977441460486144230714",
        "-0.550427059990439828636020342",
    ),
    3: (
        "0.938925888779098070854126976",
        "-1.002122279211397565598116356",
        "-0.563196390432299494743989380",
    ),
    4: (
        "1.087752928204421689142747144",
        "-1.131212302433601022822197398",
        "0.543459374229179333679450254",
    ),
}

# Defining polynomial of the coefficient ratio x = a_2/a_1 per variant
# (variant 1 has the closed form x = -1); coefficients highest degree first.
R4_POLYNOMIALS = {
    2: (1, 3, 3, 0, -3, -3),
    3: (2, 0, 3, 3, 0, 3),
    4: (1, 0, 3, 1, 3, 3, 0, 3, 0, 1),
}

_INTEGER_NOTATION = {
    "Z1_1": "(1)",
    "Z2_1": "(1)(1)^T",
    "Z3_1": "(1)^T(1)(1)(1)(1)^T(-2)^T(1)(1)(1)",
    "Z3_2": "(1)^T(4)(2)(-5)^T(2)^T(3)(2)(2)^T(1)",
    "Z3_3": "(1)^T(2)(2)(-3)^T(1)^T(2)(1)^T",
    "Z3_4": "(3)(-4)^T(1)(3)(2)^T(1)",
    "Z3_5": "(5)^T(7)(12)(-13)^T(1)",
    "Z4_1": "(1)^T(1)(1)^T(-2)(1)^T(1)^T(1)^T(1)^T(1)(1)^T"
    "(1)(1)(1)(1)(-2)^T(1)(1)^T(1)",
    "Z4_2": "(1)^T(2)(1)^T(-3)^T(2)(2)(1)(2)^T(2)^T(-3)(2)^T(1)(1)(1)^T",
    "Z4_3": "(1)^T(2)(3)^T(1)^T(-4)(3)^T(3)(-4)^T(1)(3)(2)^T(1)",
    "Z4_4": "(6)^T(-7)(1)^T(1)(5)^T(5)(1)^T(1)(-7)^T(6)",
}

_INTEGER_ORDERS = {
    "Z1_1": 1,
    "Z2_1": 2,
    "Z3_1": 3,
    "Z3_2": 3,
    "Z3_3": 3,
    "Z3_4": 3,
    "Z3_5": 3,
    "Z4_1": 4,
    "Z4_2": 4,
    "Z4_3": 4,
    "Z4_4": 4,
}


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    kind: str  # "integer" | "irrational" | "commutator" | "composed"
    target: Target
    claimed_order: int
    description: str
    builder: Callable[..., Method]

    def method(self, *, decimal_type=float) -> Method:
        return self.builder(decimal_type=decimal_type)


def _irrational_method(
    signs: tuple[int, ...], coeffs: tuple[str, ...], *, decimal_type=float
) -> Method:
    units = tuple(
        Unit(alpha, decimal_type(a)) for alpha, a in zip(signs, coeffs)
    )
    return Method(units, Target.SUM)


def _r4_units(variant: int) -> tuple[tuple[int, ...], tuple[str, ...]]:
    half_alpha = R4_SIGNS[variant]
    half_a = R4_COEFFICIENTS[variant]
    alphas = half_alpha + tuple(-x for x in reversed(half_alpha))
    avals = half_a + tuple(_negate_decimal(a) for a in reversed(half_a))
    return alphas, avals


def _negate_decimal(s: str) -> str:
    return s[1:] if s.startswith("-") else "-" + s


def _build_entries() -> dict[str, CatalogEntry]:
    entries: dict[str, CatalogEntry] = {}

    for mid, notation in _INTEGER_NOTATION.items():
        order = _INTEGER_ORDERS[mid]
        entries[mid] = CatalogEntry(
            id=mid,
            kind="integer",
            target=Target.SUM,
            claimed_order=order,
            description=f"integer method, order {order}",
            builder=lambda decimal_type=float, s=notation: parse_method(s),
        )

    entries["R3_1"] = CatalogEntry(
        id="R3_1",
        kind="irrational",
        target=Target.SUM,
        claimed_order=3,
        description="shortest 3rd-order method (4 units, D = 1)",
        builder=lambda decimal_type=float: _irrational_method(
            R3_1_SIGNS, R3_1_COEFFICIENTS, decimal_type=decimal_type
        ),
    )
    for variant in (1, 2, 3, 4):
        alphas, avals = _r4_units(variant)
        entries[f"R4_{variant}"] = CatalogEntry(
            id=f"R4_{variant}",
            kind="irrational",
            target=Target.SUM,
            claimed_order=4,
            description=f"symmetric 6-unit 4th-order method, variant {variant}",
            builder=lambda decimal_type=float, al=alphas, av=avals: (
                _irrational_method(al, av, decimal_type=decimal_type)
            ),
        )

    entries["COMM4"] = CatalogEntry(
        id="COMM4",
        kind="commutator",
        target=Target.COMMUTATOR,
        claimed_order=4,
        description="34-unit 4th-order commutator gate",
        builder=lambda decimal_type=float: parse_method(
            COMMUTATOR_4_NOTATION, target=Target.COMMUTATOR
        ),
    )
    entries["COMM5"] = CatalogEntry(
        id="COMM5",
        kind="commutator",
        target=Target.COMMUTATOR,
        claimed_order=5,
        description="68-unit 5th-order commutator gate (doubled 4th order)",
        builder=lambda decimal_type=float: commutator_method_5(),
    )

    def _comp4(decimal_type=float) -> Method:
        base = parse_method(_INTEGER_NOTATION["Z2_1"])
        return raise_order(base, default_doubling_schedule(2))

    def _comp6(decimal_type=float) -> Method:
        return raise_order(_comp4(), default_doubling_schedule(4))

    entries["COMP4"] = CatalogEntry(
        id="COMP4",
        kind="composed",
        target=Target.SUM,
        claimed_order=4,
        description="18-unit 4th-order composition of the 2nd-order base",
        builder=_comp4,
    )
    entries["COMP6"] = CatalogEntry(
        id="COMP6",
        kind="composed",
        target=Target.SUM,
        claimed_order=6,
        description="594-unit 6th-order composition (iterated doubling)",
        builder=_comp6,
    )
    return entries


CATALOG: dict[str, CatalogEntry] = _build_entries()


def catalog_ids() -> list[str]:
    return list(CATALOG)


def get_entry(mid: str) -> CatalogEntry:
    try:
        return CATALOG[mid]
    except KeyError:
        raise KeyError(
            f"unknown catalog id {mid!r}; known ids: {', '.join(CATALOG)}"
        ) from None


def get_method(mid: str, *, decimal_type=float) -> Method:
    return get_entry(mid).method(decimal_type=decimal_type)


def catalog_as_json() -> list[dict]:
    """Catalog as plain JSON data, coefficients as strings."""
    out = []
    for mid, entry in CATALOG.items():
        m = entry.method()
        record = {
            "id": mid,
            "kind": entry.kind,
            "target": entry.target.value,
            "order": entry.claimed_order,
            "description": entry.description,
            "unit_count": m.unit_count,
            "units": method_to_json(m),
        }
        if entry.kind == "irrational":
            if mid == "R3_1":
                record["coefficients"] = list(R3_1_COEFFICIENTS)
            else:
                variant = int(mid.split("_")[1])
                record["coefficients"] = list(R4_COEFFICIENTS[variant])
        out.append(record)
    return out


def write_catalog_json(path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(catalog_as_json(), fh, indent=1)
        fh.write("\n")


def bundled_catalog_json() -> list[dict]:
    """The catalog as shipped in the package data."""
    text = (
        resources.files("expsplit").joinpath("data/catalog.json").read_text()
    )
    return json.loads(text)
