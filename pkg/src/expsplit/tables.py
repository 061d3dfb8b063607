"""Reproducible metric and residual tables.

Every table is produced twice: as aligned text for the terminal and as CSV.
Cell values are rounded half away from zero to a fixed number of decimals
(computed exactly for rational entries), which makes the output bit-stable
across runs and platforms; golden copies live in ``data/golden``.
"""

from __future__ import annotations

import io
from fractions import Fraction
from importlib import resources
from typing import Sequence

from .catalog import get_method
from .notation import Method
from .residuals import rho_vector, report
from .sigma import sigma_vector

__all__ = [
    "Table",
    "format_fixed",
    "metrics_table",
    "residual_table",
    "commutator_residual_table",
    "all_tables",
    "render_text",
    "render_csv",
    "golden_csv",
    "GOLDEN_TABLE_NAMES",
]

GOLDEN_TABLE_NAMES = (
    "metrics_order3",
    "metrics_order4",
    "residuals_order3_integer_leading",
    "residuals_order3_integer_next",
    "residuals_order3_irrational_leading",
    "residuals_order3_irrational_next",
    "residuals_order4_integer",
    "residuals_order4_irrational",
    "residuals_commutator",
)

_LEADING_3 = ("1", "1112", "1221", "2221")
_NEXT_3 = ("11112", "21112", "11221", "22112", "12221", "22221")
_LEADING_4 = ("1",) + _NEXT_3
_COMM_WORDS = ("12",) + _NEXT_3


class Table:
    def __init__(self, name: str, columns: Sequence[str], rows: list[list[str]]):
        self.name = name
        self.columns = list(columns)
        self.rows = rows


def format_fixed(value, decimals: int) -> str:
    """Fixed-point string, rounded half away from zero, exact for rationals."""
    x = value if isinstance(value, Fraction) else Fraction(float(value))
    shift = 10**decimals
    scaled = x * shift
    if scaled >= 0:
        q = (scaled + Fraction(1, 2)).__floor__()
    else:
        q = -((-scaled + Fraction(1, 2)).__floor__())
    if q == 0:
        q = 0  # never print "-0.0"
    sign = "-" if q < 0 else ""
    q = abs(q)
    whole, frac = divmod(q, shift)
    if decimals == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{decimals}d}"


def metrics_table(order: int, ids: Sequence[str]) -> Table:
    """Selection metrics D, L, I, L/D, R/D, Z for the given catalog ids."""
    rows = []
    for mid in ids:
        rep = report(get_method(mid))
        rows.append(
            [
                mid,
                format_fixed(rep.D, 0),
                format_fixed(rep.L, 0),
                str(rep.I),
                format_fixed(rep.l_over_d, 2),
                format_fixed(rep.r_over_d, 1),
                format_fixed(rep.Z, 1),
            ]
        )
    return Table(
        f"metrics_order{order}",
        ["method", "D", "L", "I", "L/D", "R/D", "Z"],
        rows,
    )


def residual_table(
    name: str, ids: Sequence[str], words: Sequence[str], decimals: int
) -> Table:
    rows = []
    for mid in ids:
        rho = rho_vector(sigma_vector(get_method(mid)))
        rows.append(
            [mid] + [format_fixed(rho[w], decimals) for w in words]
        )
    return Table(name, ["method"] + [f"rho_{w}" for w in words], rows)


def commutator_residual_table() -> Table:
    return residual_table("residuals_commutator", ["COMM4"], _COMM_WORDS, 1)


def all_tables() -> list[Table]:
    z3 = [f"Z3_{k}" for k in range(1, 6)]
    z4 = [f"Z4_{k}" for k in range(1, 5)]
    r4 = [f"R4_{k}" for k in range(1, 5)]
    return [
        metrics_table(3, z3),
        metrics_table(4, z4),
        residual_table("residuals_order3_integer_leading", z3, _LEADING_3, 1),
        residual_table("residuals_order3_integer_next", z3, _NEXT_3, 1),
        residual_table(
            "residuals_order3_irrational_leading", ["R3_1"], _LEADING_3, 6
        ),
        residual_table(
            "residuals_order3_irrational_next", ["R3_1"], _NEXT_3, 6
        ),
        residual_table("residuals_order4_integer", z4, _LEADING_4, 1),
        residual_table("residuals_order4_irrational", r4, _LEADING_4, 6),
        commutator_residual_table(),
    ]


def render_text(table: Table) -> str:
    widths = [
        max(len(str(cell)) for cell in [col] + [row[i] for row in table.rows])
        for i, col in enumerate(table.columns)
    ]
    out = io.StringIO()
    out.write(table.name + "\n")
    header = "  ".join(col.rjust(w) for col, w in zip(table.columns, widths))
    out.write(header + "\n")
    out.write("-" * len(header) + "\n")
    for row in table.rows:
        out.write("  ".join(cell.rjust(w) for cell, w in zip(row, widths)) + "\n")
    return out.getvalue()


def render_csv(table: Table) -> str:
    lines = [",".join(table.columns)]
    for row in table.rows:
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def golden_csv(name: str) -> str:
    """The bundled golden copy of a table's CSV."""
    return (
        resources.files("expsplit")
        .joinpath(f"data/golden/{name}.csv")
        .read_text()
    )
