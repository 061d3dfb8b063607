"""Figure rendering for simulation reports.

Curves are written to image files next to the delimited output; rendering
uses the Agg backend so it works headless.
"""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["save_error_curves"]


def save_error_curves(rows: Sequence[dict], path, *, title: str | None = None) -> None:
    """Log-log error-versus-time curves, one line per method label.

    Rows are dicts with keys method, t, and E_pauli (preferred when present)
    or E_frob, as produced by the scaling experiment.
    """
    by_method: dict[str, list[dict]] = {}
    for row in rows:
        by_method.setdefault(str(row.get("method", "")), []).append(row)

    fig, ax = plt.subplots(figsize=(5.5, 4.0))
    for label, group in by_method.items():
        pts = sorted(
            (
                (r["t"], r["E_pauli"] if r.get("E_pauli") is not None else r["E_frob"])
                for r in group
                if r["t"] > 0
            ),
        )
        ts = [p[0] for p in pts if p[1] > 0]
        es = [p[1] for p in pts if p[1] > 0]
        if ts:
            ax.loglog(ts, es, marker=".", markersize=3, linewidth=1, label=label)
    ax.set_xlabel("time")
    ax.set_ylabel("error")
    if title:
        ax.set_title(title)
    if by_method:
        ax.legend(fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
