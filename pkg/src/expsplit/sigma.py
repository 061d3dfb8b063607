"""Campbell-Baker-Hausdorff coefficients of a splitting method.

Writing one unit as exp(sum_p alpha a^p B^p), the log of the whole product
expands over a commutator basis B^X indexed by digit strings X; the engine
computes the scalar coefficients sigma^X for the thirteen basis labels up to
5th order,

    X in {1; 2; 3, 12; 4, 13, 112; 5, 14, 23, 113, 221, 1112},

with order(X) = digit sum of X.  All recurrences share the running partial
power sums of alpha_i a_i^p, so a method is analysed in one pass.  Exact
rational coefficients stay exact; floats (or mpmath floats) flow through the
same formulas.

A method approximates exp(sum_n A_n) to order o when every sigma^X with
order(X) <= o vanishes except sigma^1 > 0, and exp([A_1, A_2]) when every
sigma^X vanishes except sigma^2.  The engine stops at 5th order, so reported
order 5 means "at least 5".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .notation import Coefficient, Method, Target

__all__ = [
    "SIGMA_LABELS",
    "label_order",
    "SigmaVector",
    "OrderReport",
    "sigma_p",
    "sigma_pq",
    "sigma_ppq",
    "sigma_1112",
    "sigma_vector",
    "sigma_from_units",
    "order_of",
    "MAX_ORDER",
    "DEFAULT_TOL",
]

SIGMA_LABELS = (
    "1",
    "2",
    "3",
    "12",
    "4",
    "13",
    "112",
    "5",
    "14",
    "23",
    "113",
    "221",
    "1112",
)

MAX_ORDER = 5

# Relative zero tolerance for float methods, scaled by L^order(X); exact
# methods are tested against literal zero.
DEFAULT_TOL = 1e-12

_PQ_LABELS = {"12": (1, 2), "13": (1, 3), "14": (1, 4), "23": (2, 3)}
_PPQ_LABELS = {"112": (1, 2), "113": (1, 3), "221": (2, 1)}


def label_order(label: str) -> int:
    """Order of a basis label: the sum of its digits."""
    return sum(int(ch) for ch in label)


@dataclass(frozen=True)
class SigmaVector:
    """All thirteen sigma^X coefficients of one method."""

    entries: dict

    def __getitem__(self, label: str) -> Coefficient:
        return self.entries[label]

    def to_json(self) -> dict:
        out = {}
        for label, value in self.entries.items():
            out[label] = str(value) if isinstance(value, Fraction) else float(value)
        return out


@dataclass(frozen=True)
class OrderReport:
    """Achieved order for the SUM or COMMUTATOR target.

    ``direction`` is the sign of sigma^2 for commutator methods; -1 marks a
    method realising the gate with reversed commutator, which is usable as
    the transposed gate rather than an error.
    """

    target: Target
    achieved_order: int
    leading_nonzero_labels: tuple[str, ...] = ()
    direction: int = 1


def _power_sums(units) -> dict[int, list]:
    """Running partial sums S_p[i] = sum_{j<=i} alpha_j a_j^p, p = 1..5."""
    sums = {p: [0] for p in range(1, 6)}
    for u in units:
        ap = u.a
        for p in range(1, 6):
            sums[p].append(sums[p][-1] + u.alpha * ap)
            ap = ap * u.a
    return sums


def sigma_from_units(units) -> dict[str, Coefficient]:
    """Sigma coefficients from a bare (alpha, a) sequence.

    Works for any coefficient type supporting field arithmetic (Fraction,
    float, mpmath, complex), which the nonlinear solver exploits for
    complex-step derivatives.
    """
    S = _power_sums(units)
    I = len(units)
    sig: dict[str, Coefficient] = {}
    for p in range(1, 6):
        sig[str(p)] = S[p][I]

    a_vals = [u.a for u in units]

    def telescoped(p: int, q: int, power: int) -> Coefficient:
        # sum_i a_i^{q-p} [ S_p[i]^power - S_p[i-1]^power ]
        total = 0
        col = S[p]
        for i in range(1, I + 1):
            total = total + a_vals[i - 1] ** (q - p) * (
                col[i] ** power - col[i - 1] ** power
            )
        return total

    for label, (p, q) in _PQ_LABELS.items():
        sig[label] = -sig[str(p)] * sig[str(q)] / 2 + telescoped(p, q, 2) / 2

    for label, (p, q) in _PPQ_LABELS.items():
        # sigma^{21} is -sigma^{12} by the bracket antisymmetry convention.
        sig_pq = sig["12"] if (p, q) == (1, 2) else (
            -sig["12"] if (p, q) == (2, 1) else sig["13"]
        )
        sig[label] = (
            -sig[str(p)] * sig_pq / 2
            - sig[str(p)] ** 2 * sig[str(q)] / 6
            + telescoped(p, q, 3) / 6
        )

    sig["1112"] = (
        -sig["1"] * sig["112"] / 2
        - sig["1"] ** 2 * sig["12"] / 3
        - sig["1"] ** 3 * sig["2"] / 24
        + telescoped(1, 2, 4) / 24
    )
    return sig


def sigma_vector(m: Method) -> SigmaVector:
    """All thirteen sigma^X of a method, sharing partial sums in one pass."""
    return SigmaVector(sigma_from_units(m.units))


def sigma_p(m: Method, p: int) -> Coefficient:
    """Plain power sum sum_i alpha_i a_i^p, p = 1..5."""
    if not 1 <= p <= 5:
        raise ValueError(f"p must be in 1..5, got {p}")
    return sum(u.alpha * u.a**p for u in m.units)


def sigma_pq(m: Method, pq: str) -> Coefficient:
    if str(pq) not in _PQ_LABELS:
        raise ValueError(f"pq must be one of {sorted(_PQ_LABELS)}, got {pq!r}")
    return sigma_from_units(m.units)[str(pq)]


def sigma_ppq(m: Method, ppq: str) -> Coefficient:
    if str(ppq) not in _PPQ_LABELS:
        raise ValueError(f"ppq must be one of {sorted(_PPQ_LABELS)}, got {ppq!r}")
    return sigma_from_units(m.units)[str(ppq)]


def sigma_1112(m: Method) -> Coefficient:
    return sigma_from_units(m.units)["1112"]


def _zero_thresholds(m: Method, tol: float) -> dict[str, float]:
    """Per-label zero thresholds: exact methods use 0, floats tol * L^order."""
    if m.exact:
        return {label: 0 for label in SIGMA_LABELS}
    L = float(m.weight)
    return {label: tol * L ** label_order(label) for label in SIGMA_LABELS}


def order_of(m: Method, tol: float = DEFAULT_TOL) -> OrderReport:
    """Achieved order of m for its target.

    Order o is achieved when every sigma^X with order(X) <= o lies within
    the zero threshold, excepting sigma^1 (SUM, required positive) or
    sigma^2 (COMMUTATOR, required nonzero; its sign becomes ``direction``).
    Order 0 is reported when the base condition already fails.
    """
    sig = sigma_vector(m)
    thresh = _zero_thresholds(m, tol)

    def is_zero(label: str) -> bool:
        return abs(sig[label]) <= thresh[label]

    direction = 1
    if m.target is Target.SUM:
        kept = "1"
        if not sig["1"] > thresh["1"]:
            return OrderReport(m.target, 0, ("1",))
    else:
        kept = "2"
        if not is_zero("1"):
            return OrderReport(m.target, 0, ("1",))
        if is_zero("2"):
            return OrderReport(m.target, 0, ("2",))
        if sig["2"] < 0:
            direction = -1

    achieved = 1 if m.target is Target.SUM else 2
    while achieved < MAX_ORDER:
        next_labels = [
            lab
            for lab in SIGMA_LABELS
            if label_order(lab) == achieved + 1 and lab != kept
        ]
        bad = tuple(lab for lab in next_labels if not is_zero(lab))
        if bad:
            return OrderReport(m.target, achieved, bad, direction)
        achieved += 1
    return OrderReport(m.target, MAX_ORDER, (), direction)
