"""Residual error metrics and the selection cost model.

The leading error of a method lives in the vector space spanned by nested
commutators.  Lacking a natural metric there, the two-operator basis of
right-nested commutator words

    A_Y = [A_k, [A_l, ... [A_m, A_n] ...]],   Y a string over {1, 2},

is adopted: the basis elements B^X are expanded over the A_Y (B2_TABLE), the
sigma coefficients contract to residuals rho_Y, and the scalar error is
R = sqrt(sum_Y rho_Y^2) over the words one order above the method order.

Selection metrics: D = sigma^1 is the time advance per application, L the
total gate weight, I the unit count, and Z = (I/D) (R/D)^{1/o} the figure of
merit when gate switching dominates the runtime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

from .notation import Coefficient, Method, Target
from .sigma import OrderReport, SigmaVector, order_of, sigma_vector

__all__ = [
    "B2_TABLE",
    "RHO_WORDS",
    "RESIDUAL_WORDS_BY_ORDER",
    "RhoVector",
    "MethodReport",
    "CostModel",
    "Regime",
    "ComputerTime",
    "rho_vector",
    "rho_from_contraction",
    "scalar_R",
    "report",
    "computer_time",
]

_F = Fraction

# Expansion of each basis element B^X over nested-commutator words A_Y for
# two operators.  Fixed exact data; rho_from_contraction cross-checks the
# closed formulas in rho_vector against it.
B2_TABLE: dict[str, dict[str, Fraction]] = {
    "1": {"1": _F(1), "2": _F(1)},
    "2": {"12": _F(1, 2)},
    "3": {"112": _F(1, 12), "221": _F(1, 12)},
    "12": {"112": _F(1, 2), "221": _F(-1, 2)},
    "4": {"1221": _F(1, 24)},
    "13": {"1112": _F(1, 12), "2221": _F(1, 12)},
    "112": {"1112": _F(1, 2), "2221": _F(-1, 2), "1221": _F(-1)},
    "5": {
        "11112": _F(-1, 720),
        "21112": _F(1, 360),
        "11221": _F(1, 120),
        "22112": _F(1, 120),
        "12221": _F(1, 360),
        "22221": _F(-1, 720),
    },
    "14": {"11221": _F(1, 24), "22112": _F(-1, 24)},
    "23": {
        "21112": _F(-1, 24),
        "11221": _F(-1, 24),
        "22112": _F(1, 24),
        "12221": _F(1, 24),
    },
    "113": {
        "11112": _F(1, 12),
        "21112": _F(1, 12),
        "12221": _F(1, 12),
        "22221": _F(1, 12),
    },
    "221": {
        "21112": _F(1, 4),
        "11221": _F(1, 4),
        "22112": _F(1, 4),
        "12221": _F(1, 4),
    },
    "1112": {
        "11112": _F(1, 2),
        "21112": _F(1, 2),
        "11221": _F(-1),
        "22112": _F(1),
        "12221": _F(-1, 2),
        "22221": _F(-1, 2),
    },
}

RHO_WORDS = (
    "1",
    "2",
    "12",
    "112",
    "221",
    "1112",
    "1221",
    "2221",
    "11112",
    "21112",
    "11221",
    "22112",
    "12221",
    "22221",
)

# Residual word set used by R for a method of order o: the words one order
# above.  The sets for orders 1 and 2 extend the orders 3-4 convention.
RESIDUAL_WORDS_BY_ORDER: dict[int, tuple[str, ...]] = {
    1: ("12",),
    2: ("112", "221", "1221"),
    3: ("1112", "1221", "2221"),
    4: ("11112", "21112", "11221", "22112", "12221", "22221"),
}


@dataclass(frozen=True)
class RhoVector:
    """Residual coefficients over the two-operator commutator words."""

    entries: dict

    def __getitem__(self, word: str) -> Coefficient:
        return self.entries[word]

    def to_json(self) -> dict:
        return {
            w: (str(v) if isinstance(v, Fraction) else float(v))
            for w, v in self.entries.items()
        }


def rho_vector(s: SigmaVector) -> RhoVector:
    """All fourteen rho_Y from the sigma coefficients (closed formulas)."""
    g = s.entries
    rho = {
        "1": g["1"],
        "2": g["1"],
        "12": g["2"] / 2,
        "112": g["3"] / 12 + g["12"] / 2,
        "221": g["3"] / 12 - g["12"] / 2,
        "1112": g["13"] / 12 + g["112"] / 2,
        "1221": g["4"] / 24 - g["112"],
        "2221": g["13"] / 12 - g["112"] / 2,
        "11112": -g["5"] / 720 + g["113"] / 12 + g["1112"] / 2,
        "21112": g["5"] / 360 - g["23"] / 24 + g["113"] / 12 + g["221"] / 4
        + g["1112"] / 2,
        "11221": g["5"] / 120 + g["14"] / 24 - g["23"] / 24 + g["221"] / 4
        - g["1112"],
        "22112": g["5"] / 120 - g["14"] / 24 + g["23"] / 24 + g["221"] / 4
        + g["1112"],
        "12221": g["5"] / 360 + g["23"] / 24 + g["113"] / 12 + g["221"] / 4
        - g["1112"] / 2,
        "22221": -g["5"] / 720 + g["113"] / 12 - g["1112"] / 2,
    }
    return RhoVector(rho)


def rho_from_contraction(s: SigmaVector) -> RhoVector:
    """rho_Y by contracting sigma^X against B2_TABLE; oracle for rho_vector."""
    rho = {w: 0 for w in RHO_WORDS}
    for label, row in B2_TABLE.items():
        sx = s.entries[label]
        for word, coeff in row.items():
            rho[word] = rho[word] + coeff * sx
    return RhoVector(rho)


def scalar_R(rho: RhoVector, order: int) -> float:
    """Scalar residual: root sum of squares over the next-order word set."""
    try:
        words = RESIDUAL_WORDS_BY_ORDER[order]
    except KeyError:
        raise ValueError(f"unsupported order {order}; scalar R covers 1..4")
    return math.sqrt(sum(float(rho[w]) ** 2 for w in words))


@dataclass(frozen=True)
class MethodReport:
    """Selection metrics of one method.

    D is sigma^1 for SUM targets and sigma^2 for COMMUTATOR targets; Z is
    defined only for SUM methods of order >= 1 and only while the scalar R
    is available (order <= 4).
    """

    D: Coefficient
    L: Coefficient
    I: int
    R: Optional[float]
    l_over_d: float
    r_over_d: Optional[float]
    Z: Optional[float]
    order: OrderReport

    def to_json(self) -> dict:
        return {
            "D": str(self.D) if isinstance(self.D, Fraction) else float(self.D),
            "L": str(self.L) if isinstance(self.L, Fraction) else float(self.L),
            "I": self.I,
            "R": self.R,
            "L/D": self.l_over_d,
            "R/D": self.r_over_d,
            "Z": self.Z,
            "order": self.order.achieved_order,
            "target": self.order.target.value,
        }


def report(m: Method, tol: float = None) -> MethodReport:
    """Full metric report; requires D > 0 for the method's target."""
    kwargs = {} if tol is None else {"tol": tol}
    order = order_of(m, **kwargs)
    sig = sigma_vector(m)
    D = sig["1"] if m.target is Target.SUM else sig["2"]
    if not D > 0:
        raise ValueError(f"method has nonpositive D = {D}")
    L = m.weight
    I = m.unit_count
    o = order.achieved_order
    rho = rho_vector(sig)
    R = scalar_R(rho, o) if o in RESIDUAL_WORDS_BY_ORDER else None
    r_over_d = None if R is None else R / float(D)
    Z = None
    if m.target is Target.SUM and o >= 1 and r_over_d is not None:
        Z = (I / float(D)) * r_over_d ** (1.0 / o)
    return MethodReport(
        D=D,
        L=L,
        I=I,
        R=R,
        l_over_d=float(L) / float(D),
        r_over_d=r_over_d,
        Z=Z,
        order=order,
    )


class Regime(Enum):
    SWITCH_DOMINATED = "switch-dominated"
    APPLICATION_DOMINATED = "application-dominated"


@dataclass(frozen=True)
class CostModel:
    """Hardware cost parameters: all positive where supplied.

    t_g is the gate-switch time in seconds, b the coupling proportionality
    between timestep and physical gate duration, T_p the physical time to
    simulate, E the error budget, and epsilon an optional lower limit on the
    timestep.
    """

    t_g: float
    b: float
    T_p: float
    E: float
    epsilon: Optional[float] = None

    def __post_init__(self):
        for name in ("t_g", "b", "T_p", "E"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.epsilon is not None and self.epsilon <= 0:
            raise ValueError("epsilon must be positive when supplied")


@dataclass(frozen=True)
class ComputerTime:
    T_c: float
    regime: Regime
    dt_implied: float


def computer_time(rep: MethodReport, cm: CostModel, N: int) -> ComputerTime:
    """Total computer time for N operator factors under the cost model.

    T_c = [ (T_p^{o+1}/E)^{1/o} (I/D)(R/D)^{1/o} t_g + L b T_p / D ] N.

    The error budget implies a timestep; when that falls below the hardware
    floor epsilon the run is application-dominated and gate weight L/D is
    what matters, otherwise switching dominates and Z does.
    """
    if not float(rep.D) > 0:
        raise ValueError("cost model requires D > 0")
    if cm.E <= 0:
        raise ValueError("error budget E must be positive")
    o = rep.order.achieved_order
    if o < 1 or rep.R is None:
        raise ValueError("cost model requires an order >= 1 method with known R")
    D = float(rep.D)
    L = float(rep.L)
    switch = (
        (cm.T_p ** (o + 1) / cm.E) ** (1.0 / o)
        * (rep.I / D)
        * (rep.R / D) ** (1.0 / o)
        * cm.t_g
    )
    apply_part = L * cm.b * cm.T_p / D
    T_c = (switch + apply_part) * N
    # E = n R dt^{o+1} with T_p = n D dt gives dt = (E D / (T_p R))^{1/o}.
    if rep.R > 0:
        dt_implied = (cm.E * D / (cm.T_p * rep.R)) ** (1.0 / o)
    else:
        dt_implied = math.inf
    regime = Regime.SWITCH_DOMINATED
    if cm.epsilon is not None and dt_implied < cm.epsilon:
        regime = Regime.APPLICATION_DOMINATED
    return ComputerTime(T_c=T_c, regime=regime, dt_implied=dt_implied)
