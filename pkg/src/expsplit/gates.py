"""Product formulas approximating the commutator gate exp([A_1, A_2]).

A commutator method has sigma^2 != 0 with every other sigma^X vanishing
through its order; it is useful when hardware exposes exp(A) and exp(B) but
an algorithm needs a gate generated by their commutator.  Such methods carry
meaning only for two operator factors.
"""

from __future__ import annotations

from .notation import Method, Target, concat, parse_method, scale
from .sigma import OrderReport, order_of

__all__ = [
    "COMMUTATOR_4_NOTATION",
    "commutator_method_4",
    "commutator_method_5",
    "verify_commutator",
]

COMMUTATOR_4_NOTATION = "(-2)^T(2)^T[(-1)(1)]^{12}[(1)(-1)]^4"


def commutator_method_4() -> Method:
    """34-unit 4th-order approximation of exp(12 [A_1, A_2]); sigma^2 = 24."""
    return parse_method(COMMUTATOR_4_NOTATION, target=Target.COMMUTATOR)


def commutator_method_5() -> Method:
    """5th-order commutator method: the 4th-order method doubled.

    The second copy has every coefficient negated, which keeps sigma^2
    positive (it doubles to 48) while flipping the sign of all 5th-order
    residuals, so the leading errors of the two halves cancel.
    """
    m4 = commutator_method_4()
    return concat(m4, scale(m4, -1))


def verify_commutator(m: Method) -> OrderReport:
    """Achieved order of m against the COMMUTATOR target.

    sigma^2 < 0 is not an error: the report's direction flag marks the
    method as realising the reversed commutator (the transposed gate).
    """
    if m.target is not Target.COMMUTATOR:
        m = Method(m.units, Target.COMMUTATOR)
    return order_of(m)
