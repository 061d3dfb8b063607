"""Building higher-order methods out of lower-order ones.

Two constructions:

* transpose doubling: an odd-order method followed by its transpose cancels
  the leading error (whose commutator words flip sign under transposition)
  and gains one order;
* block composition: a method of order o, rescaled by b_j and optionally
  inverted (beta_j = -1), concatenated over a schedule satisfying
  sum_j beta_j b_j > 0 and sum_j beta_j b_j^{o+1} = 0, gains at least one
  order.  A palindromic schedule over a self-transpose base keeps the result
  self-transpose, which kills all even-order residuals on top.

Iterating the default schedule (2^{o+1} unit blocks plus one block of -2,
palindromically ordered) raises a 2nd-order base to arbitrarily high even
order; the constructions are simple but deliberately non-optimal in gate
count.
"""

from __future__ import annotations

import warnings
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .notation import Coefficient, Method, concat, is_self_transpose, scale, transpose
from .sigma import MAX_ORDER, order_of

__all__ = [
    "ScheduleEntry",
    "double_to_even",
    "raise_order",
    "make_palindromic",
    "default_doubling_schedule",
    "auto_compose",
]

ScheduleEntry = tuple[int, Union[Fraction, int]]


def double_to_even(m: Method) -> Method:
    """m followed by transpose(m); for odd-order m the order rises by one."""
    rep = order_of(m)
    if rep.achieved_order % 2 == 0:
        warnings.warn(
            f"double_to_even expects an odd-order method, got order "
            f"{rep.achieved_order}; composing anyway",
            stacklevel=2,
        )
    return concat(m, transpose(m))


def _normalize_schedule(
    schedule: Iterable[Union[ScheduleEntry, int, Fraction]],
) -> list[ScheduleEntry]:
    out: list[ScheduleEntry] = []
    for entry in schedule:
        if isinstance(entry, tuple):
            beta, b = entry
        else:
            beta, b = 1, entry
        if beta not in (1, -1):
            raise ValueError(f"beta must be +1 or -1, got {beta!r}")
        b = Fraction(b)
        if b == 0:
            raise ValueError("schedule coefficients must be nonzero")
        out.append((beta, b))
    return out


def raise_order(m: Method, schedule: Iterable) -> Method:
    """Concatenate rescaled (and, for beta = -1, inverted) copies of m.

    The schedule is validated in exact rational arithmetic against the two
    composition conditions for the achieved order o of m.  A beta = -1 block
    is the inverse of the scaled block, i.e. the transpose of the block
    scaled by -b.
    """
    entries = _normalize_schedule(schedule)
    o = order_of(m).achieved_order
    if o < 1:
        raise ValueError("base method must have order >= 1")
    s1 = sum(beta * b for beta, b in entries)
    sk = sum(beta * b ** (o + 1) for beta, b in entries)
    if not s1 > 0:
        raise ValueError(f"schedule violates sum(beta*b) > 0 (got {s1})")
    if sk != 0:
        raise ValueError(
            f"schedule violates sum(beta*b^{o + 1}) = 0 (got {sk})"
        )
    blocks = []
    for beta, b in entries:
        if beta == 1:
            blocks.append(scale(m, _coerce(b, m)))
        else:
            blocks.append(transpose(scale(m, _coerce(-b, m))))
    out = blocks[0]
    for block in blocks[1:]:
        out = concat(out, block)
    return out


def _coerce(b: Fraction, m: Method) -> Coefficient:
    """Keep exact methods exact; match float coefficients otherwise."""
    return b if m.exact else float(b)


def make_palindromic(schedule: Iterable) -> list[ScheduleEntry]:
    """Order a schedule multiset so the composed method is its own transpose.

    Requires at most one entry of odd multiplicity (it becomes the centre).
    The ordering is deterministic: paired entries are sorted and mirrored.
    """
    entries = _normalize_schedule(schedule)
    counts: dict[ScheduleEntry, int] = {}
    for e in entries:
        counts[e] = counts.get(e, 0) + 1
    centre = [e for e, c in counts.items() if c % 2 == 1]
    if len(centre) > 1:
        raise ValueError(
            f"no palindromic arrangement: {len(centre)} entries with odd "
            "multiplicity"
        )
    half: list[ScheduleEntry] = []
    for e in sorted(counts, key=lambda t: (t[1], t[0])):
        half.extend([e] * (counts[e] // 2))
    middle = centre if centre else []
    return half + middle + half[::-1]


def default_doubling_schedule(o: int) -> list[ScheduleEntry]:
    """2^{o+1} blocks of b = 1 plus one block of b = -2, palindromic.

    Solves the composition conditions for odd target order o + 1 since
    2^{o+1} = 1^{o+1} * 2^{o+1}.
    """
    if o < 1:
        raise ValueError("order must be >= 1")
    ones = [(1, Fraction(1))] * (2 ** (o + 1))
    return make_palindromic(ones + [(1, Fraction(-2))])


def auto_compose(m: Method, target_order: int) -> Method:
    """Iterate default-schedule composition until target_order is achieved.

    With a self-transpose even-order base each round gains two orders (one
    from the schedule, one from palindromic symmetry).  Above the analysis
    ceiling the claim rests on that parity argument, so target orders beyond
    MAX_ORDER + 1 are refused.
    """
    if target_order > MAX_ORDER + 1:
        raise ValueError(
            f"cannot certify orders beyond {MAX_ORDER + 1} "
            f"(analysis stops at {MAX_ORDER})"
        )
    current = m
    o = order_of(current).achieved_order
    if o < 1:
        raise ValueError("base method must have order >= 1")
    while o < target_order:
        current = raise_order(current, default_doubling_schedule(o))
        new_rep = order_of(current)
        new_o = new_rep.achieved_order
        if new_o == MAX_ORDER and is_self_transpose(current):
            # orders 2..MAX_ORDER vanish and self-transposition kills the
            # next even order, certifying MAX_ORDER + 1
            new_o = MAX_ORDER + 1
        if new_o <= o:
            raise RuntimeError(
                f"composition failed to raise the order ({o} -> {new_o})"
            )
        o = new_o
    return current
