"""Splitting methods and their compact product notation.

A *method* is an ordered product of fundamental units.  Each unit is one
signed, uniformly scaled pass over all operator factors,

    (e^{a A_1} e^{a A_2} ... e^{a A_N})^alpha,      alpha in {+1, -1},

written ``(c)`` for alpha = +1 and ``(c)^T`` for alpha = -1, where the
displayed label is c = alpha * a.  The number of factors N is not part of a
method: the order analysis is independent of it, and N only binds when a
method is applied to a concrete operator set.

Methods are immutable value objects and safe to share between threads.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence, Union

__all__ = [
    "Coefficient",
    "Target",
    "Unit",
    "Method",
    "NotationError",
    "parse_method",
    "format_method",
    "transpose",
    "concat",
    "scale",
    "power",
    "method_to_json",
    "method_from_json",
]

# Exact rationals carry integer methods; floats (or mpmath floats, which obey
# the same arithmetic protocol) carry irrational ones.
Coefficient = Union[Fraction, float]


class Target(Enum):
    """What the product is meant to approximate: exp(sum A_n) or exp([A_1, A_2])."""

    SUM = "sum"
    COMMUTATOR = "commutator"


class NotationError(ValueError):
    """Raised for malformed method notation; carries the offending position."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


@dataclass(frozen=True)
class Unit:
    """One fundamental unit: sign alpha and nonzero coefficient a.

    The displayed label is c = alpha * a; the ^T flag in notation marks
    alpha = -1.
    """

    alpha: int
    a: Coefficient

    def __post_init__(self):
        if self.alpha not in (1, -1):
            raise ValueError(f"alpha must be +1 or -1, got {self.alpha!r}")
        if self.a == 0:
            raise ValueError("unit coefficient must be nonzero")

    @property
    def label(self) -> Coefficient:
        return self.alpha * self.a

    @property
    def inverted(self) -> bool:
        return self.alpha == -1


@dataclass(frozen=True)
class Method:
    """Ordered sequence of units plus the approximation target."""

    units: tuple[Unit, ...]
    target: Target = Target.SUM

    def __post_init__(self):
        if not self.units:
            raise ValueError("a method needs at least one unit")
        object.__setattr__(self, "units", tuple(self.units))

    def __len__(self) -> int:
        return len(self.units)

    @property
    def exact(self) -> bool:
        """True when every coefficient is an exact rational."""
        return all(isinstance(u.a, (Fraction, int)) for u in self.units)

    @property
    def unit_count(self) -> int:
        return len(self.units)

    @property
    def weight(self) -> Coefficient:
        """Total gate-application weight, the sum of |a_i|."""
        return sum(abs(u.a) for u in self.units)

    def __str__(self) -> str:
        return format_method(self)


# --- parsing -----------------------------------------------------------------
#
# Grammar (whitespace ignored):
#   method := term+
#   term   := "(" number ")" ["^T"] | open term+ close "^" exponent
#   open   := "[" | "{"        close := "]" | "}"
#   exponent := int | "{" int "}"
#   number := signed integer | "p/q" rational | decimal (with optional e-notation)
#
# Square/curly groups and brace-wrapped exponents are accepted on input only;
# the canonical form emitted by format_method is bracket-free.

_NUMBER_RE = re.compile(
    r"[+-]?(?:\d+/\d+|(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)"
)
_INT_RE = re.compile(r"\d+")

_OPEN = {"[": "]", "{": "}"}


def _parse_number(text: str, decimal_type) -> Coefficient:
    if "/" in text:
        return Fraction(text)
    if "." in text or "e" in text or "E" in text:
        return decimal_type(text)
    return Fraction(int(text))


def parse_method(
    text: str,
    target: Target = Target.SUM,
    *,
    decimal_type=float,
) -> Method:
    """Parse compact notation into a Method.

    Integer and ``p/q`` literals become exact rationals; literals with a
    decimal point or exponent become ``decimal_type`` (float by default, an
    mpmath type for extended precision).  Bracketed groups raised to a power
    expand to concatenated repetition.
    """
    units: list[Unit] = []
    pos = 0
    n = len(text)

    def skip_ws(p: int) -> int:
        while p < n and text[p].isspace():
            p += 1
        return p

    def parse_terms(p: int, closer: str | None) -> tuple[list[Unit], int]:
        out: list[Unit] = []
        p = skip_ws(p)
        while p < n:
            c = text[p]
            if closer is not None and c == closer:
                return out, p
            if c == "(":
                m = _NUMBER_RE.match(text, skip_ws(p + 1))
                if not m:
                    raise NotationError("expected a number after '('", p + 1)
                q = skip_ws(m.end())
                if q >= n or text[q] != ")":
                    raise NotationError("expected ')'", q)
                q += 1
                transposed = False
                r = skip_ws(q)
                if text.startswith("^T", r):
                    transposed = True
                    q = r + 2
                label = _parse_number(m.group(), decimal_type)
                if label == 0:
                    raise NotationError("zero coefficient", m.start())
                if transposed:
                    out.append(Unit(alpha=-1, a=-label))
                else:
                    out.append(Unit(alpha=+1, a=label))
                p = skip_ws(q)
            elif c in _OPEN:
                inner, q = parse_terms(p + 1, _OPEN[c])
                if not inner:
                    raise NotationError("empty group", p)
                q = skip_ws(q + 1)
                if q >= n or text[q] != "^":
                    raise NotationError("expected '^' after group", q)
                q = skip_ws(q + 1)
                braced = q < n and text[q] == "{"
                if braced:
                    q = skip_ws(q + 1)
                m = _INT_RE.match(text, q)
                if not m:
                    raise NotationError("expected an integer exponent", q)
                q = m.end()
                if braced:
                    q = skip_ws(q)
                    if q >= n or text[q] != "}":
                        raise NotationError("expected '}'", q)
                    q += 1
                k = int(m.group())
                if k < 1:
                    raise NotationError("group exponent must be >= 1", q)
                out.extend(inner * k)
                p = skip_ws(q)
            else:
                raise NotationError(f"unexpected character {c!r}", p)
        if closer is not None:
            raise NotationError(f"missing closing {closer!r}", n)
        return out, p

    units, _ = parse_terms(0, None)
    if not units:
        raise NotationError("empty method", 0)
    return Method(tuple(units), target)


def _format_coefficient(c: Coefficient) -> str:
    if isinstance(c, Fraction):
        return str(c)  # "5", "-2", "3/2"
    if isinstance(c, float):
        return repr(c)  # shortest round-tripping decimal
    return str(c)  # mpmath and friends


def format_method(m: Method) -> str:
    """Canonical bracket-free notation; parse(format(m)) == m."""
    parts = []
    for u in m.units:
        s = f"({_format_coefficient(u.label)})"
        if u.inverted:
            s += "^T"
        parts.append(s)
    return "".join(parts)


# --- structural transforms ---------------------------------------------------


def transpose(m: Method) -> Method:
    """Reverse the unit order and negate both alpha and a of every unit.

    Displayed labels are preserved with the ^T flag toggled; the transposed
    product equals the original run backwards in time, so it is an equivalent
    method of the same order.
    """
    return Method(
        tuple(Unit(-u.alpha, -u.a) for u in reversed(m.units)),
        m.target,
    )


def concat(m1: Method, m2: Method) -> Method:
    if m1.target is not m2.target:
        raise ValueError("cannot concatenate methods with different targets")
    return Method(m1.units + m2.units, m1.target)


def scale(m: Method, lam: Coefficient) -> Method:
    """Multiply every coefficient by lam (lam != 0); signs alpha are kept."""
    if lam == 0:
        raise ValueError("scale factor must be nonzero")
    return Method(tuple(Unit(u.alpha, u.a * lam) for u in m.units), m.target)


def power(m: Method, k: int) -> Method:
    """k-fold concatenation of m with itself."""
    if k < 1:
        raise ValueError("power must be a positive integer")
    return Method(m.units * k, m.target)


def is_self_transpose(m: Method) -> bool:
    return m.units == transpose(m).units


# --- JSON export -------------------------------------------------------------


def method_to_json(m: Method) -> list[dict]:
    """Units as a list of {"alpha": +-1, "a": string-rational-or-decimal}."""
    return [{"alpha": u.alpha, "a": _format_coefficient(u.a)} for u in m.units]


def method_from_json(
    data: Iterable[dict] | str,
    target: Target = Target.SUM,
    *,
    decimal_type=float,
) -> Method:
    if isinstance(data, str):
        data = json.loads(data)
    units = []
    for entry in data:
        a = _parse_number(str(entry["a"]), decimal_type)
        units.append(Unit(int(entry["alpha"]), a))
    return Method(tuple(units), target)
