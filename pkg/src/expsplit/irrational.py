"""Closed-form irrational methods and a damped Newton solver.

The shortest 3rd-order method has four units with signs (+, -, -, +) and a
closed form built from sqrt(13); the shortest symmetric 4th-order methods
have six units with the mirror structure alpha_{I-i+1} = -alpha_i,
a_{I-i+1} = -a_i, parametrised by the coefficient ratio x = a_2/a_1 which
satisfies a fixed polynomial per sign variant.  Coefficients are evaluated
with mpmath at configurable precision and handed out as the requested float
type (double precision by default).

For everything else there is a damped Gauss-Newton iteration on the order
conditions with complex-step derivatives (the conditions are polynomial in
the coefficients, so complex-step gives machine-accurate Jacobians).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import mpmath as mp
import numpy as np

from .catalog import (
    R3_1_COEFFICIENTS,
    R4_COEFFICIENTS,
    R4_POLYNOMIALS,
    R4_SIGNS,
)
from .notation import Method, Target, Unit
from .sigma import sigma_from_units

__all__ = [
    "r3_shortest",
    "r4_symmetric",
    "newton_solve",
    "NoConvergenceError",
    "SingularJacobianError",
    "symmetric_ansatz_residuals",
]

_WORK_DPS = 45  # enough head room above the 27 published decimals


@dataclass(frozen=True)
class _Pair:
    alpha: int
    a: object


def _to_method(alphas, avals, decimal_type, target=Target.SUM) -> Method:
    units = tuple(
        Unit(alpha, decimal_type(a)) for alpha, a in zip(alphas, avals)
    )
    return Method(units, target)


def _as_decimal(value, decimal_type):
    if decimal_type is float:
        return float(value)
    return decimal_type(mp.nstr(value, mp.mp.dps))


def r3_shortest(*, decimal_type=float, dps: int = _WORK_DPS) -> Method:
    """The unique shortest 3rd-order method, (a1)(-a2)^T(-a3)^T(a4).

    Built from the closed form
        a2 = -(5 - sqrt(13) + 2 sqrt(5 + 2 sqrt(13))) / 6,
        a3 = 1 / (1 + a2),
        a4 = -a2 (1 + a2) / (3 + 2 a2),
    with a1 = 1, then renormalised so the time advance is exactly 1.
    """
    with mp.workdps(dps):
        a2 = -(5 - mp.sqrt(13) + 2 * mp.sqrt(5 + 2 * mp.sqrt(13))) / 6
        a1 = mp.mpf(1)
        a3 = 1 / (1 + a2)
        a4 = -a2 * (1 + a2) / (3 + 2 * a2)
        alphas = (1, -1, -1, 1)
        avals = [a1, a2, a3, a4]
        d = sum(al * a for al, a in zip(alphas, avals))
        avals = [a / d for a in avals]
        converted = [_as_decimal(a, decimal_type) for a in avals]
    return _to_method(alphas, converted, lambda x: x)


def _real_roots(coeffs: Sequence[int], dps: int) -> list:
    with mp.workdps(dps):
        roots = mp.polyroots([mp.mpf(c) for c in coeffs], maxsteps=200, extraprec=80)
        return [r.real for r in roots if abs(r.imag) < mp.mpf(10) ** (-dps + 10)]


def _real_cbrt(v):
    """Real cube root (mp.cbrt takes the complex principal branch)."""
    return mp.sign(v) * mp.cbrt(abs(v))


def r4_symmetric(variant: int, *, decimal_type=float, dps: int = _WORK_DPS) -> Method:
    """Symmetric 6-unit 4th-order method, variants 1..4.

    The half-method signs are (1, alpha_2, alpha_3); the coefficient ratio
    x = a_2/a_1 is -1 for variant 1 and otherwise the real root of the
    variant's polynomial that reproduces the bundled 27-digit coefficients
    (root matching to 1e-6 pins the branch).  Then
        y  = -alpha_3 (alpha_2 x^3 + 1)^(1/3),
        a1 = 1 / (2 (alpha_2 x + alpha_3 y + 1)),    a2 = x a1,  a3 = y a1,
    and the second half mirrors the first with both signs flipped.
    """
    if variant not in R4_SIGNS:
        raise ValueError(f"variant must be 1..4, got {variant}")
    alpha1, alpha2, alpha3 = R4_SIGNS[variant]
    printed_a1 = float(R4_COEFFICIENTS[variant][0])
    with mp.workdps(dps):
        if variant == 1:
            candidates = [mp.mpf(-1)]
        else:
            candidates = _real_roots(R4_POLYNOMIALS[variant], dps)
        chosen = None
        for x in candidates:
            y = -alpha3 * _real_cbrt(alpha2 * x**3 + 1)
            denom = 2 * (alpha2 * x + alpha3 * y + 1)
            if denom == 0:
                continue
            a1 = 1 / denom
            if abs(a1 - printed_a1) < 1e-6:
                chosen = (x, y, a1)
                break
        if chosen is None:
            raise ArithmeticError(
                f"no real root of the variant-{variant} polynomial reproduces "
                "the bundled coefficients"
            )
        x, y, a1 = chosen
        half = [a1, x * a1, y * a1]
        alphas = (alpha1, alpha2, alpha3, -alpha3, -alpha2, -alpha1)
        avals = half + [-half[2], -half[1], -half[0]]
        converted = [_as_decimal(a, decimal_type) for a in avals]
    return _to_method(alphas, converted, lambda v: v)


def symmetric_ansatz_residuals(method: Method) -> tuple[float, float, float]:
    """The three reduced conditions of the 6-unit mirror construction.

    For half coefficients (alpha_i, a_i), i = 1..3:
        sum alpha_i a_i - 1/2,
        sum alpha_i a_i^3,
        sum [ a_i^3 + 2 alpha_i a_i^2 (S_3 - S_i) ],   S_i = partial sums.
    All three vanish on a valid symmetric 4th-order method.
    """
    if len(method.units) != 6:
        raise ValueError("the symmetric construction has six units")
    half = method.units[:3]
    s = [0.0]
    for u in half:
        s.append(s[-1] + u.alpha * float(u.a))
    r1 = s[3] - 0.5
    r2 = sum(u.alpha * float(u.a) ** 3 for u in half)
    r3 = sum(
        float(u.a) ** 3 + 2 * u.alpha * float(u.a) ** 2 * (s[3] - s[i + 1])
        for i, u in enumerate(half)
    )
    return (r1, r2, r3)


class NoConvergenceError(RuntimeError):
    """Newton iteration exhausted its budget; carries the final residual."""

    def __init__(self, residual: float, iterations: int):
        self.residual = residual
        self.iterations = iterations
        super().__init__(
            f"no convergence after {iterations} iterations "
            f"(residual {residual:.3e})"
        )


class SingularJacobianError(RuntimeError):
    pass


_ORDER_CONDITION_LABELS = {
    3: ("2", "3", "12"),
    4: ("2", "3", "12", "4", "13", "112"),
    5: ("2", "3", "12", "4", "13", "112", "5", "14", "23", "113", "221", "1112"),
}


def _conditions(alphas, avals, target_order) -> np.ndarray:
    units = [_Pair(al, a) for al, a in zip(alphas, avals)]
    sig = sigma_from_units(units)
    rows = [sig["1"] - 1]
    rows += [sig[lab] for lab in _ORDER_CONDITION_LABELS[target_order]]
    return np.asarray(rows, dtype=complex)


def newton_solve(
    I: int,
    sign_pattern: Sequence[int],
    initial: Sequence[float],
    target_order: int,
    *,
    tol: float = 1e-13,
    max_iter: int = 200,
    max_halvings: int = 60,
) -> Method:
    """Damped (Gauss-)Newton on the order conditions with sigma^1 = 1.

    The step solves the linearised system (least squares when the system is
    not square) and is halved until the residual norm decreases.  Raises
    NoConvergenceError with the final residual when the budget runs out and
    SingularJacobianError when a square Jacobian cannot be factorised.
    """
    if target_order not in _ORDER_CONDITION_LABELS:
        raise ValueError("target_order must be 3, 4 or 5")
    alphas = tuple(int(s) for s in sign_pattern)
    if len(alphas) != I or any(s not in (1, -1) for s in alphas):
        raise ValueError("sign_pattern must be I entries of +-1")
    x = np.asarray(initial, dtype=float).copy()
    if x.shape != (I,):
        raise ValueError(f"initial guess must have length {I}")
    n_cond = 1 + len(_ORDER_CONDITION_LABELS[target_order])

    def residual(vec: np.ndarray) -> np.ndarray:
        return _conditions(alphas, vec.astype(complex), target_order).real

    def jacobian(vec: np.ndarray) -> np.ndarray:
        h = 1e-20
        J = np.empty((n_cond, I))
        for j in range(I):
            pert = vec.astype(complex)
            pert[j] += 1j * h
            J[:, j] = _conditions(alphas, pert, target_order).imag / h
        return J

    F = residual(x)
    norm = np.linalg.norm(F)
    for iteration in range(max_iter):
        if norm < tol:
            units = tuple(Unit(al, float(a)) for al, a in zip(alphas, x))
            return Method(units, Target.SUM)
        J = jacobian(x)
        if n_cond == I:
            try:
                step = np.linalg.solve(J, -F)
            except np.linalg.LinAlgError as exc:
                raise SingularJacobianError(str(exc)) from exc
        else:
            step, *_ = np.linalg.lstsq(J, -F, rcond=None)
        lam = 1.0
        improved = False
        for _ in range(max_halvings):
            trial = x + lam * step
            if np.any(trial == 0):  # coefficients must stay nonzero
                lam *= 0.5
                continue
            F_trial = residual(trial)
            norm_trial = np.linalg.norm(F_trial)
            if norm_trial < norm:
                x, F, norm = trial, F_trial, norm_trial
                improved = True
                break
            lam *= 0.5
        if not improved:
            raise NoConvergenceError(norm, iteration + 1)
    if norm < tol:
        units = tuple(Unit(al, float(a)) for al, a in zip(alphas, x))
        return Method(units, Target.SUM)
    raise NoConvergenceError(norm, max_iter)
