"""Apply splitting methods to concrete Hermitian operator sets.

A method acts on N Hermitian terms H_1..H_N with timestep dt: a unit
(alpha = +1, a) contributes exp(-i a H_1 dt) ... exp(-i a H_N dt) and an
inverted unit the inverse product.  One application advances physical time
by D dt where D is the method's time advance, so comparisons against the
exact evolution exp(-i (sum H_n) t) are made at t = n D dt.

Single-term exponentials go through cached Hermitian eigendecompositions;
every produced matrix is unitary to 1e-10.  All evaluations are pure
functions of (method, operator set, dt, n) and may run concurrently; the
caches are only ever extended, which is safe under concurrent reads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .notation import Method, transpose
from .residuals import report
from .sigma import order_of, sigma_p

__all__ = [
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "OperatorSet",
    "EvolutionResult",
    "apply_method",
    "exact_evolution",
    "pauli_error",
    "frobenius_error",
    "evolve",
    "scaling_experiment",
    "order_slope",
    "fit_loglog_slope",
    "build_pauli_set",
    "build_ising_nnn",
]

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_PAULI = (PAULI_X, PAULI_Y, PAULI_Z)

HERMITICITY_TOL = 1e-12
UNITARITY_TOL = 1e-10


class OperatorSet:
    """N Hermitian terms of one Hamiltonian, with cached eigensystems."""

    def __init__(self, terms: Sequence[np.ndarray]):
        if not terms:
            raise ValueError("need at least one term")
        terms = [np.asarray(t, dtype=complex) for t in terms]
        dim = terms[0].shape[0]
        for t in terms:
            if t.shape != (dim, dim):
                raise ValueError("all terms must be square with equal dimension")
            if np.max(np.abs(t - t.conj().T)) > HERMITICITY_TOL:
                raise ValueError("terms must be Hermitian to 1e-12")
        self.dim = dim
        self.terms = tuple(t.copy() for t in terms)
        for t in self.terms:
            t.setflags(write=False)
        self._eigs = [np.linalg.eigh(t) for t in self.terms]
        self._total = sum(self.terms)
        self._total_eig = np.linalg.eigh(self._total)
        self._factor_cache: dict[tuple[int, float], np.ndarray] = {}

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    @property
    def total(self) -> np.ndarray:
        return self._total

    def term_exponential(self, index: int, coeff: float) -> np.ndarray:
        """exp(-i coeff H_index), cached per (index, coeff)."""
        key = (index, float(coeff))
        cached = self._factor_cache.get(key)
        if cached is not None:
            return cached
        w, v = self._eigs[index]
        mat = (v * np.exp(-1j * coeff * w)) @ v.conj().T
        self._factor_cache[key] = mat
        return mat


def _unit_matrix(ops: OperatorSet, a: float, alpha: int, dt: float) -> np.ndarray:
    out = np.eye(ops.dim, dtype=complex)
    for n in range(ops.n_terms):
        out = out @ ops.term_exponential(n, a * dt)
    if alpha == -1:
        out = out.conj().T
    return out


def apply_method(m: Method, ops: OperatorSet, dt: float) -> np.ndarray:
    """One application of the method: the ordered product of unit factors."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    out = np.eye(ops.dim, dtype=complex)
    unit_cache: dict[tuple[int, float], np.ndarray] = {}
    for u in m.units:
        key = (u.alpha, float(u.a))
        mat = unit_cache.get(key)
        if mat is None:
            mat = _unit_matrix(ops, float(u.a), u.alpha, dt)
            unit_cache[key] = mat
        out = out @ mat
    if not np.all(np.isfinite(out)):
        raise ArithmeticError("method product produced non-finite entries")
    return out


def exact_evolution(ops: OperatorSet, t: float) -> np.ndarray:
    """exp(-i (sum H_n) t) via the Hermitian eigendecomposition."""
    w, v = ops._total_eig
    return (v * np.exp(-1j * t * w)) @ v.conj().T


def _check_unitary(u: np.ndarray) -> None:
    defect = np.linalg.norm(u @ u.conj().T - np.eye(u.shape[0]), "fro")
    if defect > UNITARITY_TOL:
        raise ArithmeticError(f"matrix not unitary: defect {defect:.2e}")


def pauli_components(u: np.ndarray) -> np.ndarray:
    """Projections (i/2) tr(sigma_k U), k = x, y, z, of a 2x2 matrix."""
    if u.shape != (2, 2):
        raise ValueError("pauli components require a 2x2 matrix")
    return np.array([0.5j * np.trace(p @ u) for p in _PAULI])


def pauli_error(u_approx: np.ndarray, u_exact: np.ndarray) -> float:
    """Root sum of squares of the Pauli-component differences (2x2 only).

    Both matrices get the same projection convention, so the resulting
    error does not depend on that choice.
    """
    diff = pauli_components(u_approx) - pauli_components(u_exact)
    return float(np.sqrt(np.sum(np.abs(diff) ** 2)))


def frobenius_error(u_approx: np.ndarray, u_exact: np.ndarray) -> float:
    if u_approx.shape != u_exact.shape:
        raise ValueError("dimension mismatch")
    return float(np.linalg.norm(u_approx - u_exact, "fro"))


@dataclass(frozen=True)
class EvolutionResult:
    u_approx: np.ndarray
    u_exact: np.ndarray
    dt: float
    n_steps: int
    t: float
    error_frobenius: float
    error_pauli: Optional[float]


def evolve(m: Method, ops: OperatorSet, dt: float, n_steps: int) -> EvolutionResult:
    """n applications of the method against the exact evolution at t = n D dt."""
    step = apply_method(m, ops, dt)
    _check_unitary(step)
    u = np.linalg.matrix_power(step, n_steps)
    d = float(sigma_p(m, 1))
    t = n_steps * d * dt
    u_exact = exact_evolution(ops, t)
    _check_unitary(u_exact)
    return _result(u, u_exact, dt, n_steps, t)


def _result(u, u_exact, dt, n, t) -> EvolutionResult:
    e_pauli = pauli_error(u, u_exact) if u.shape == (2, 2) else None
    return EvolutionResult(
        u_approx=u,
        u_exact=u_exact,
        dt=dt,
        n_steps=n,
        t=t,
        error_frobenius=frobenius_error(u, u_exact),
        error_pauli=e_pauli,
    )


def scaling_experiment(
    m: Method,
    ops: OperatorSet,
    dt_list: Sequence[float],
    *,
    n_steps: int | Sequence[int] | None = None,
    t_total: float | None = None,
    max_samples: int = 400,
    label: str = "",
) -> list[dict]:
    """Error rows {method, dt, n, t, E_pauli, E_frob} over steps or time.

    For each dt either a fixed list of step counts is evaluated, or with
    ``t_total`` the run extends to n_max = t_total / (D dt) applications
    (physical time advances by D dt per application), sampling at most
    ``max_samples`` step counts, geometrically spaced.
    """
    if not dt_list:
        raise ValueError("dt_list must be nonempty")
    if (n_steps is None) == (t_total is None):
        raise ValueError("give exactly one of n_steps or t_total")
    d = float(sigma_p(m, 1))
    rows: list[dict] = []
    for dt in dt_list:
        if t_total is not None:
            n_max = max(1, int(round(t_total / (d * dt))))
            samples = _geometric_samples(n_max, max_samples)
        elif isinstance(n_steps, int):
            samples = [n_steps]
        else:
            samples = sorted(set(int(n) for n in n_steps))
        step = apply_method(m, ops, dt)
        _check_unitary(step)
        u = np.eye(ops.dim, dtype=complex)
        prev = 0
        for n in samples:
            u = u @ np.linalg.matrix_power(step, n - prev)
            prev = n
            t = n * d * dt
            u_exact = exact_evolution(ops, t)
            res = _result(u, u_exact, dt, n, t)
            rows.append(
                {
                    "method": label,
                    "dt": dt,
                    "n": n,
                    "t": t,
                    "E_pauli": res.error_pauli,
                    "E_frob": res.error_frobenius,
                }
            )
    return rows


def _geometric_samples(n_max: int, max_samples: int) -> list[int]:
    if n_max <= max_samples:
        return list(range(1, n_max + 1))
    pts = np.unique(
        np.rint(np.geomspace(1, n_max, max_samples)).astype(int)
    )
    return list(pts)


def fit_loglog_slope(x: Sequence[float], y: Sequence[float]) -> float:
    """Least-squares slope of log y against log x."""
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(y, dtype=float))
    slope, _ = np.polyfit(lx, ly, 1)
    return float(slope)


def order_slope(
    m: Method,
    ops: OperatorSet,
    dt_list: Sequence[float],
    n: int = 1,
    *,
    use_pauli: bool | None = None,
) -> float:
    """Fitted slope of log E versus log dt at fixed step count n.

    For a method of order o the error law E = n R dt^{o+1} makes this o+1.
    """
    errors = []
    for dt in dt_list:
        res = evolve(m, ops, dt, n)
        pick_pauli = ops.dim == 2 if use_pauli is None else use_pauli
        errors.append(res.error_pauli if pick_pauli else res.error_frobenius)
    return fit_loglog_slope(dt_list, errors)


def build_pauli_set() -> OperatorSet:
    """The single-spin set {sigma_x, sigma_y, sigma_z} (N = 3, dim 2)."""
    return OperatorSet([PAULI_X, PAULI_Y, PAULI_Z])


def build_ising_nnn(num_spins: int) -> OperatorSet:
    """Heisenberg-type chain with nearest and next-nearest couplings.

    H = sum_i (sigma_i . sigma_{i+1} + sigma_i . sigma_{i+2}), periodic
    boundary.  The 2 * num_spins terms are grouped by range and site parity
    into N = 4 Hermitian groups (even/odd nearest, even/odd next-nearest);
    for num_spins = 4 each group is internally commuting, realising the
    least possible number of mutually non-commuting terms for this chain.
    """
    if num_spins < 4:
        raise ValueError("need at least 4 spins for distinct nnn couplings")
    if num_spins > 10:
        raise ValueError("dense dimension limit: at most 10 spins")
    dim = 2**num_spins

    def two_site(i: int, j: int) -> np.ndarray:
        total = np.zeros((dim, dim), dtype=complex)
        for p in _PAULI:
            ops = [np.eye(2, dtype=complex)] * num_spins
            ops[i] = p
            ops[j] = p.copy()
            mat = ops[0]
            for k in range(1, num_spins):
                mat = np.kron(mat, ops[k])
            total += mat
        return total

    groups = {key: np.zeros((dim, dim), dtype=complex) for key in range(4)}
    for i in range(num_spins):
        nn = two_site(i, (i + 1) % num_spins)
        nnn = two_site(i, (i + 2) % num_spins)
        groups[i % 2] += nn
        groups[2 + i % 2] += nnn
    return OperatorSet([groups[k] for k in range(4)])
