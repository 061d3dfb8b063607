"""Staged exhaustive search for integer-coefficient methods.

The order conditions are solved in three stages of increasing cost:

1. sign stage: for odd powers p only the sign s_i of alpha_i a_i matters,
   so magnitude multisets {(s_i, |a_i|)} are enumerated once per multiset
   (no permutations) against the odd-power sums;
2. even stage: separate signs for alpha_i and a_i are introduced and the
   even-power sums are solved (they depend only on alpha_i and |a_i|);
3. permutation stage: orderings of the surviving (alpha, a) assignments are
   run through the full nested coefficient system in exact arithmetic.

Divisibility of the time advance (a multiple of 6 for 3rd/4th-order sums)
prunes the sign stage early.  Results deduplicate transpose pairs by default
and are ranked by the switch-dominated cost factor Z.
"""

from __future__ import annotations

import itertools
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .notation import Method, Target, Unit, format_method, transpose
from .residuals import MethodReport, report
from .sigma import label_order, order_of, sigma_from_units

__all__ = [
    "SearchSpec",
    "SearchResult",
    "stage_signs",
    "stage_even",
    "stage_permute",
    "search",
    "brute_force_search",
]

SignedMagnitude = tuple[int, int]  # (sign of alpha*a, |a|)
Assignment = tuple[tuple[int, int], ...]  # ((alpha, a), ...)


@dataclass(frozen=True)
class SearchSpec:
    """Bounds and target of one staged search."""

    target_order: int
    I: int
    a_max: int
    target: Target = Target.SUM
    max_results: Optional[int] = None
    dedup: bool = True
    time_limit: Optional[float] = None

    def __post_init__(self):
        if self.target_order not in (3, 4, 5):
            raise ValueError("target_order must be 3, 4 or 5")
        if self.I < 1:
            raise ValueError("I must be >= 1")
        if self.a_max < 1:
            raise ValueError("a_max must be >= 1")


@dataclass
class SearchResult:
    """Ranked search output plus whether the space was exhausted."""

    entries: list[tuple[Method, MethodReport]]
    complete: bool
    reason: str = "exhausted"

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


def _odd_power_targets(spec: SearchSpec) -> tuple[bool, bool]:
    """(require sum s|a| == 0, require fifth-power condition)."""
    zero_d = spec.target is Target.COMMUTATOR
    need_p5 = spec.target_order >= 5
    return zero_d, need_p5


def stage_signs(spec: SearchSpec) -> Iterator[tuple[SignedMagnitude, ...]]:
    """Multisets {(s_i, |a_i|)} passing the odd-power conditions.

    For the SUM target: sum s|a| > 0 (and divisible by 6 for orders 3-4,
    by 30 for order 5) with sum s|a|^3 = 0, plus sum s|a|^5 = 0 at order 5.
    For the COMMUTATOR target the first-power sum must vanish instead.
    Emitted in deterministic lexicographic order, one per multiset.
    """
    zero_d, need_p5 = _odd_power_targets(spec)
    symbols = [
        (s, mag) for s in (1, -1) for mag in range(1, spec.a_max + 1)
    ]
    symbols.sort()
    for combo in itertools.combinations_with_replacement(symbols, spec.I):
        d = sum(s * m for s, m in combo)
        if zero_d:
            if d != 0:
                continue
        else:
            if d <= 0:
                continue
            if spec.target_order in (3, 4) and d % 6 != 0:
                continue
            if spec.target_order == 5 and d % 30 != 0:
                continue
        if sum(s * m**3 for s, m in combo) != 0:
            continue
        if need_p5 and sum(s * m**5 for s, m in combo) != 0:
            continue
        yield combo


def stage_even(
    spec: SearchSpec, multiset: Sequence[SignedMagnitude]
) -> Iterator[Assignment]:
    """Sign assignments (alpha_i, a_i) solving the even-power conditions.

    The even sums depend only on alpha and |a|; a_i = alpha_i s_i |a_i|
    restores sign(alpha_i a_i) = s_i.  Assignments are deduplicated over
    groups of equal (s, |a|) entries, where only the count of alpha = +1
    matters.
    """
    groups: list[tuple[SignedMagnitude, int]] = []
    for key, grp in itertools.groupby(sorted(multiset)):
        groups.append((key, len(list(grp))))

    need_p4 = spec.target_order >= 4
    comm = spec.target is Target.COMMUTATOR

    def rec(idx: int, partial: list[tuple[int, int]]):
        if idx == len(groups):
            s2 = sum(alpha * a * a for alpha, a in partial)
            if comm:
                if s2 <= 0:
                    return
            elif s2 != 0:
                return
            if need_p4 and sum(alpha * a**4 for alpha, a in partial) != 0:
                return
            yield tuple(partial)
            return
        (s, mag), count = groups[idx]
        for plus in range(count, -1, -1):
            ext = [(1, s * mag)] * plus + [(-1, -s * mag)] * (count - plus)
            yield from rec(idx + 1, partial + ext)

    yield from rec(0, [])


def _nested_conditions(spec: SearchSpec) -> list[str]:
    """Ordering-dependent sigma labels that must vanish, cheap ones first.

    Order o requires the nested labels of order <= o to vanish; the plain
    power sums are handled by the earlier stages.  The sets coincide for
    both targets since sigma^1 and sigma^2 are never ordering-dependent.
    """
    labels = ["12"]
    if spec.target_order >= 4:
        labels += ["112", "13"]
    if spec.target_order >= 5:
        labels += ["23", "14", "113", "221", "1112"]
    return labels


def stage_permute(
    spec: SearchSpec, assignment: Sequence[tuple[int, int]]
) -> Iterator[Method]:
    """Orderings of an assignment satisfying the full coefficient system.

    Permutations are generated by backtracking over the (alpha, a) multiset
    while the running power sums needed by the ordering-dependent conditions
    are updated incrementally, so each condition is an O(1) integer check at
    the leaf (the conditions are rescaled to clear denominators).
    """
    labels = _nested_conditions(spec)
    target = spec.target
    for perm in _orderings_passing(tuple(assignment), labels):
        units = tuple(Unit(alpha, Fraction(a)) for alpha, a in perm)
        yield Method(units, target)


def _orderings_passing(
    items: Assignment, labels: Sequence[str]
) -> Iterator[Assignment]:
    """Distinct orderings (lexicographic) with all scaled conditions zero.

    Scaled integer forms of the nested coefficients, with J_X denoting
    sigma^X times the factor shown (power sums sigma^p are order
    independent and precomputed):

        J12   = 2 sigma^12   = -s1 s2 + sum a (dS1^2)
        J112  = 12 sigma^112 = -3 s1 J12 - 2 s1^2 s2 + 2 sum a (dS1^3)
        J13   = 2 sigma^13   = -s1 s3 + sum a^2 (dS1^2)
        J23   = 2 sigma^23   = -s2 s3 + sum a (dS2^2)
        J14   = 2 sigma^14   = -s1 s4 + sum a^3 (dS1^2)
        J113  = 12 sigma^113 = -3 s1 J13 - 2 s1^2 s3 + 2 sum a^2 (dS1^3)
        J1112 = 24 sigma^1112
              = -s1 J112 - 4 s1^2 J12 - s1^3 s2 + sum a (dS1^4)
        J221  = 12 P sigma^221
              = (3 s2 J12 - 2 s2^2 s1) P + 2 sum (P/a) (dS2^3),  P = prod a

    where dSp^k = Sp_i^k - Sp_{i-1}^k with Sp the running partial sums.
    """
    pool = sorted(items)
    counts: dict[tuple[int, int], int] = {}
    for it in pool:
        counts[it] = counts.get(it, 0) + 1
    keys = sorted(counts)
    n = len(pool)
    out: list = [None] * n

    s1 = sum(alpha * a for alpha, a in pool)
    s2 = sum(alpha * a * a for alpha, a in pool)
    s3 = sum(alpha * a**3 for alpha, a in pool)
    s4 = sum(alpha * a**4 for alpha, a in pool)
    prod_a = 1
    for _, a in pool:
        prod_a *= a

    want = frozenset(labels)
    deep = not want <= {"12"}  # anything beyond the order-3 condition
    fifth = bool({"23", "14", "113", "221", "1112"} & want)

    def check(acc) -> bool:
        t12, t112, t13, t14, t113, t1112, t23, t221 = acc
        j12 = -s1 * s2 + t12
        if j12 != 0:
            return False
        if not deep:
            return True
        j112 = -3 * s1 * j12 - 2 * s1 * s1 * s2 + 2 * t112
        if "112" in want and j112 != 0:
            return False
        j13 = -s1 * s3 + t13
        if "13" in want and j13 != 0:
            return False
        if not fifth:
            return True
        if "23" in want and -s2 * s3 + t23 != 0:
            return False
        if "14" in want and -s1 * s4 + t14 != 0:
            return False
        if "113" in want:
            if -3 * s1 * j13 - 2 * s1 * s1 * s3 + 2 * t113 != 0:
                return False
        if "1112" in want:
            if -s1 * j112 - 4 * s1 * s1 * j12 - s1**3 * s2 + t1112 != 0:
                return False
        if "221" in want:
            if (3 * s2 * j12 - 2 * s2 * s2 * s1) * prod_a + 2 * t221 != 0:
                return False
        return True

    def rec(depth: int, p1: int, p2: int, acc):
        if depth == n:
            if check(acc):
                yield tuple(out)
            return
        t12, t112, t13, t14, t113, t1112, t23, t221 = acc
        for key in keys:
            if not counts[key]:
                continue
            alpha, a = key
            counts[key] -= 1
            out[depth] = key
            q1 = p1 + alpha * a
            dsq = q1 * q1 - p1 * p1
            if deep:
                dcube = q1**3 - p1**3
                if fifth:
                    q2 = p2 + alpha * a * a
                    nxt = (
                        t12 + a * dsq,
                        t112 + a * dcube,
                        t13 + a * a * dsq,
                        t14 + a**3 * dsq,
                        t113 + a * a * dcube,
                        t1112 + a * (q1**4 - p1**4),
                        t23 + a * (q2 * q2 - p2 * p2),
                        t221 + (prod_a // a) * (q2**3 - p2**3),
                    )
                else:
                    q2 = p2
                    nxt = (
                        t12 + a * dsq,
                        t112 + a * dcube,
                        t13 + a * a * dsq,
                        0,
                        0,
                        0,
                        0,
                        0,
                    )
            else:
                q2 = p2
                nxt = (t12 + a * dsq, 0, 0, 0, 0, 0, 0, 0)
            yield from rec(depth + 1, q1, q2, nxt)
            counts[key] += 1
            out[depth] = None

    yield from rec(0, 0, 0, (0,) * 8)


def _multiset_permutations(items: Assignment) -> Iterator[Assignment]:
    """Distinct permutations of a multiset, lexicographically."""
    pool = sorted(items)
    counts: dict[tuple[int, int], int] = {}
    for it in pool:
        counts[it] = counts.get(it, 0) + 1
    keys = sorted(counts)
    n = len(pool)
    out: list = [None] * n

    def rec(depth: int):
        if depth == n:
            yield tuple(out)
            return
        for key in keys:
            if counts[key]:
                counts[key] -= 1
                out[depth] = key
                yield from rec(depth + 1)
                counts[key] += 1

    yield from rec(0)


def _canonical_key(m: Method) -> str:
    """Representative string under transpose equivalence."""
    a = format_method(m)
    b = format_method(transpose(m))
    return min(a, b)


def _process_multiset(
    spec: SearchSpec, multiset: tuple[SignedMagnitude, ...]
) -> list[Method]:
    found = []
    for assignment in stage_even(spec, multiset):
        found.extend(stage_permute(spec, assignment))
    return found


def search(spec: SearchSpec, jobs: int = 1) -> SearchResult:
    """Run the staged pipeline and rank results by Z (ties by L/D).

    Work is partitioned per sign-stage multiset, so multisets may be
    evaluated in parallel; the final sort keeps the output deterministic.
    Hitting max_results or time_limit is reported via ``complete=False``
    and is distinct from exhausting the space.
    """
    start = time.perf_counter()
    methods: list[Method] = []
    complete = True
    reason = "exhausted"

    def out_of_budget() -> Optional[str]:
        if spec.time_limit is not None and (
            time.perf_counter() - start > spec.time_limit
        ):
            return "time limit reached"
        if spec.max_results is not None and len(methods) >= spec.max_results:
            return "result cap reached"
        return None

    multisets = stage_signs(spec)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for batch in pool.map(
                _process_multiset,
                itertools.repeat(spec),
                multisets,
                chunksize=8,
            ):
                methods.extend(batch)
                stop = out_of_budget()
                if stop:
                    complete, reason = False, stop
                    break
    else:
        for multiset in multisets:
            methods.extend(_process_multiset(spec, multiset))
            stop = out_of_budget()
            if stop:
                complete, reason = False, stop
                break

    if spec.dedup:
        seen: dict[str, Method] = {}
        for m in methods:
            seen.setdefault(_canonical_key(m), m)
        methods = list(seen.values())
    if spec.max_results is not None:
        methods = methods[: spec.max_results]

    entries = []
    for m in methods:
        _assert_emitted_invariants(spec, m)
        entries.append((m, report(m)))
    entries.sort(
        key=lambda pair: (
            pair[1].Z if pair[1].Z is not None else float("inf"),
            pair[1].l_over_d,
            format_method(pair[0]),
        )
    )
    return SearchResult(entries=entries, complete=complete, reason=reason)


def _assert_emitted_invariants(spec: SearchSpec, m: Method) -> None:
    """Hard checks every emitted method must pass."""
    rep = order_of(m)
    assert rep.achieved_order >= spec.target_order, (
        f"search emitted {format_method(m)} below target order"
    )
    sig = sigma_from_units(m.units)
    inverses = sum(1 for u in m.units if u.alpha * u.a < 0)
    if spec.target is Target.SUM:
        d = sig["1"]
        if spec.target_order >= 3:
            assert inverses >= 1, "3rd-order method without an inverse"
            assert d % 6 == 0, f"D = {d} not a multiple of 6"
        if spec.target_order >= 4:
            assert inverses >= 2, "4th-order method with fewer than 2 inverses"
            if d % 12 != 0:
                # observed regularity, not a proved theorem: warn only
                warnings.warn(
                    f"4th-order method with D = {d} not a multiple of 12: "
                    f"{format_method(m)}",
                    stacklevel=2,
                )
        if spec.target_order >= 5:
            assert d % 30 == 0, f"D = {d} not a multiple of 30"


def brute_force_search(spec: SearchSpec) -> list[Method]:
    """Direct enumeration of every ordered (alpha, a) tuple; oracle for the
    staged pipeline at desk scale (use only for small I and a_max)."""
    values = [a for a in range(-spec.a_max, spec.a_max + 1) if a != 0]
    labels = ["12"]
    if spec.target_order >= 4:
        labels += ["112", "13"]
    if spec.target_order >= 5:
        labels += ["23", "14", "113", "221", "1112"]
    out = []
    for alphas in itertools.product((1, -1), repeat=spec.I):
        for avals in itertools.product(values, repeat=spec.I):
            units = tuple(
                Unit(al, Fraction(a)) for al, a in zip(alphas, avals)
            )
            sig = sigma_from_units(units)
            if spec.target is Target.SUM:
                if not sig["1"] > 0:
                    continue
                if sig["2"] != 0 or sig["3"] != 0:
                    continue
                if spec.target_order >= 4 and sig["4"] != 0:
                    continue
            else:
                if sig["1"] != 0 or not sig["2"] > 0 or sig["3"] != 0:
                    continue
                if spec.target_order >= 4 and sig["4"] != 0:
                    continue
            if spec.target_order >= 5 and sig["5"] != 0:
                continue
            if any(sig[lab] != 0 for lab in labels):
                continue
            out.append(Method(units, spec.target))
    return out
