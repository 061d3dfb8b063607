"""Command-line front door.

Subcommands: verify, metrics, tables, search, solve, compose, simulate.
Exit codes: 0 success / claim verified, 1 verification or check failure,
2 parse or usage error.
"""

from __future__ import annotations

import argparse
import difflib
import json
import sys
from pathlib import Path

import mpmath as mp

from . import catalog as cat
from .compose import auto_compose, make_palindromic, raise_order
from .figures import save_error_curves
from .harness import (
    _geometric_samples,
    build_ising_nnn,
    build_pauli_set,
    scaling_experiment,
)
from .irrational import NoConvergenceError, r3_shortest, r4_symmetric
from .notation import (
    Method,
    NotationError,
    Target,
    format_method,
    is_self_transpose,
    method_to_json,
    parse_method,
)
from .residuals import report, rho_vector
from .search import SearchSpec, search
from .sigma import MAX_ORDER, order_of, sigma_vector
from .tables import GOLDEN_TABLE_NAMES, all_tables, golden_csv, render_csv, render_text

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _resolve(text: str, decimal_type=float) -> tuple[Method, int | None, str]:
    """Catalog id or notation -> (method, claimed order or None, label)."""
    if text in cat.CATALOG:
        entry = cat.get_entry(text)
        return entry.method(decimal_type=decimal_type), entry.claimed_order, text
    m = parse_method(text, decimal_type=decimal_type)
    return m, None, format_method(m)


def _order_certified(m: Method, claimed: int) -> bool:
    """Engine order check; claims one above the ceiling use the parity
    argument (self-transpose kills the next even order)."""
    rep = order_of(m)
    if claimed <= MAX_ORDER:
        return rep.achieved_order >= claimed
    return (
        claimed == MAX_ORDER + 1
        and rep.achieved_order == MAX_ORDER
        and is_self_transpose(m)
    )


def _print_report(m: Method, label: str, as_json: bool, precision: int) -> dict:
    rep_order = order_of(m)
    data = {
        "method": label,
        "notation": format_method(m),
        "target": m.target.value,
        "unit_count": m.unit_count,
        "order": rep_order.achieved_order,
        "leading_nonzero": list(rep_order.leading_nonzero_labels),
        "direction": rep_order.direction,
    }
    try:
        rep = report(m)
        data.update(rep.to_json())
    except ValueError:
        pass
    if as_json:
        print(json.dumps(data, indent=1))
    else:
        print(f"method   : {label}")
        if label != data["notation"]:
            print(f"notation : {data['notation']}")
        print(f"target   : {data['target']}   units: {data['unit_count']}")
        order_txt = str(data["order"])
        if data["order"] == MAX_ORDER and not data["leading_nonzero"]:
            order_txt = f">={MAX_ORDER}"
        print(f"order    : {order_txt}")
        if data["direction"] == -1:
            print("direction: -1 (reversed commutator; transposed gate)")
        if "D" in data:
            print(
                f"D={data['D']}  L={data['L']}  I={data['I']}  "
                f"L/D={_fmt(data['L/D'], precision)}"
                + (
                    f"  R/D={_fmt(data['R/D'], precision)}"
                    if data.get("R/D") is not None
                    else ""
                )
                + (
                    f"  Z={_fmt(data['Z'], precision)}"
                    if data.get("Z") is not None
                    else ""
                )
            )
    return data


def _fmt(x, precision: int) -> str:
    return f"{float(x):.{precision}g}"


def cmd_verify(args) -> int:
    try:
        m, claimed, label = _resolve(args.method)
    except NotationError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    data = _print_report(m, label, args.json, args.precision)
    if claimed is not None:
        ok = _order_certified(m, claimed)
        verdict = "verified" if ok else "FAILED"
        print(f"claimed order {claimed}: {verdict}")
        return EXIT_OK if ok else EXIT_FAIL
    return EXIT_OK if data["order"] >= 1 else EXIT_FAIL


def cmd_metrics(args) -> int:
    code = EXIT_OK
    ids = args.methods or cat.catalog_ids()
    for text in ids:
        try:
            m, _, label = _resolve(text)
        except NotationError as exc:
            print(f"parse error for {text!r}: {exc}", file=sys.stderr)
            code = EXIT_USAGE
            continue
        _print_report(m, label, args.json, args.precision)
        if not args.json:
            print()
    return code


def cmd_tables(args) -> int:
    tables = all_tables()
    if args.check:
        failures = []
        for t in tables:
            ours = render_csv(t)
            golden = golden_csv(t.name)
            if ours != golden:
                diff = "\n".join(
                    difflib.unified_diff(
                        golden.splitlines(),
                        ours.splitlines(),
                        fromfile=f"golden/{t.name}.csv",
                        tofile=f"generated/{t.name}.csv",
                        lineterm="",
                    )
                )
                failures.append(diff)
        if failures:
            print("\n\n".join(failures))
            print(f"{len(failures)} table(s) differ from the golden copies")
            return EXIT_FAIL
        print(f"all {len(tables)} tables match the golden copies")
        return EXIT_OK
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        for t in tables:
            (outdir / f"{t.name}.csv").write_text(render_csv(t))
            (outdir / f"{t.name}.txt").write_text(render_text(t))
        print(f"wrote {len(tables)} tables to {outdir}")
        return EXIT_OK
    for t in tables:
        print(render_text(t))
    return EXIT_OK


def cmd_search(args) -> int:
    target = Target.COMMUTATOR if args.target == "commutator" else Target.SUM
    spec = SearchSpec(
        target_order=args.order,
        I=args.units,
        a_max=args.amax,
        target=target,
        max_results=args.max_results,
        dedup=not args.no_dedup,
        time_limit=args.max_seconds,
    )
    result = search(spec, jobs=args.jobs)
    lines = []
    for m, rep in result:
        rho = rho_vector(sigma_vector(m))
        lines.append(
            json.dumps(
                {
                    "method": format_method(m),
                    "D": int(rep.D),
                    "L": int(rep.L),
                    "I": rep.I,
                    "Z": rep.Z,
                    "rho": rho.to_json(),
                }
            )
        )
    text = "\n".join(lines) + ("\n" if lines else "")
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    status = "exhausted search space" if result.complete else result.reason
    print(f"# {len(result)} method(s); {status}", file=sys.stderr)
    return EXIT_OK


def cmd_solve(args) -> int:
    decimal_type = float
    if args.precision > 17:
        mp.mp.dps = args.precision
        decimal_type = mp.mpf
    if args.order == 3:
        m = r3_shortest(decimal_type=decimal_type)
    elif args.symmetric or args.variant is not None:
        m = r4_symmetric(args.variant or 1, decimal_type=decimal_type)
    else:
        print("order 4 requires --symmetric/--variant", file=sys.stderr)
        return EXIT_USAGE
    label = f"solve(order={args.order}" + (
        f", variant={args.variant})" if args.variant else ")"
    )
    if args.json:
        print(
            json.dumps(
                {
                    "label": label,
                    "units": method_to_json(m),
                    "order": order_of(m).achieved_order,
                    "Z": report(m).Z,
                }
            )
        )
    else:
        _print_report(m, label, False, min(args.precision, 17))
        for u in m.units:
            print(f"  alpha={u.alpha:+d}  a={u.a!s}")
    return EXIT_OK


def cmd_compose(args) -> int:
    try:
        base, _, _ = _resolve(args.base)
    except NotationError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.auto:
        m = auto_compose(base, args.auto)
    elif args.schedule:
        entries = [int(b) for b in args.schedule.split(",")]
        if args.palindromic:
            entries = make_palindromic(entries)
        m = raise_order(base, entries)
    else:
        print("give --auto ORDER or --schedule b1,b2,...", file=sys.stderr)
        return EXIT_USAGE
    print(format_method(m))
    _print_report(m, "composed", args.json, args.precision)
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.set == "pauli":
        ops = build_pauli_set()
    else:
        ops = build_ising_nnn(args.spins)
    samples = _geometric_samples(args.steps, args.max_samples)
    rows: list[dict] = []
    for text in args.method:
        try:
            m, _, label = _resolve(text)
        except NotationError as exc:
            print(f"parse error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        rows.extend(
            scaling_experiment(m, ops, [args.dt], n_steps=samples, label=label)
        )
    header = "method,dt,n,t,E_pauli,E_frob"
    lines = [header]
    for r in rows:
        e_pauli = "" if r["E_pauli"] is None else f"{r['E_pauli']:.12e}"
        lines.append(
            f"{r['method']},{r['dt']:g},{r['n']},{r['t']:.10g},"
            f"{e_pauli},{r['E_frob']:.12e}"
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        out = Path(args.out)
        out.write_text(text)
        print(f"wrote {len(rows)} rows to {out}")
        if not args.no_fig:
            figpath = args.fig or out.with_suffix(".png")
            save_error_curves(rows, figpath, title=f"{args.set} set, dt={args.dt:g}")
            print(f"wrote figure to {figpath}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="expsplit",
        description="Product-formula splitting methods: verify, search, "
        "solve, compose, simulate, reproduce tables.",
    )
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument(
        "--precision",
        type=int,
        default=6,
        help="printed significant digits (solve: >17 switches to mpmath)",
    )
    p.add_argument("--seed", type=int, default=0, help="seed for randomized runs")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("verify", help="verify a catalog id or notation string")
    sp.add_argument("method")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("metrics", help="print metric reports")
    sp.add_argument("methods", nargs="*", help="ids or notation (default: catalog)")
    sp.set_defaults(func=cmd_metrics)

    sp = sub.add_parser("tables", help="regenerate the bundled tables")
    sp.add_argument("--check", action="store_true", help="diff against golden copies")
    sp.add_argument("--out", help="directory for CSV + text output")
    sp.set_defaults(func=cmd_tables)

    sp = sub.add_parser("search", help="staged integer-coefficient search")
    sp.add_argument("--order", type=int, required=True, choices=(3, 4, 5))
    sp.add_argument("--units", type=int, required=True, help="unit count I")
    sp.add_argument("--amax", type=int, default=5, help="bound on |a_i|")
    sp.add_argument("--target", choices=("sum", "commutator"), default="sum")
    sp.add_argument("--max-results", type=int, default=None)
    sp.add_argument("--max-seconds", type=float, default=None)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--no-dedup", action="store_true")
    sp.add_argument("--out", help="output path (JSON lines)")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("solve", help="closed-form irrational methods")
    sp.add_argument("--order", type=int, required=True, choices=(3, 4))
    sp.add_argument("--symmetric", action="store_true")
    sp.add_argument("--variant", type=int, choices=(1, 2, 3, 4))
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("compose", help="raise a method's order by composition")
    sp.add_argument("--base", required=True, help="catalog id or notation")
    sp.add_argument("--auto", type=int, help="target order (iterated doubling)")
    sp.add_argument("--schedule", help="comma-separated block coefficients")
    sp.add_argument("--palindromic", action="store_true")
    sp.set_defaults(func=cmd_compose)

    sp = sub.add_parser("simulate", help="error curves on an operator set")
    sp.add_argument("--method", action="append", required=True)
    sp.add_argument("--set", choices=("pauli", "ising"), default="pauli")
    sp.add_argument("--spins", type=int, default=4)
    sp.add_argument("--dt", type=float, default=0.01)
    sp.add_argument("--steps", type=int, default=1000)
    sp.add_argument("--max-samples", type=int, default=400)
    sp.add_argument("--out", help="CSV output path")
    sp.add_argument("--fig", help="figure path (default: CSV path with .png)")
    sp.add_argument("--no-fig", action="store_true")
    sp.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, NoConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
