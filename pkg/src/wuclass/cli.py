"""Command-line front end.

Exit codes: 0 success (including inconclusive verdicts), 2 hypothesis
failure, 3 input error, 4 size budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import bordism, char_class, group_homology, series
from .exact_arith import digit_sum_2, nu2

EXIT_OK = 0
EXIT_HYPOTHESIS = 2
EXIT_INPUT = 3
EXIT_BUDGET = 4

MAX_SERIES_ORDER = 512
MAX_CLASS_DEGREE = 40


class InputError(Exception):
    pass


class BudgetError(Exception):
    pass


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _load_json(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _load_record(path: str) -> bordism.ManifoldRecord:
    data = _load_json(path)
    try:
        return bordism.ManifoldRecord.from_json(data)
    except bordism.RecordError as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_group(arg: str) -> group_homology.FiniteGroup:
    if os.path.exists(arg):
        data = _load_json(arg)
        try:
            return group_homology.FiniteGroup.from_json(data)
        except group_homology.GroupTableError as exc:
            raise InputError(f"{arg}: {exc}") from None
    try:
        return group_homology.named_group(arg)
    except group_homology.SizeBudgetError:
        raise
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _max_order(args) -> int | None:
    if args.max_order is not None:
        return args.max_order
    env = os.environ.get("WUCLASS_MAX_ORDER")
    return int(env) if env else None


# --- subcommands ---------------------------------------------------------

def run_series(args) -> tuple[int, object, str]:
    if args.name not in series.NAMED_SERIES:
        raise InputError(f"unknown series {args.name!r}; choose from {', '.join(series.NAMED_SERIES)}")
    if args.order > MAX_SERIES_ORDER:
        raise BudgetError(f"order {args.order} exceeds {MAX_SERIES_ORDER}")
    if args.order < 1 or (args.name in "gG" and args.order < 2):
        raise InputError(f"order {args.order} too small for series {args.name}")
    s = series.NAMED_SERIES[args.name](args.order)
    coeffs = s.to_strings()
    text = "\n".join(f"x^{k}: {c}" for k, c in enumerate(coeffs))
    return EXIT_OK, {"series": args.name, "order": s.order, "coeffs": coeffs}, text


def run_wu_classes(args) -> tuple[int, object, str]:
    d = args.degree
    if d > MAX_CLASS_DEGREE:
        raise BudgetError(f"degree {d} exceeds {MAX_CLASS_DEGREE}")
    if d < 0:
        raise InputError("degree must be nonnegative")
    if args.kind in ("spin-tangential", "spin-normal"):
        variant = args.kind.split("-")[1]
        classes = char_class.spin_wu_classes(4 * (d // 4), variant)
        rows = [(4 * k, p) for k, p in classes.items()]
    elif args.kind == "spinc":
        rows = [(2 * n, p) for n, p in char_class.spinc_wu_classes(d).items()]
    elif args.kind == "complex":
        rows = [(2 * k, p) for k, p in char_class.complex_wu_classes(2 * (d // 2)).items()]
    else:
        raise InputError(f"unknown class kind {args.kind!r}")
    payload = {"kind": args.kind, "degree": d,
               "classes": [dict(p.to_json(), degree=deg) for deg, p in rows]}
    text = "\n".join(f"mu_{deg} = {p.to_text()}" for deg, p in rows)
    return EXIT_OK, payload, text


def denom_rows(max_n: int) -> list[dict]:
    A, _ = series.spinc_coefficient_series(max(max_n, 1))
    rows = []
    for n in range(1, max_n + 1):
        a = A[n]
        v = nu2(a.denominator)
        bound = n - digit_sum_2(n)
        rows.append({"n": n, "a_n": str(a), "nu2_denominator": v, "bound": bound,
                     "within_bound": v <= bound, "tight": v == bound})
    return rows


def run_denom_check(args) -> tuple[int, object, str]:
    if args.max_n > MAX_SERIES_ORDER:
        raise BudgetError(f"max-n {args.max_n} exceeds {MAX_SERIES_ORDER}")
    if args.max_n < 1:
        raise InputError("max-n must be >= 1")
    rows = denom_rows(args.max_n)
    ok = all(r["within_bound"] for r in rows)
    text = "\n".join(
        f"{r['n']:>4}  a_n = {r['a_n']:<24} nu2(denom) = {r['nu2_denominator']:>3}  "
        f"bound = {r['bound']:>3}  {'tight' if r['tight'] else ''}" for r in rows)
    text += "\nbound holds" if ok else "\nBOUND VIOLATED"
    return (EXIT_OK if ok else EXIT_HYPOTHESIS), {"rows": rows, "bound_holds": ok}, text


def run_wu_numbers(args) -> tuple[int, object, str]:
    r = _load_record(args.record)
    try:
        numbers = bordism.integral_wu_numbers(r)
    except bordism.MissingMonomialError as exc:
        raise InputError(f"{args.record}: char_numbers is missing monomial {exc.args[0]!r}") from None
    report = bordism.wu_parity_check(r)
    payload = {"dim": r.dim,
               "wu_numbers": [{"partition": list(I.parts), "value": str(v)} for I, v in numbers.items()],
               "parity": report.to_json()}
    text = "\n".join(f"{I}: {v}" for I, v in numbers.items()) or "(odd dimension: no Wu numbers)"
    text += "\n" + report.to_text()
    return EXIT_OK, payload, text


def run_verdict(args) -> tuple[int, object, str]:
    r = _load_record(args.record)
    try:
        report = bordism.bounding_verdict(r)
    except bordism.MissingMonomialError as exc:
        raise InputError(f"{args.record}: char_numbers is missing monomial {exc.args[0]!r}") from None
    code = EXIT_HYPOTHESIS if report.conclusion == "hypotheses-not-met" else EXIT_OK
    payload = {"label": r.label, "dim": r.dim, **report.to_json()}
    return code, payload, report.to_text()


def run_group(args) -> tuple[int, object, str]:
    g = _load_group(args.group)
    budget = _max_order(args)
    payload: dict = {"group": args.group, "order": g.order}
    lines = [f"group {args.group} of order {g.order}"]
    if args.homology is not None:
        h = group_homology.homology(g, args.homology, budget)
        payload[f"H_{args.homology}"] = h.to_json()
        lines.append(f"H_{args.homology} = {h}")
    if args.cohomology is not None:
        h = group_homology.cohomology(g, args.cohomology, max_order=budget)
        payload[f"H^{args.cohomology}"] = h.to_json()
        lines.append(f"H^{args.cohomology} = {h}")
    if args.schur:
        h = group_homology.schur_multiplier(g, budget)
        payload["schur_multiplier"] = h.to_json()
        lines.append(f"Schur multiplier = {h}")
    if args.sylow:
        P, emb = group_homology.sylow_2(g)
        payload["sylow_2"] = {"order": P.order, "embedding": list(emb),
                              "type": group_homology.recognize_2group(P)}
        lines.append(f"Sylow 2-subgroup: order {P.order}, elements {list(emb)}")
    if len(lines) == 1:
        h = group_homology.homology(g, 1, budget)
        payload["H_1"] = h.to_json()
        lines.append(f"H_1 = {h}")
    return EXIT_OK, payload, "\n".join(lines)


def run_holonomy(args) -> tuple[int, object, str]:
    g = _load_group(args.group)
    v = group_homology.holonomy_verdict(g, _max_order(args))
    text = "\n".join([f"verdict: {v.verdict}",
                      f"  Sylow 2-subgroup: order {v.sylow_order}, {v.sylow_type}",
                      f"  Schur multiplier of Sylow 2-subgroup: {v.sylow_multiplier}",
                      *(f"  note: {n}" for n in v.notes)])
    return EXIT_OK, {"group": args.group, **v.to_json()}, text


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wuclass", description="Exact integral Wu class calculus.")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--max-order", type=int, default=None,
                   help="group order budget for (co)homology (env WUCLASS_MAX_ORDER)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("series", help="coefficients of f, h, g, G, A or B")
    s.add_argument("name")
    s.add_argument("--order", type=int, default=10)
    s.set_defaults(func=run_series)

    s = sub.add_parser("wu-classes", help="universal Wu classes up to a degree")
    s.add_argument("kind", choices=("spin-tangential", "spin-normal", "spinc", "complex"))
    s.add_argument("--degree", type=int, default=16)
    s.set_defaults(func=run_wu_classes)

    s = sub.add_parser("denom-check", help="2-adic denominator bound for the c^n coefficients")
    s.add_argument("--max-n", type=int, default=16)
    s.set_defaults(func=run_denom_check)

    s = sub.add_parser("wu-numbers", help="partition Wu numbers of a manifold record")
    s.add_argument("record")
    s.set_defaults(func=run_wu_numbers)

    s = sub.add_parser("verdict", help="bounding verdict for a manifold record")
    s.add_argument("record")
    s.set_defaults(func=run_verdict)

    s = sub.add_parser("group", help="homology data of a finite group")
    s.add_argument("group", help="JSON file or name such as cyclic:8, quaternion:16")
    s.add_argument("--homology", type=int)
    s.add_argument("--cohomology", type=int)
    s.add_argument("--schur", action="store_true")
    s.add_argument("--sylow", action="store_true")
    s.set_defaults(func=run_group)

    s = sub.add_parser("holonomy", help="holonomy-group bounding criterion")
    s.add_argument("group")
    s.set_defaults(func=run_holonomy)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        code, payload, text = args.func(args)
    except (BudgetError, group_homology.SizeBudgetError) as exc:
        print(f"size budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.format == "json":
        sys.stdout.write(dump_json(payload))
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
