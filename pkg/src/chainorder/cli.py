"""Command-line front end: named experiments with reproducible reports.

Reports are plain dicts rendered as JSON (stable key order, rationals as
"p/q", a schema version field) or as indented text.  Identical
invocations produce byte-identical JSON; wall-clock readings only enter
with --timing.  Set CHAINORDER_REPORT_DIR to also write each JSON
report into that directory.  Exit codes: 0 when every assertion the
experiment embeds holds, 1 when one fails, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import acceptance
from .catalog import (
    CatalogPoint,
    S1_WITNESSES,
    S2_WITNESSES,
    T_REPRESENTATIVES,
    arc_family,
    catalog_spaces,
    s1_family,
    s2_family,
    s3_family,
    s3_witness_pair,
    t_family,
)
from .chains import chain_order_compare, chain_trace
from .foundations import EventuallyPeriodicSet, rational, rational_str
from .knaster_witness import demonstrate_distinct_orders
from .orientation import (
    apply_composition,
    decompose_on_cylinder,
    flip,
    parse_word,
    reach_with_parity,
)
from .ultrafilter import SimulatedUltrafilter

SCHEMA = "chainorder-report/1"

_VARIANTS = {
    "arc": ("standard", "reversed"),
    "s1": ("D", "D'", "E", "E'"),
    "s2": ("standard", "reversed"),
    "s3": ("binary prefix via --bits",),
    "t": ("D", "E"),
}


class UsageError(ValueError):
    """Bad selector or malformed input; maps to exit code 2."""


def _jsonable(value):
    if isinstance(value, Fraction):
        return rational_str(value)
    if isinstance(value, bool) or value is None or isinstance(value, (int, float, str)):
        return value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [_jsonable(v) for v in items]
    if hasattr(value, "as_dict"):
        return _jsonable(value.as_dict())
    return str(value)


def _family(space: str, variant: str | None, bits: str | None):
    if space == "s3":
        if not bits:
            raise UsageError("space s3 needs --bits, e.g. --bits 011")
        return s3_family(parse_word(bits))
    if bits:
        raise UsageError("--bits only applies to space s3")
    if space == "arc":
        return arc_family(variant or "standard")
    if space == "s1":
        return s1_family(variant or "D")
    if space == "s2":
        return s2_family(variant or "standard")
    if space == "t":
        return t_family(variant or "D")
    raise UsageError(f"unknown space: {space!r}")


def _parse_point(space: str, text: str):
    """Points are strand:param; the arc also accepts a bare rational."""
    if ":" in text:
        strand, _, param = text.partition(":")
        point = CatalogPoint(strand, rational(param))
    elif space == "arc":
        return rational(text)
    else:
        raise UsageError(f"point {text!r} must look like strand:param")
    catalog_spaces()[space].validate(point)
    return point


def _text_lines(payload, indent: str = ""):
    if isinstance(payload, dict):
        for key, value in payload.items():
            if isinstance(value, (dict, list)):
                yield f"{indent}{key}:"
                yield from _text_lines(value, indent + "  ")
            else:
                yield f"{indent}{key}: {value}"
    elif isinstance(payload, list):
        for value in payload:
            if isinstance(value, (dict, list)):
                yield from _text_lines(value, indent + "  ")
            else:
                yield f"{indent}- {value}"


def _emit(report: dict, fmt: str, experiment: str, lines: list[str] | None = None) -> None:
    payload = _jsonable(report)
    if fmt == "json":
        print(json.dumps(payload, indent=2))
    elif lines is not None:
        for line in lines:
            print(line)
    else:
        for line in _text_lines(payload):
            print(line)
    directory = os.environ.get("CHAINORDER_REPORT_DIR")
    if directory:
        os.makedirs(directory, exist_ok=True)
        path = os.path.join(directory, f"{experiment}.json")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(payload, indent=2) + "\n")


# -- subcommands ---------------------------------------------------------------


def _cmd_catalog_list(args) -> tuple[dict, bool]:
    witness_sets = {
        "arc": {},
        "s1": S1_WITNESSES,
        "s2": S2_WITNESSES,
        "s3": {f"tooth_{i}_pair": s3_witness_pair(i) for i in (1, 2, 3)},
        "t": T_REPRESENTATIVES,
    }
    spaces = {}
    for name, space in catalog_spaces().items():
        spaces[name] = {
            "strands": [s.name for s in space.strands],
            "components": list(space.components()),
            "variants": list(_VARIANTS[name]),
            "witnesses": witness_sets[name],
        }
    return {"spaces": spaces}, True


def _cmd_compare(args) -> tuple[dict, bool]:
    family = _family(args.space, args.variant, args.bits)
    x = _parse_point(args.space, args.x)
    y = _parse_point(args.space, args.y)
    ultrafilter = SimulatedUltrafilter.parse(args.ultrafilter) if args.ultrafilter else None
    verdict = chain_order_compare(family, x, y, ultrafilter, args.depth)
    trace = chain_trace(family, x, y, min(args.depth, args.trace_depth))
    report = {
        "inputs": {
            "space": args.space,
            "variant": args.variant,
            "bits": args.bits,
            "x": x,
            "y": y,
            "depth": args.depth,
            "ultrafilter": ultrafilter.label() if ultrafilter else None,
        },
        "verdict": verdict.as_dict(),
        "trace": trace,
    }
    return report, verdict.kind != "unknown"


def _cmd_orders_count(args) -> tuple[dict, bool]:
    """Count the distinct stabilized orders a space's chain variants induce.

    Reuses the acceptance experiments so the CLI and the test suite
    agree on what counts as one order.
    """
    space, depth = args.space, args.depth
    if space == "arc":
        rep = acceptance.arc_order_count(depth=depth)
        distinct, expected = rep["detail"]["distinct_orders"], 2
    elif space == "s1":
        rep = acceptance.s1_order_count(depth=depth)
        distinct, expected = rep["detail"]["distinct_orders"], 4
    elif space == "s2":
        rep = acceptance.s2_pattern_exclusion(depth=depth)
        patterns = {p for pats in rep["detail"]["realized"].values() for p in pats}
        distinct, expected = len(patterns), 2
    elif space == "s3":
        depth = min(depth, 6)
        rep = acceptance.s3_prefix_distinctness(length=depth)
        distinct, expected = rep["detail"]["distinct_orders"], 2**depth
    elif space == "t":
        depth = min(depth, 6)
        rep = acceptance.t_component_orders(depth=depth)
        orders = rep["detail"]["component_orders"]
        distinct = len(orders) if rep["pass"] else sum(orders.values())
        expected = 2
    else:
        raise UsageError(f"unknown space: {space!r}")
    report = {
        "inputs": {"space": space, "depth": depth},
        "distinct_orders": distinct,
        "expected": expected,
        "detail": dict(rep["detail"]),
    }
    return report, distinct == expected and rep["pass"]


_NAMED_SETS = {
    "even": EventuallyPeriodicSet.evens,
    "evens": EventuallyPeriodicSet.evens,
    "odd": EventuallyPeriodicSet.odds,
    "odds": EventuallyPeriodicSet.odds,
}


def _parse_level_set(text: str) -> EventuallyPeriodicSet:
    if text in _NAMED_SETS:
        return _NAMED_SETS[text]()
    try:
        if text.startswith("mod:"):
            modulus, residue = (int(v) for v in text[4:].split(","))
            return EventuallyPeriodicSet.residue_class(residue, modulus)
        if text.startswith("cofinite:"):
            return EventuallyPeriodicSet.cofinite_from(int(text[9:]))
    except ValueError as exc:
        raise UsageError(f"bad level set {text!r}: {exc}") from exc
    raise UsageError(f"unknown level set {text!r}; try even, odd, mod:m,r, or cofinite:k")


def _cmd_knaster_witness(args) -> tuple[dict, bool]:
    level_set = _parse_level_set(args.set)
    u1 = SimulatedUltrafilter.parse(args.u1)
    u2 = SimulatedUltrafilter.parse(args.u2)
    demo = demonstrate_distinct_orders(level_set, args.depth, u1, u2)
    report = {
        "inputs": {"set": args.set, "depth": args.depth, "u1": u1.label(), "u2": u2.label()},
        "witness": demo["witness"],
        "verdict_u1": demo["verdict_u1"],
        "verdict_u2": demo["verdict_u2"],
        "distinct": demo["distinct"],
    }
    return report, bool(demo["distinct"])


def _tails(length: int):
    for value in range(2**length):
        yield tuple((value >> (length - 1 - k)) & 1 for k in range(length))


def _cmd_orientation_decompose(args) -> tuple[dict, bool]:
    prefix = parse_word(args.prefix) if args.prefix else ()
    if len(prefix) != args.n:
        raise UsageError(f"--prefix must be a binary word of length {args.n}")
    composition = decompose_on_cylinder(args.n, prefix)
    depth = max(args.n + 4, 8)
    verified = all(
        apply_composition(composition, prefix + tail) == flip(args.n, prefix + tail)
        for tail in _tails(depth - args.n)
    )
    report = {
        "inputs": {"n": args.n, "prefix": list(prefix)},
        "composition": list(composition),
        "odd_length": len(composition) % 2 == 1,
        "verified_to_depth": depth,
        "verified": verified,
    }
    return report, verified and len(composition) % 2 == 1


def _cmd_orientation_reach(args) -> tuple[dict, bool]:
    src = parse_word(args.src) if args.src else ()
    tgt = parse_word(args.to) if args.to else ()
    result = reach_with_parity(src, tgt, args.parity, args.depth)
    image = {
        apply_composition(result.composition, result.source + tail)
        for tail in _tails(args.depth - len(result.source))
    }
    expected = {result.image + tail for tail in _tails(args.depth - len(result.image))}
    verified = image == expected
    report = {
        "inputs": {
            "from": list(src),
            "to": list(tgt),
            "parity": args.parity,
            "depth": args.depth,
        },
        "result": result.as_dict(),
        "verified": verified,
    }
    return report, verified


def _cmd_suite(args) -> tuple[dict, bool]:
    reports = acceptance.run_all(seed=args.seed)
    passed = all(rep["pass"] for rep in reports)
    if not args.timing:
        for rep in reports:
            rep.pop("elapsed_s", None)
    report = {"inputs": {"seed": args.seed}, "passed": passed, "criteria": reports}
    return report, passed


def _suite_lines(report: dict) -> list[str]:
    lines = []
    for rep in report["criteria"]:
        status = "PASS" if rep["pass"] else "FAIL"
        timing = f" ({rep['elapsed_s']:.2f}s)" if "elapsed_s" in rep else ""
        lines.append(f"{status} criterion {rep['criterion']:>2}: {rep['name']}{timing}")
    lines.append("all passed" if report["passed"] else "FAILURES above")
    return lines


# -- argument parsing ----------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chainorder",
        description="Chain-order experiments on chainable and circle-like continua.",
    )
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument(
        "--timing",
        action="store_true",
        help="include wall-clock fields (breaks byte-identical output)",
    )
    # Mirror the globals onto every subcommand (SUPPRESS so a subcommand
    # default never overrides a value given before the subcommand).
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    common.add_argument("--timing", action="store_true", default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    catalog = sub.add_parser("catalog", help="catalog registry queries", parents=[common])
    catalog_sub = catalog.add_subparsers(dest="subcommand", required=True)
    catalog_sub.add_parser("list", help="spaces, variants, witness points", parents=[common])

    compare = sub.add_parser("compare", help="compare two points in one space", parents=[common])
    compare.add_argument("--space", required=True, choices=sorted(_VARIANTS))
    compare.add_argument("--variant")
    compare.add_argument("--bits", help="binary prefix for s3, e.g. 011")
    compare.add_argument("--x", required=True, help="strand:param, or a rational on arc")
    compare.add_argument("--y", required=True)
    compare.add_argument("--depth", type=int, default=20)
    compare.add_argument("--trace-depth", type=int, default=8)
    compare.add_argument("--ultrafilter", help="residue tower, e.g. r2=0")

    orders = sub.add_parser(
        "orders-count", help="count distinct stabilized orders", parents=[common]
    )
    orders.add_argument("--space", required=True, choices=sorted(_VARIANTS))
    orders.add_argument("--depth", type=int, default=20)

    knaster = sub.add_parser(
        "knaster-witness", help="two-tower witness comparison", parents=[common]
    )
    knaster.add_argument("--set", required=True, help="even, odd, mod:m,r, or cofinite:k")
    knaster.add_argument("--depth", type=int, default=16)
    knaster.add_argument("--u1", required=True, help="residue tower, e.g. r2=0")
    knaster.add_argument("--u2", required=True, help="residue tower, e.g. r2=1")

    orientation = sub.add_parser(
        "orientation", help="tail-flip word combinatorics", parents=[common]
    )
    orient_sub = orientation.add_subparsers(dest="subcommand", required=True)
    decompose = orient_sub.add_parser(
        "decompose", help="odd composition fixing a cylinder", parents=[common]
    )
    decompose.add_argument("--n", type=int, required=True)
    decompose.add_argument("--prefix", default="", help="binary word of length n")
    reach = orient_sub.add_parser(
        "reach", help="parity-steered cylinder reach", parents=[common]
    )
    reach.add_argument("--from", dest="src", required=True, help="source prefix, e.g. 0")
    reach.add_argument("--to", required=True, help="target prefix, e.g. 11")
    reach.add_argument("--parity", choices=("even", "odd"), required=True)
    reach.add_argument("--depth", type=int, default=8)

    suite = sub.add_parser("suite", help="run every acceptance experiment", parents=[common])
    suite.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    started = time.perf_counter()
    lines = None
    try:
        if args.command == "catalog":
            experiment = "catalog-list"
            body, passed = _cmd_catalog_list(args)
        elif args.command == "compare":
            experiment = "compare"
            body, passed = _cmd_compare(args)
        elif args.command == "orders-count":
            experiment = "orders-count"
            body, passed = _cmd_orders_count(args)
        elif args.command == "knaster-witness":
            experiment = "knaster-witness"
            body, passed = _cmd_knaster_witness(args)
        elif args.command == "orientation":
            experiment = f"orientation-{args.subcommand}"
            if args.subcommand == "decompose":
                body, passed = _cmd_orientation_decompose(args)
            else:
                body, passed = _cmd_orientation_reach(args)
        else:
            experiment = "suite"
            body, passed = _cmd_suite(args)
            lines = _suite_lines(body)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    report = {"schema": SCHEMA, "experiment": experiment, "pass": passed}
    report.update(body)
    if args.timing:
        report["elapsed_s"] = round(time.perf_counter() - started, 4)
    _emit(report, args.format, experiment, lines)
    return 0 if passed else 1


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
