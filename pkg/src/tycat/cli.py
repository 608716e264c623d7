"""Command-line interface.

Exit codes: 0 on success, 1 when a verification fails (including data the
normalization pipeline rejects), 2 for unreadable or invalid input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from .bicharacter import Bicharacter
from .construct import Sign, construct_standard, from_json
from .continuum import make_grid, verify_continuum
from .errors import InconsistencyError, PreconditionError, TYError
from .groups import GroupSpec
from .normalize import GaugeTransform, apply_gauge, classify_all, normalize, random_gauge
from .pentagon import DEFAULT_TOL, verify_all

TOLERANCE_ENV = "TYCAT_TOLERANCE"


class _UsageError(Exception):
    pass


def _orders(tokens: Sequence[str]) -> GroupSpec:
    values = []
    for tok in tokens:
        values += [t for t in tok.replace(",", " ").split()]
    try:
        return GroupSpec(tuple(int(v) for v in values))
    except ValueError as exc:
        raise _UsageError(f"bad --orders: {exc}") from exc


def _bichar(spec: GroupSpec, text: str | None) -> Bicharacter:
    """``"1"``, ``"1,0;0,1"`` or a JSON matrix; the identity matrix when omitted."""
    if text is None:
        rows = [[int(i == j) for j in range(spec.rank)] for i in range(spec.rank)]
    elif text.strip().startswith("["):
        try:
            rows = json.loads(text)
        except json.JSONDecodeError as exc:
            raise _UsageError(f"bad --bichar: {exc}") from exc
    else:
        try:
            rows = [[int(v) for v in row.split(",")] for row in text.split(";") if row.strip()]
        except ValueError as exc:
            raise _UsageError(f"bad --bichar: {text!r}") from exc
    return Bicharacter(spec, tuple(tuple(r) for r in rows))


def _sign(text: str) -> Sign:
    try:
        return Sign(int(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"sign must be +1 or -1, got {text!r}") from None


def _tolerance(args: argparse.Namespace) -> float:
    if args.tolerance is not None:
        return args.tolerance
    env = os.environ.get(TOLERANCE_ENV)
    if env is None:
        return DEFAULT_TOL
    try:
        return float(env)
    except ValueError as exc:
        raise _UsageError(f"{TOLERANCE_ENV}={env!r} is not a number") from exc


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if out is None:
        print(text)
        return
    try:
        Path(out).write_text(text + "\n")
    except OSError as exc:
        raise _UsageError(f"cannot write {out}: {exc}") from exc


def cmd_construct(args: argparse.Namespace) -> int:
    spec = _orders(args.orders)
    data = construct_standard(spec, _bichar(spec, args.bichar), args.sign)
    _emit(data.to_json(), args.out)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    data = from_json(_read(args.file), strict=False)
    report = verify_all(data, _tolerance(args), composition=not args.skip_composition)
    print(report.to_json())
    return 0 if report.passed else 1


def cmd_gauge(args: argparse.Namespace) -> int:
    data = from_json(_read(args.file))
    if args.gauge is not None:
        g = GaugeTransform.from_json(_read(args.gauge))
    else:
        g = random_gauge(data.spec, args.seed, args.den)
    _emit(apply_gauge(data, g).to_json(), args.out)
    return 0


def cmd_normalize(args: argparse.Namespace) -> int:
    data = from_json(_read(args.file), strict=False)
    try:
        result = normalize(data, _tolerance(args))
    except (PreconditionError, InconsistencyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(result.to_json())
    return 0


def cmd_classify(args: argparse.Namespace) -> int:
    spec = _orders(args.orders)
    classes = classify_all(spec)
    doc = {"orders": list(spec.orders), "count": len(classes), "classes": [c.to_dict() for c in classes]}
    print(json.dumps(doc, indent=2))
    return 0


def cmd_continuum(args: argparse.Namespace) -> int:
    grid = make_grid(args.size, args.param)
    report = verify_continuum(grid, args.sign, _tolerance(args))
    print(report.to_json())
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tycat", description="Tambara-Yamagami associator data toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def tolerance_flag(p: argparse.ArgumentParser) -> None:
        p.add_argument("--tolerance", type=float, default=None,
                       help=f"float tolerance (default {DEFAULT_TOL}, or ${TOLERANCE_ENV})")

    p = sub.add_parser("construct", help="write standard data for (G, chi, sign)")
    p.add_argument("--orders", nargs="*", required=True, help="cyclic orders, e.g. '2 4' or '2,4'; empty for trivial G")
    p.add_argument("--bichar", help="matrix M: '1', '1,0;0,1' or JSON (default: identity)")
    p.add_argument("--sign", type=_sign, default=Sign.PLUS)
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check the pentagon and unit conditions")
    p.add_argument("file")
    p.add_argument("--skip-composition", action="store_true", help="omit the composition oracle")
    tolerance_flag(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gauge", help="apply a seeded random or stored gauge")
    p.add_argument("file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--seed", type=int)
    group.add_argument("--gauge", help="gauge JSON file")
    p.add_argument("--den", type=int, default=12, help="denominator of random gauge phases")
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_gauge)

    p = sub.add_parser("normalize", help="gauge to normal form and print (chi, sign)")
    p.add_argument("file")
    tolerance_flag(p)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("classify", help="list equivalence classes for a group")
    p.add_argument("--orders", nargs="*", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("continuum", help="verify the sampled real-line category")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--param", type=float, required=True)
    p.add_argument("--sign", type=_sign, default=Sign.PLUS)
    tolerance_flag(p)
    p.set_defaults(func=cmd_continuum)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (_UsageError, TYError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
