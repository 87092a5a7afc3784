"""Command line entry point: ``dynlie classify|check|tables``."""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .hamiltonian import EnergyOrderError, LengthMismatchError, SystemSpecError
from .pipeline import (
    DEFAULT_SECTIONS,
    InputFormatError,
    RunConfig,
    emit_tables,
    parse_system_file,
    render_text,
    run_pipeline,
    to_json,
)
from .tables import Family, build_table, dump_table

EXIT_OK = 0
EXIT_USAGE = 2  # argparse's own code
EXIT_INPUT = 3
EXIT_LENGTH = 4
EXIT_ORDER = 5
EXIT_SPEC = 6
EXIT_NUMERIC = 7

FAMILIES = {"su": Family.SU, "so_odd": Family.SO_ODD, "sp": Family.SP, "so_even": Family.SO_EVEN}


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, InputFormatError):
        return EXIT_INPUT
    if isinstance(exc, LengthMismatchError):
        return EXIT_LENGTH
    if isinstance(exc, EnergyOrderError):
        return EXIT_ORDER
    if isinstance(exc, SystemSpecError):
        return EXIT_SPEC
    return EXIT_NUMERIC


def _run_one(path: str, config: RunConfig) -> tuple[int, dict]:
    try:
        spec = parse_system_file(path, config.tolerance)
        return EXIT_OK, run_pipeline(spec, config, source=path)
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        code = exit_code_for(exc)
        return code, {"input": path, "error": {"code": code, "type": type(exc).__name__,
                                               "message": str(exc)}}


def _emit(results, config: RunConfig, batch: bool) -> int:
    reports = [r for _, r in results]
    if config.format == "json":
        print(to_json(reports if batch else reports[0]))
    else:
        blocks = []
        for r in reports:
            if "error" in r:
                blocks.append(f"system: {r['input']}\n  error {r['error']['code']}: "
                              f"{r['error']['message']}")
            else:
                blocks.append(render_text(r))
        print("\n\n".join(blocks))
    return next((code for code, _ in results if code), EXIT_OK)


def _config(args, sections) -> RunConfig:
    return RunConfig(
        inputs=tuple(args.files),
        tolerance=args.tolerance,
        max_dim=args.max_dim,
        format=args.format,
        full=args.full,
        sections=frozenset(sections),
    )


def cmd_classify(args) -> int:
    sections = set(DEFAULT_SECTIONS)
    if args.tables:
        sections.add("tables")
    if args.no_descents:
        sections.discard("descents")
    config = _config(args, sections)
    if args.jobs > 1 and len(args.files) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_run_one, args.files, [config] * len(args.files)))
    else:
        results = [_run_one(f, config) for f in args.files]
    return _emit(results, config, batch=len(args.files) > 1)


def cmd_check(args) -> int:
    config = _config(args, {"criteria", "descents"})
    return _emit([_run_one(f, config) for f in args.files], config, batch=len(args.files) > 1)


def cmd_tables(args) -> int:
    family = FAMILIES[args.family.lower()]
    try:
        if args.output:
            emit_tables(family, args.rank, args.output)
        else:
            dump_table(build_table(family, args.rank), sys.stdout)
            sys.stdout.write("\n")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    return EXIT_OK


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynlie",
        description="Dynamical Lie algebras of N-level ladder systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("files", nargs="+", help="system description JSON files")
    common.add_argument("--tolerance", type=_positive_float, default=None,
                        help="override the relative tolerance of every input")
    common.add_argument("--max-dim", type=int, default=None,
                        help="stop the closure once it reaches this dimension")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--full", action="store_true", help="include matrices in the report")

    p = sub.add_parser("classify", parents=[common], help="closure, criteria and classification")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for batches")
    p.add_argument("--tables", action="store_true", help="list the matching generator table")
    p.add_argument("--no-descents", action="store_true", help="omit descent traces")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("check", parents=[common], help="criteria only, no closure")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("tables", help="export a generator table as JSON")
    p.add_argument("family", choices=sorted(FAMILIES), type=str.lower)
    p.add_argument("rank", type=int, help="l for so/sp families, N for su")
    p.add_argument("-o", "--output", help="write to this file instead of stdout")
    p.set_defaults(func=cmd_tables)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
