#!/usr/bin/env python3
#
# Copyright (c) 2024-2025
#
# SPDX-License-Identifier: BSD 2-Clause License
#

"""
Krein Boundary Toolkit
======================

Command-line front end: seeded instance generation, verification suites and
thin wrappers around the Weyl family, the classifier and the equivalence
report.

Usage:
    python backend/main.py gen symmetric --dim 4 --seed 7 -o data/sym.json
    python backend/main.py verify all -i data/sym.json
    python backend/main.py verify equivalence -i a.json -i b.json
    python backend/main.py verify all --kind flt --dim 3 --instances 50 --seed 0
    python backend/main.py weyl -i data/sym.json --lam 1+2i
    python backend/main.py classify -i data/sym.json
    python backend/main.py equiv -i a.json -i b.json --grid "i,2i,1+i"

Exit codes:
    0  every check passed
    1  a check failed (or the pair is not isometric)
    2  usage error or unreadable instance file
"""

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional

from loguru import logger
from pydantic import ValidationError

from config.settings import CAMPAIGN_WORKERS, LOG_LEVEL, default_grid, default_tol, parse_complex, parse_grid
from core.errors import ArgumentError, InstanceFormatError, KreinToolkitError
from core.linalg import Tol
from services.boundary import classify
from services.equivalence import compare_triples
from services.generators import KINDS, Instance, random_instance
from services.suites import SUITE_NAMES, SuiteReport, run_suite
from services.weyl import weyl_at
from transports.instance.codec import (
    InstanceFile,
    encode_report,
    encode_weyl,
    read_instance_file,
    write_instance,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


# =============================================================================
# Helpers
# =============================================================================


def configure_logging(level: str = LOG_LEVEL) -> None:
    logger.remove()
    logger.add(sys.stderr, level=level)


def build_tol(args: argparse.Namespace, base: Optional[Tol] = None) -> Tol:
    """Tolerances from the file (or the environment), overridden by the flags."""
    values = (base or default_tol()).model_dump()
    overrides = {"rank_rtol": args.tol_rank, "residual_atol": args.tol_res, "angle_atol": args.tol_angle}
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return Tol(**values)
    except ValidationError as e:
        raise ArgumentError(f"invalid tolerances: {e.errors()[0]['msg']}") from e


def build_grid(args: argparse.Namespace) -> List[complex]:
    return parse_grid(args.grid) if args.grid else default_grid()


def emit(payload, out_path: Optional[str]) -> None:
    text = json.dumps(payload, indent=2)
    if out_path:
        Path(out_path).parent.mkdir(parents=True, exist_ok=True)
        Path(out_path).write_text(text + "\n", encoding="utf-8")
        logger.info(f"Report written to {out_path}")
    else:
        print(text)


def load_inputs(paths: Optional[List[str]], count: Optional[int] = None) -> List[InstanceFile]:
    paths = paths or []
    if not paths:
        raise ArgumentError("an instance file is required (-i)")
    if count is not None and len(paths) != count:
        raise ArgumentError(f"expected {count} instance file(s), got {len(paths)}")
    if len(paths) > 2:
        raise ArgumentError("at most two instance files")
    return [read_instance_file(p) for p in paths]


# =============================================================================
# Commands
# =============================================================================


def cmd_gen(args: argparse.Namespace) -> int:
    instance = random_instance(args.kind, args.dim, args.seed)
    tol = build_tol(args)
    if args.output:
        write_instance(args.output, instance, tol)
        logger.info(f"{args.kind} instance (dim={args.dim}, seed={args.seed}) written to {args.output}")
    else:
        print(InstanceFile.from_instance(instance, tol).model_dump_json(indent=1))
    return EXIT_OK


def _campaign(args: argparse.Namespace, tol: Tol, grid: List[complex]) -> int:
    if args.kind is None:
        raise ArgumentError("--instances needs --kind")
    seeds = range(args.seed, args.seed + args.instances)

    def one(seed: int) -> dict:
        label = f"{args.kind}/{args.dim}/{seed}"
        try:
            report = run_suite(args.suite, random_instance(args.kind, args.dim, seed), grid, tol, label=label)
        except KreinToolkitError as e:
            logger.error(f"{label}: {type(e).__name__}: {e}")
            return {"instance": label, "passed": False, "max_residual": None, "error": str(e)}
        failed = [c.check for c in report.checks if not c.passed]
        return {"instance": label, "passed": report.passed, "max_residual": report.max_residual, "failed": failed}

    with ThreadPoolExecutor(max_workers=CAMPAIGN_WORKERS) as pool:
        results = list(pool.map(one, seeds))
    passed = all(r["passed"] for r in results)
    residuals = [r["max_residual"] for r in results if r["max_residual"] is not None]
    emit(
        {
            "suite": args.suite,
            "kind": args.kind,
            "dim": args.dim,
            "instances": len(results),
            "passed": passed,
            "max_residual": max(residuals, default=0.0),
            "results": results,
        },
        args.output,
    )
    return EXIT_OK if passed else EXIT_FAIL


def cmd_verify(args: argparse.Namespace) -> int:
    grid = build_grid(args)
    if args.instances:
        return _campaign(args, build_tol(args), grid)
    files = load_inputs(args.input)
    tol = build_tol(args, files[0].tol)
    instances: List[Instance] = [f.to_instance() for f in files]
    other = instances[1] if len(instances) == 2 else None
    if other is not None and args.suite not in ("equivalence", "all"):
        raise ArgumentError("a second instance is only used by the equivalence suite")
    report: SuiteReport = run_suite(args.suite, instances[0], grid, tol, other=other, label=args.input[0])
    emit(encode_report(report), args.output)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_weyl(args: argparse.Namespace) -> int:
    (file,) = load_inputs(args.input, count=1)
    tol = build_tol(args, file.tol)
    sample = weyl_at(file.to_instance().bp, parse_complex(args.lam), tol)
    emit(encode_weyl(sample), args.output)
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    (file,) = load_inputs(args.input, count=1)
    tol = build_tol(args, file.tol)
    flags = classify(file.to_instance().bp, tol)
    emit(flags.model_dump(), args.output)
    return EXIT_OK


def cmd_equiv(args: argparse.Namespace) -> int:
    first, second = load_inputs(args.input, count=2)
    tol = build_tol(args, first.tol)
    report = compare_triples(first.to_instance().bp, second.to_instance().bp, build_grid(args), tol=tol)
    emit(encode_report(report), args.output)
    return EXIT_OK


# =============================================================================
# Argument parsing
# =============================================================================


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", help='spectral grid, e.g. "i,-i,1+2i" (default: WEYL_GRID)')
    common.add_argument("--tol-rank", type=float, help="relative singular-value cutoff")
    common.add_argument("--tol-res", type=float, help="absolute residual threshold")
    common.add_argument("--tol-angle", type=float, help="principal-angle threshold")
    common.add_argument("-o", "--output", help="write the result here instead of stdout")
    common.add_argument("-i", "--input", action="append", help="instance file (repeatable)")

    parser = argparse.ArgumentParser(description="Boundary pairs, Weyl families and their identities")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", parents=[common], help="generate a seeded instance")
    gen.add_argument("kind", choices=KINDS)
    gen.add_argument("--dim", type=int, default=4)
    gen.add_argument("--seed", type=int, default=0)
    gen.set_defaults(handler=cmd_gen)

    verify = sub.add_parser("verify", parents=[common], help="run a verification suite")
    verify.add_argument("suite", choices=SUITE_NAMES)
    verify.add_argument("--instances", type=int, default=0, help="run a seeded in-memory campaign")
    verify.add_argument("--kind", choices=KINDS, help="instance kind of the campaign")
    verify.add_argument("--dim", type=int, default=4)
    verify.add_argument("--seed", type=int, default=0)
    verify.set_defaults(handler=cmd_verify)

    weyl = sub.add_parser("weyl", parents=[common], help="Weyl family at one point")
    weyl.add_argument("--lam", default="i")
    weyl.set_defaults(handler=cmd_weyl)

    classify_cmd = sub.add_parser("classify", parents=[common], help="boundary pair ladder flags")
    classify_cmd.set_defaults(handler=cmd_classify)

    equiv = sub.add_parser("equiv", parents=[common], help="compare two boundary pairs")
    equiv.set_defaults(handler=cmd_equiv)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    configure_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (InstanceFormatError, ArgumentError) as e:
        logger.error(f"Error: {e}")
        return EXIT_USAGE
    except KreinToolkitError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_FAIL


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logger.info("Interrupted")
        sys.exit(EXIT_FAIL)
