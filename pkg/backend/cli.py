"""
Command-line entry point.

Exit codes: 0 affirmative result, 1 negative result, 2 usage or input error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np
from pydantic import ValidationError

from config.settings import settings
from models.records import (
    DistributionRecord,
    HardyReportRecord,
    LPOutcomeRecord,
    SettingsRecord,
    SolutionRecord,
    StateRecord,
    SymmetricRecord,
    VertexSetRecord,
)
from nonlocality.exceptions import DegenerateX, NonlocalityException, NotEntangled
from nonlocality.hardy import GENUINE, STANDARD, hardy_conditions
from nonlocality.measure import born_distribution
from nonlocality.polytope import (
    BILOCAL_NS,
    FULLY_LOCAL,
    bilocal_ns_vertices,
    classify_detailed,
    deterministic_local_vertices,
    vertex_inequality_maxima,
)
from nonlocality.qstate import SymmetricState
from nonlocality.search import SearchConfig
from nonlocality.symmetric import scan_p_success, solve_auto, solve_settings
from services.experiment_service import experiment_service
from services.file_service import file_service

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2

VERTEX_TOL = 1e-12


class UsageError(Exception):
    """Raised when flags are missing or contradict each other"""

    pass


def parse_complex(text: str) -> complex:
    """'re,im' -> complex"""
    try:
        re_part, im_part = text.split(",")
        return complex(float(re_part), float(im_part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 're,im', got '{text}'")


def _print(record) -> None:
    print(record.model_dump_json(indent=2))


def _seed(args) -> int:
    return settings.SEED if args.seed is None else args.seed


def vars_for_manifest(args) -> dict:
    return {
        key: (complex_to_list(value) if isinstance(value, complex) else value)
        for key, value in vars(args).items()
        if key != "func"
    }


def complex_to_list(value: complex) -> List[float]:
    return [value.real, value.imag]


def cmd_distribution(args) -> int:
    state = file_service.read_record(args.state, StateRecord).to_state()
    measurement = file_service.read_record(args.settings, SettingsRecord).to_settings()
    record = DistributionRecord.from_distribution(born_distribution(state, measurement))

    out = file_service.write_record(args.out, record)
    outputs = [out]
    if args.csv:
        outputs.append(file_service.write_distribution_csv(args.csv, record))
    file_service.write_manifest(
        "distribution",
        {"state": args.state, "settings": args.settings},
        outputs=outputs,
        inputs=[args.state, args.settings],
    )
    return EXIT_OK


def cmd_hardy(args) -> int:
    if args.distribution:
        d = file_service.read_record(args.distribution, DistributionRecord).to_distribution()
        inputs = [args.distribution]
    elif args.state and args.settings:
        state = file_service.read_record(args.state, StateRecord).to_state()
        measurement = file_service.read_record(args.settings, SettingsRecord).to_settings()
        d = born_distribution(state, measurement)
        inputs = [args.state, args.settings]
    else:
        raise UsageError("hardy needs --distribution or both --state and --settings")

    report = hardy_conditions(
        d,
        pivot=args.pivot,
        eps_zero=args.eps_zero,
        delta_pos=args.delta_pos,
        variant=args.variant,
    )
    record = HardyReportRecord.from_report(report, d)
    _print(record)
    if args.out:
        out = file_service.write_record(args.out, record)
        file_service.write_manifest("hardy", vars_for_manifest(args), outputs=[out], inputs=inputs)
    return EXIT_OK if report.passed else EXIT_NEGATIVE


def _symmetric_state(args):
    if args.ghz:
        n, theta = int(args.ghz[0]), float(args.ghz[1])
        return SymmetricState.ghz(n, theta), f"ghz({theta:g})", []
    if args.w:
        return SymmetricState.w(args.w), "w", []
    if args.state:
        record = file_service.read_record(args.state, SymmetricRecord)
        return record.to_state(), Path(args.state).stem, [args.state]
    raise UsageError("symmetric needs one of --state, --ghz or --w")


def cmd_symmetric(args) -> int:
    s, state_id, inputs = _symmetric_state(args)
    solution = solve_auto(s) if args.x is None else solve_settings(s, args.x)
    record = SolutionRecord.from_solution(solution)
    _print(record)

    outputs = []
    if args.out:
        outputs.append(file_service.write_record(args.out, record))
    if args.sweep:
        moduli = np.linspace(args.sweep_min, args.sweep_max, args.sweep_steps)
        w = None if args.x is None else float(np.angle(args.x))
        rows = [
            (s.n, state_id, repr(modulus), repr(phase), repr(p))
            for modulus, phase, p in scan_p_success(s, moduli, w)
        ]
        outputs.append(
            file_service.write_csv(
                args.sweep, ("n", "theta_or_state_id", "abs_x", "arg_x", "p_success"), rows
            )
        )
    if outputs:
        file_service.write_manifest(
            "symmetric", vars_for_manifest(args), outputs=outputs, inputs=inputs
        )
    return EXIT_OK


def cmd_classify(args) -> int:
    d = file_service.read_record(args.distribution, DistributionRecord).to_distribution()
    label, outcome = classify_detailed(d)
    print(
        json.dumps(
            {"label": label.value, "outcome": LPOutcomeRecord.from_outcome(outcome).model_dump()},
            indent=2,
        )
    )
    return EXIT_OK


def cmd_experiment(args) -> int:
    seed = _seed(args)
    cfg = SearchConfig(
        multistarts=args.multistarts or settings.SEARCH_MULTISTARTS,
        max_iters=args.max_iters or settings.SEARCH_MAX_ITERS,
        seed=seed,
    )
    summary, csv_path, _ = experiment_service.run(
        args.n,
        args.count,
        seed,
        args.out,
        cfg=cfg,
        lp_subsample=args.lp_subsample,
        jobs=args.jobs,
        progress=args.progress,
    )
    print(
        f"n={summary.n}: {summary.passed}/{summary.count} passed, "
        f"{summary.lp_infeasible}/{summary.lp_checked} LP-infeasible -> {csv_path}"
    )
    return EXIT_OK


def cmd_vertices(args) -> int:
    if args.model == FULLY_LOCAL:
        vs = deterministic_local_vertices(args.n)
    else:
        if args.n != 3:
            raise UsageError("bilocal-ns vertex sets exist for n=3 only")
        vs = bilocal_ns_vertices()
    out = file_service.write_record(args.out, VertexSetRecord.from_vertex_set(vs))
    file_service.write_manifest("vertices", vars_for_manifest(args), outputs=[out])
    print(f"{len(vs)} {vs.model} columns -> {out}")
    return EXIT_OK


def cmd_vertex_check(args) -> int:
    maxima = vertex_inequality_maxima()
    holds = max(maxima.values()) <= VERTEX_TOL
    print(json.dumps({"vertex_count": len(bilocal_ns_vertices()), "maxima": maxima, "holds": holds}, indent=2))
    return EXIT_OK if holds else EXIT_NEGATIVE


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run(
        "main:app",
        host=args.host or settings.HOST,
        port=args.port or settings.PORT,
        log_level=settings.LOG_LEVEL.lower(),
        reload=settings.DEBUG,
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nonlocality",
        description="Hardy-type tests of genuine multipartite nonlocality",
    )
    parser.add_argument("--log-level", default=None, help="overrides NONLOC_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distribution", help="Born-rule table of a state under settings")
    p.add_argument("--state", required=True)
    p.add_argument("--settings", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--csv", help="also write the table in long CSV form")
    p.set_defaults(func=cmd_distribution)

    p = sub.add_parser("hardy", help="evaluate the Hardy conditions and both inequalities")
    p.add_argument("--distribution")
    p.add_argument("--state")
    p.add_argument("--settings")
    p.add_argument("--pivot", type=int, default=1)
    p.add_argument("--eps-zero", type=float, default=None)
    p.add_argument("--delta-pos", type=float, default=None)
    p.add_argument("--variant", choices=(GENUINE, STANDARD), default=GENUINE)
    p.add_argument("--out")
    p.set_defaults(func=cmd_hardy)

    p = sub.add_parser("symmetric", help="closed-form settings for a symmetric state")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--state", help="symmetric state file")
    group.add_argument("--ghz", nargs=2, metavar=("N", "THETA"))
    group.add_argument("--w", type=int, metavar="N")
    p.add_argument("--x", type=parse_complex, default=None, help="shared parameter as 're,im'")
    p.add_argument("--out")
    p.add_argument("--sweep", help="CSV of p_success over a grid of |x|")
    p.add_argument("--sweep-min", type=float, default=0.1)
    p.add_argument("--sweep-max", type=float, default=3.0)
    p.add_argument("--sweep-steps", type=int, default=30)
    p.set_defaults(func=cmd_symmetric)

    p = sub.add_parser("classify", help="LP classification of a three-party distribution")
    p.add_argument("--distribution", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("experiment", help="random-state Hardy experiment")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=None, help="falls back to NONLOC_SEED")
    p.add_argument("--lp-subsample", type=int, default=None)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--progress", action="store_true", default=settings.PROGRESS)
    p.add_argument("--multistarts", type=int, default=None)
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--out", default="experiment.csv")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("vertices", help="dump a vertex set")
    p.add_argument("--model", choices=(FULLY_LOCAL, BILOCAL_NS), default=BILOCAL_NS)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_vertices)

    p = sub.add_parser("verify-appendix", help="check both inequalities on every bilocal vertex")
    p.set_defaults(func=cmd_vertex_check)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_OK
    logging.basicConfig(level=args.log_level or settings.LOG_LEVEL)

    try:
        return args.func(args)
    except (NotEntangled, DegenerateX) as e:
        logger.error(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NEGATIVE
    except (NonlocalityException, UsageError) as e:
        logger.error(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except (json.JSONDecodeError, ValidationError, OSError, ValueError) as e:
        logger.error(f"{args.command}: cannot read input: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
