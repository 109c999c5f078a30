"""Command-line front end.

Usage::

    memlogic [CONFIG] SUBCOMMAND [options]

The optional leading positional is a flat-key config file; command-line
overrides win over config values, and the ``MEMLOGIC_OUTPUT_DIR`` environment
variable overrides the configured output directory (but not an explicit
``--output``).  The exit code is 0 only when the run saw zero logical
failures and zero experiment errors, so scripts can gate on correctness.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .analysis import (
    export_characterization,
    export_logic_result,
    export_scouting_result,
    export_sweep,
    export_table,
    non_switching_report,
    run_1t1r_experiment,
    run_characterization,
    run_scouting_experiment,
    sweep_parameter,
)
from .config import AppConfig, ConfigError, load_config
from .device import PRESETS, default_boundary, preset
from .logic1t1r import (
    CASE_TABLE,
    default_gate_library,
    evaluate_mapping,
    load_gate_library,
    save_gate_library,
    synthesize_mapping,
    truth_table_of,
)
from .scouting import REFERENCE_PRESETS

SUBCOMMANDS = ("characterize", "gate", "synthesize", "scouting", "sweep", "cases")

OUTPUT_DIR_ENV = "MEMLOGIC_OUTPUT_DIR"


def _ua(amps: float) -> str:
    return f"{amps * 1e6:.2f} µA"


def _kohm(ohms: float) -> str:
    return f"{ohms / 1e3:.2f} kΩ"


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, help="override the experiment seed")
    parser.add_argument("--cycles", type=int, help="override the cycle count")
    parser.add_argument("--preset", choices=sorted(PRESETS),
                        help="device parameter preset")
    parser.add_argument("-o", "--output", help="output directory for exports")
    parser.add_argument("--format", choices=("csv", "json"), help="export format")
    parser.add_argument("--parallel", action="store_true",
                        help="run independent experiment blocks on threads")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="memlogic",
        description="Behavioral 1T1R in-memory logic simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("characterize", help="cycle cells and summarize both states")
    p.add_argument("--cells", type=int, default=10)
    _common_flags(p)

    p = sub.add_parser("gate", help="run gate experiments and print truth tables")
    p.add_argument("names", nargs="+", help="gate names (built-in or from --library)")
    p.add_argument("--library", help="gate library file (name,g,te,be,i rows)")
    _common_flags(p)

    p = sub.add_parser("synthesize", help="synthesize mappings for all 16 truth tables")
    _common_flags(p)

    p = sub.add_parser("scouting", help="run scouting-logic experiments")
    p.add_argument("ops", nargs="*", default=[], help="read / or / and / xor")
    p.add_argument("--n", type=int, default=2, help="number of input cells")
    p.add_argument("--refs", default=None,
                   help="'placed' or a reference preset (%s)" %
                        "/".join(sorted(set(REFERENCE_PRESETS))))
    _common_flags(p)

    p = sub.add_parser("sweep", help="sweep one device parameter")
    p.add_argument("parameter", help="a device parameter field name")
    p.add_argument("--start", type=float)
    p.add_argument("--stop", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--values", help="comma-separated explicit values")
    _common_flags(p)

    p = sub.add_parser("cases", help="print the 16-row input case table")
    _common_flags(p)
    return parser


def _apply_overrides(app: AppConfig, args: argparse.Namespace) -> AppConfig:
    exp = app.experiment
    if getattr(args, "preset", None):
        exp = exp.replace(device=preset(args.preset))
    if getattr(args, "seed", None) is not None:
        exp = exp.replace(seed=args.seed)
    if getattr(args, "cycles", None) is not None:
        exp = exp.replace(cycles=args.cycles)
    if getattr(args, "parallel", False):
        exp = exp.replace(parallel=True)
    output_dir = app.output_dir
    if os.environ.get(OUTPUT_DIR_ENV):
        output_dir = os.environ[OUTPUT_DIR_ENV]
    if getattr(args, "output", None):
        output_dir = args.output
    fmt = args.format if getattr(args, "format", None) else app.format
    return AppConfig(experiment=exp, output_dir=output_dir, format=fmt)


def _exit_code(failures: int, errors: int) -> int:
    return 0 if failures == 0 and errors == 0 else 1


def cmd_characterize(app: AppConfig, args: argparse.Namespace) -> int:
    exp = app.experiment
    result = run_characterization(exp.device, exp.transistor, cells=args.cells,
                                  cycles=exp.cycles, seed=exp.seed,
                                  parallel=exp.parallel)
    paths = export_characterization(result, app.output_dir, app.format)
    for s in result.summaries[:2]:
        print(f"{s.label}: n={s.count} median={_kohm(s.median)} "
              f"p1={_kohm(s.p1)} p99={_kohm(s.p99)}")
    print(f"mean HRS/LRS ratio: {result.hrs_lrs_ratio:.2f}")
    print(f"log-space spread: lrs={result.lrs_log_spread:.4f} "
          f"hrs={result.hrs_log_spread:.4f}")
    print("wrote:", ", ".join(str(p) for p in paths))
    return 0


def _resolve_library(args: argparse.Namespace):
    library = default_gate_library()
    if getattr(args, "library", None):
        library.update(load_gate_library(args.library))
    return library


def cmd_gate(app: AppConfig, args: argparse.Namespace) -> int:
    library = _resolve_library(args)
    for name in args.names:
        if name.upper() not in library and name not in library:
            print(f"unknown gate {name!r}; available: {', '.join(sorted(library))}",
                  file=sys.stderr)
            return 2
    exp = app.experiment.replace(gates=tuple(args.names))
    result = run_1t1r_experiment(exp, library=library)
    for bucket in result.report.buckets:
        gate_name, combo = bucket.label.split("/")
        mapping = library[gate_name.upper() if gate_name.upper() in library else gate_name]
        expected = evaluate_mapping(mapping, int(combo[0]), int(combo[1])).output
        print(f"{gate_name} p={combo[0]} q={combo[1]} -> {expected}  "
              f"failures {bucket.failures}/{bucket.trials} errors {bucket.errors}")
    boundary = default_boundary(exp.device)
    for case in non_switching_report(result.rows, boundary):
        print(f"non-switching case {case.case_id}: n={case.count} "
              f"binary_changes={case.binary_changes} "
              f"log_variation={case.log_variation:.4f}")
    paths = export_logic_result(result, app.output_dir, app.format)
    print("wrote:", ", ".join(str(p) for p in paths))
    return _exit_code(result.report.failures, result.report.errors)


def cmd_synthesize(app: AppConfig, args: argparse.Namespace) -> int:
    mappings = [synthesize_mapping(format(n, "04b")) for n in range(16)]
    out_dir = Path(app.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "gates_synthesized.csv"
    save_gate_library(mappings, path)
    bad = 0
    for m in mappings:
        ok = truth_table_of(m) == m.name[1:]
        bad += 0 if ok else 1
        print(f"{m.name}: g={m.g.value} te={m.te.value} be={m.be.value} "
              f"i={m.i.value}  {'ok' if ok else 'INVALID'}")
    print("wrote:", path)
    return _exit_code(bad, 0)


def cmd_scouting(app: AppConfig, args: argparse.Namespace) -> int:
    exp = app.experiment
    if args.ops:
        exp = exp.replace(scouting_ops=tuple(op.lower() for op in args.ops))
    if args.refs:
        exp = exp.replace(refs=args.refs)
    exp = exp.replace(n_inputs=args.n)
    result = run_scouting_experiment(exp)
    if result.refs is not None:
        print(f"references: read={_ua(result.refs.i_read)} "
              f"or={_ua(result.refs.i_or)} and={_ua(result.refs.i_and)} "
              f"({result.refs.i_read!r}, {result.refs.i_or!r}, "
              f"{result.refs.i_and!r} A)")
    if result.thresholds is not None:
        levels = ", ".join(_ua(t) for t in result.thresholds.thresholds)
        print(f"popcount thresholds (n={result.thresholds.n}): {levels}")
    if result.overlap is not None:
        print(f"overlap: {result.overlap}")
    for bucket in result.report.buckets:
        print(f"{bucket.label}: failures {bucket.failures}/{bucket.trials}")
    for m in result.margins:
        print(f"gap {m.gap}: [{_ua(m.lower_max_a)}, {_ua(m.upper_min_a)}] "
              f"margin {m.margin:.3f}")
    paths = export_scouting_result(result, app.output_dir, app.format)
    print("wrote:", ", ".join(str(p) for p in paths))
    overlap_failures = 1 if result.overlap is not None else 0
    return _exit_code(result.report.failures + overlap_failures,
                      result.report.errors)


def cmd_sweep(app: AppConfig, args: argparse.Namespace) -> int:
    if args.values:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    elif args.start is not None and args.stop is not None and args.steps:
        if args.steps < 1:
            print("sweep needs --steps >= 1", file=sys.stderr)
            return 2
        values = list(np.linspace(args.start, args.stop, args.steps))
    else:
        print("sweep needs --values or --start/--stop/--steps", file=sys.stderr)
        return 2
    if not values:
        print("sweep range is empty", file=sys.stderr)
        return 2
    try:
        points = sweep_parameter(app.experiment, args.parameter, values)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    for pt in points:
        print(f"{pt.parameter}={pt.value:.4g}: logic {pt.logic_failures}/"
              f"{pt.logic_trials} scouting {pt.scouting_failures}/"
              f"{pt.scouting_trials} overlap={int(pt.overlap)} "
              f"min_margin={pt.min_margin:.3f}")
    path = export_sweep(points, app.output_dir, app.format)
    print("wrote:", path)
    failures = sum(p.logic_failures + p.scouting_failures for p in points)
    errors = sum(p.logic_errors for p in points) + sum(int(p.overlap) for p in points)
    return _exit_code(failures, errors)


def cmd_cases(app: AppConfig, args: argparse.Namespace) -> int:
    rows = []
    print("case  g te be i  te-be  process  possible")
    for case in CASE_TABLE:
        process = case.process if case.process else "/"
        possible = "yes" if case.possible else ("no" if case.process else "/")
        print(f"{case.case_id:>4}  {case.g} {case.te}  {case.be} {case.i}  "
              f"{case.te_minus_be:>5}  {process:<7}  {possible}")
        rows.append({"case_id": case.case_id, "g": case.g, "te": case.te,
                     "be": case.be, "i": case.i, "te_minus_be": case.te_minus_be,
                     "process": process, "possible": int(case.possible)})
    path = export_table("cases", rows, app.output_dir, app.format)
    print("wrote:", path)
    return 0


_COMMANDS = {
    "characterize": cmd_characterize,
    "gate": cmd_gate,
    "synthesize": cmd_synthesize,
    "scouting": cmd_scouting,
    "sweep": cmd_sweep,
    "cases": cmd_cases,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    config_path = None
    if argv and not argv[0].startswith("-") and argv[0] not in SUBCOMMANDS:
        config_path = argv.pop(0)
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        app = load_config(config_path) if config_path else AppConfig()
    except (ConfigError, OSError) as exc:
        print(str(exc), file=sys.stderr)
        return 2
    try:
        app = _apply_overrides(app, args)
        return _COMMANDS[args.command](app, args)
    except (ConfigError, KeyError, ValueError) as exc:
        message = exc.args[0] if exc.args else str(exc)
        print(str(message), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
