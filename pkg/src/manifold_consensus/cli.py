"""Command-line driver: run scenario files or presets, list presets, and
validate scenario documents without running them.

Exit codes: 0 success, 1 validation failure, 2 integrator abort.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .scenario import (
    Scenario,
    ScenarioError,
    parse_scenario,
    preset_scenario,
    presets,
    run,
    scenario_from_dict,
)

__all__ = ["main"]


def _apply_overrides(doc: dict, args) -> dict:
    doc = json.loads(json.dumps(doc))  # deep copy, keeps JSON types
    if args.seed is not None:
        doc["seed"] = args.seed
    if args.step_size is not None:
        doc.setdefault("integrator", {})["step_size"] = args.step_size
    if args.log_stride is not None:
        doc.setdefault("integrator", {})["log_stride"] = args.log_stride
    return doc


def _output_dir(sc: Scenario, args) -> str:
    if args.output_dir is not None:
        return args.output_dir
    return sc.document.get("output", {}).get("directory", "runs")


def _run_document(doc: dict, args) -> int:
    try:
        sc = scenario_from_dict(_apply_overrides(doc, args))
    except ScenarioError as exc:
        for err in exc.errors:
            print(f"error: {err}", file=sys.stderr)
        return 1
    result = run(sc, _output_dir(sc, args))
    status = "aborted" if result.exit_code == 2 else "ok"
    print(
        f"{sc.name}: {status} "
        f"(final t={result.summary['final_time']:g}, "
        f"sync_error={result.summary['final_metrics']['sync_error']:.3e}) "
        f"-> {result.summary_path.parent}"
    )
    if result.exit_code == 2:
        print(f"  abort reason: {result.trajectory.abort_reason}", file=sys.stderr)
    return result.exit_code


def _run_file(path: str, args) -> int:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return 1
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        print(
            f"error: {path}: line {exc.lineno} column {exc.colno}: {exc.msg}",
            file=sys.stderr,
        )
        return 1
    return _run_document(doc, args)


def _cmd_run(args) -> int:
    if args.jobs > 1 and len(args.scenario) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            codes = list(pool.map(_run_file_star, [(p, args) for p in args.scenario]))
        return max(codes)
    code = 0
    for path in args.scenario:
        code = max(code, _run_file(path, args))
    return code


def _run_file_star(pair) -> int:
    return _run_file(*pair)


def _cmd_preset(args) -> int:
    lib = presets()
    if args.name not in lib:
        print(
            f"error: unknown preset {args.name!r}; try 'list'",
            file=sys.stderr,
        )
        return 1
    return _run_document(lib[args.name], args)


def _cmd_list(_args) -> int:
    lib = presets()
    for name in sorted(lib):
        doc = lib[name]
        manifold = doc["manifold"]["kind"]
        flow = doc["flow"]["kind"]
        print(f"{name:32s} {manifold:10s} {flow:20s} N={doc['n_agents']}")
    return 0


def _cmd_validate(args) -> int:
    worst = 0
    for path in args.scenario:
        try:
            parse_scenario(Path(path).read_text())
        except OSError as exc:
            print(f"{path}: cannot read ({exc})", file=sys.stderr)
            worst = 1
            continue
        except ScenarioError as exc:
            print(f"{path}: INVALID", file=sys.stderr)
            for err in exc.errors:
                print(f"  {err}", file=sys.stderr)
            worst = 1
            continue
        print(f"{path}: OK")
    return worst


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="manifold-consensus",
        description="Scenario-driven simulator for consensus flows on the "
        "circle, SO(n) and Grassmann manifolds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_options(p):
        p.add_argument("--output-dir", default=None, help="artifact directory (default: runs)")
        p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
        p.add_argument("--step-size", type=float, default=None, help="override the integrator step")
        p.add_argument("--log-stride", type=int, default=None, help="override the logging stride")

    p_run = sub.add_parser("run", help="run one or more scenario files")
    p_run.add_argument("scenario", nargs="+", help="scenario JSON file(s)")
    p_run.add_argument("--jobs", type=int, default=1, help="run scenarios in parallel")
    add_run_options(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_preset = sub.add_parser("preset", help="run a named preset experiment")
    p_preset.add_argument("name")
    add_run_options(p_preset)
    p_preset.set_defaults(func=_cmd_preset)

    p_list = sub.add_parser("list", help="list preset experiments")
    p_list.set_defaults(func=_cmd_list)

    p_val = sub.add_parser("validate", help="validate scenario files without running")
    p_val.add_argument("scenario", nargs="+")
    p_val.set_defaults(func=_cmd_validate)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
