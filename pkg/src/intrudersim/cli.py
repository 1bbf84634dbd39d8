"""Command-line entry point.

Exit status: 0 on success, 1 for scenario/argument/input validation
problems, 2 for anything that fails at run time.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import analysis
from .engine import read_trace, run, write_trace
from .scenario import ScenarioError, load_scenario_file

log = logging.getLogger("intrudersim")

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}")


def _ids(text: str) -> list[str]:
    return [v.strip() for v in text.split(",") if v.strip()]


def cmd_simulate(args) -> int:
    scenario = load_scenario_file(args.scenario)
    if args.duration is not None:
        scenario = scenario.with_duration(args.duration)
    trace = run(scenario, frames_dir=args.frames)
    with open(args.out, "w", newline="") as fh:
        write_trace(trace, fh)
    log.info("wrote %d records to %s", len(trace), args.out)
    if trace.collisions:
        log.warning("%d collision events (motion clamped at contact)", len(trace.collisions))
    return EXIT_OK


def _load_trace(path):
    with open(path, newline="") as fh:
        return read_trace(fh)


def cmd_analyze_path(args) -> int:
    rows = analysis.path_metrics(_load_trace(args.trace), args.robot, args.times)
    with open(args.out, "w", newline="") as fh:
        analysis.write_path_metrics(rows, fh)
    return EXIT_OK


def cmd_analyze_follow(args) -> int:
    rows = analysis.follow_metrics(_load_trace(args.trace), args.followers, args.color, args.times)
    with open(args.out, "w", newline="") as fh:
        analysis.write_follow_metrics(rows, fh)
    return EXIT_OK


def cmd_plot(args) -> int:
    with open(args.metrics, newline="") as fh:
        rows = analysis.read_metrics(fh, args.kind)
    analysis.emit_plot(rows, args.kind, args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    s = load_scenario_file(args.scenario)
    print(f"ok: {len(s.robots)} robots, {len(s.intruders)} intruders, "
          f"{len(s.obstacles)} obstacles, {s.duration:g} s")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="intrudersim", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run a scenario and write the trace CSV")
    s.add_argument("--scenario", required=True, type=Path)
    s.add_argument("--out", required=True, type=Path)
    s.add_argument("--duration", type=float, help="override duration_s (seconds)")
    s.add_argument("--frames", type=Path, help="dump camera frames (PPM) into this directory")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("analyze-path", help="path metrics for one robot")
    s.add_argument("--trace", required=True, type=Path)
    s.add_argument("--robot", required=True)
    s.add_argument("--times", required=True, type=_floats)
    s.add_argument("--out", required=True, type=Path)
    s.set_defaults(func=cmd_analyze_path)

    s = sub.add_parser("analyze-follow", help="follower-to-intruder distances")
    s.add_argument("--trace", required=True, type=Path)
    s.add_argument("--followers", required=True, type=_ids)
    s.add_argument("--color", required=True, choices=["blue", "green"])
    s.add_argument("--times", required=True, type=_floats)
    s.add_argument("--out", required=True, type=Path)
    s.set_defaults(func=cmd_analyze_follow)

    s = sub.add_parser("plot", help="render a metrics CSV as SVG")
    s.add_argument("--metrics", required=True, type=Path)
    s.add_argument("--kind", required=True, choices=["path", "follow"])
    s.add_argument("--out", required=True, type=Path)
    s.set_defaults(func=cmd_plot)

    s = sub.add_parser("validate", help="check a scenario file")
    s.add_argument("--scenario", required=True, type=Path)
    s.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (ScenarioError, analysis.AnalysisError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001 - any other failure is a runtime error
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
