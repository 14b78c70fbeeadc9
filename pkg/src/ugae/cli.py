"""Command line entry point: ``ugae {schedule,analyze,advantage,pathworld,bench}``.

All numeric output is CSV (header row, LF line endings).  Exit status is 0
on success, 1 on invalid input and 2 on I/O failure.  A relative
``--output`` path is resolved under ``$UGAE_OUTPUT_DIR`` when that is set.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from pathlib import Path
from typing import Sequence

from . import analysis, bench, pathworld
from .advantage import Trajectory, ugae
from .descriptor import parse_descriptor, read_descriptor_file

OUTPUT_DIR_ENV = "UGAE_OUTPUT_DIR"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _resolve(path) -> Path:
    path = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def _emit(text: str, output) -> None:
    if output is None or str(output) == "-":
        sys.stdout.write(text)
        return
    path = _resolve(output)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")


def _positive_int(raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {raw!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {raw!r}")
    return value


def _descriptor(raw: str):
    try:
        return parse_descriptor(raw)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _hazard(raw: str):
    try:
        return pathworld.parse_hazard(raw)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _lengths(raw: str) -> list:
    try:
        values = [int(x) for x in raw.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {raw!r}") from None
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError("lengths must be positive integers")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ugae", description="Advantage estimation and discounting workbench")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("schedule", help="dump a discount schedule as t,weight")
    p.add_argument("descriptor", type=_descriptor)
    p.add_argument("--horizon", type=_positive_int, default=100)
    p.add_argument("-o", "--output")

    p = sub.add_parser("analyze", help="discounting property table")
    p.add_argument("--descriptors", type=Path,
                   help="file with one descriptor per line (default: built-in 15-row set)")
    p.add_argument("--horizon", type=_positive_int, default=analysis.ANALYSIS_HORIZON)
    p.add_argument("--full-precision", action="store_true")
    p.add_argument("-o", "--output")

    p = sub.add_parser("advantage", help="UGAE advantages for a trajectory CSV")
    p.add_argument("--trajectory", type=Path, required=True,
                   help="CSV with columns reward,value")
    p.add_argument("--bootstrap", type=float, default=0.0)
    p.add_argument("--schedule", type=_descriptor, default=parse_descriptor("exp(gamma=0.99)"))
    p.add_argument("--lambda", dest="lam", type=float, default=0.95)
    p.add_argument("--trunc", type=_positive_int)
    p.add_argument("-o", "--output")

    p = sub.add_parser("pathworld", help="Pathworld value curves and MSE table")
    p.add_argument("--hazard", type=_hazard, default=pathworld.UniformHazard(0.05))
    p.add_argument("--schedule", type=_descriptor, action="append", dest="schedules")
    p.add_argument("--paths", type=int, default=pathworld.DEFAULT_NUM_PATHS)
    p.add_argument("--mc-episodes", type=_positive_int,
                   help="use seeded Monte Carlo estimates as the empirical values")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--curve-dir", help="write one i,d,predicted,empirical,sq_err CSV per schedule")
    p.add_argument("-o", "--output")

    p = sub.add_parser("bench", help="GAE vs UGAE timing")
    p.add_argument("--lengths", type=_lengths, default=None)
    p.add_argument("--reps", type=_positive_int, default=5)
    p.add_argument("--trunc", type=_positive_int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    return parser


def _cmd_schedule(args) -> None:
    s = args.descriptor.build(args.horizon)
    rows = [(t, repr(float(w))) for t, w in enumerate(s.weights)]
    _emit(_csv_text(("t", "weight"), rows), args.output)


def _cmd_analyze(args) -> None:
    specs = None
    if args.descriptors is not None:
        specs = read_descriptor_file(args.descriptors)
    rows = analysis.property_table(specs, horizon=args.horizon)
    text = _csv_text(analysis.CSV_HEADER, analysis.table_records(rows, args.full_precision))
    _emit(text, args.output)


def _read_trajectory(path: Path, bootstrap: float) -> Trajectory:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"reward", "value"} <= set(reader.fieldnames):
            raise ValueError(f"{path}: expected CSV header with columns reward,value")
        rewards, values = [], []
        for lineno, rec in enumerate(reader, start=2):
            try:
                rewards.append(float(rec["reward"]))
                values.append(float(rec["value"]))
            except (TypeError, ValueError):
                raise ValueError(f"{path}:{lineno}: non-numeric reward/value") from None
    return Trajectory(rewards, values, bootstrap)


def _cmd_advantage(args) -> None:
    traj = _read_trajectory(args.trajectory, args.bootstrap)
    sched = args.schedule.build(len(traj) + 1)
    adv = ugae(traj, sched, args.lam, args.trunc).advantages
    rows = [(t, repr(float(a))) for t, a in enumerate(adv)]
    _emit(_csv_text(("t", "advantage"), rows), args.output)


def _cmd_pathworld(args) -> None:
    spec = pathworld.PathworldSpec(args.paths, args.hazard)
    descs = args.schedules or [parse_descriptor(d) for d in pathworld.DEFAULT_DESCRIPTORS]
    empirical = None
    if args.mc_episodes:
        empirical = [pathworld.empirical_value_mc(i, spec.hazard, args.mc_episodes, args.seed)[0]
                     for i in range(spec.num_paths + 1)]
    summary = []
    for idx, desc in enumerate(descs):
        curve = pathworld.path_curve(desc.build(pathworld.schedule_horizon(spec)), spec, empirical)
        sq = sum(r.squared_error for r in curve)
        summary.append((desc.label, repr(sq / len(curve)), repr(sq)))
        if args.curve_dir:
            rows = [(r.i, r.d, repr(r.predicted), repr(r.empirical), repr(r.squared_error))
                    for r in curve]
            _emit(_csv_text(("i", "d", "predicted", "empirical", "sq_err"), rows),
                  Path(args.curve_dir) / f"curve_{idx:02d}.csv")
    _emit(_csv_text(("label", "mse", "sum_sq_err"), summary), args.output)


def _cmd_bench(args) -> None:
    lengths = args.lengths or bench.default_lengths()
    rows = bench.run_bench(lengths, args.reps, args.trunc, args.seed)
    out = [(r.episode_length, repr(r.gae_seconds), repr(r.ugae_seconds)) for r in rows]
    _emit(_csv_text(("length", "gae_s", "ugae_s"), out), args.output)


COMMANDS = {
    "schedule": _cmd_schedule,
    "analyze": _cmd_analyze,
    "advantage": _cmd_advantage,
    "pathworld": _cmd_pathworld,
    "bench": _cmd_bench,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"ugae: I/O error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"ugae: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    return run(argv)


if __name__ == "__main__":
    raise SystemExit(main())
