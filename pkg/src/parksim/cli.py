"""Command-line front end.

Subcommands:

- ``parksim run --spec scenario.yaml``: run one scenario (all replications),
  write per-run and summary CSVs, optionally per-run event logs.
- ``parksim sweep --spec experiment.yaml``: run a full experiment sweep and
  write the aggregated results, plot-ready series, and per-run detail.
- ``parksim validate --spec file.yaml``: check a config file and exit.

``--out`` (or the PARKSIM_OUT environment variable) picks the output
directory; ``--seed`` overrides the seed from the file. Exit codes:
0 success, 1 config error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

from .configio import ConfigError, load_experiment_file, load_scenario_file
from .experiments import emit_csv, emit_plot_data, emit_runs_csv, run_experiment
from .simulator import AveragedMetrics, run_averaged, scenario_metadata

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2

OUTPUT_DIR_ENV = "PARKSIM_OUT"


def _out_dir(args) -> Path:
    if args.out:
        return Path(args.out)
    return Path(os.environ.get(OUTPUT_DIR_ENV, "out"))


def _write_lines(path: Path, lines: list[str]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _write_scenario_outputs(result: AveragedMetrics, out_dir: Path, log_events: bool) -> None:
    lines = [
        "run_index,run_seed,population,no_park,no_reservation,completed_parks,"
        "overstays,redirects,reservation_requests,peak_occupancy"
    ]
    for r in result.runs:
        m = r.metrics
        lines.append(
            f"{r.run_index},{r.run_seed},{r.population},{m.no_park},"
            f"{m.no_reservation},{m.completed_parks},{m.overstays},"
            f"{m.redirects},{m.reservation_requests},{m.peak_occupancy}"
        )
    _write_lines(out_dir / "runs.csv", lines)

    summary = [
        "metric,mean,stddev,runs",
        f"no_park,{result.mean_no_park},{result.std_no_park},{result.n_runs}",
        f"no_reservation,{result.mean_no_reservation},"
        f"{result.std_no_reservation},{result.n_runs}",
    ]
    _write_lines(out_dir / "summary.csv", summary)

    if log_events:
        for r in result.runs:
            path = out_dir / f"events_run{r.run_index}.jsonl"
            _write_lines(path, [json.dumps(e, sort_keys=True) for e in r.events])


def _cmd_run(args) -> int:
    cfg = load_scenario_file(args.spec)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    out_dir = _out_dir(args)
    result = run_averaged(cfg, collect_events=args.log_events)
    _write_scenario_outputs(result, out_dir, args.log_events)
    meta = scenario_metadata(cfg)
    meta["spec_file"] = str(args.spec)
    _write_lines(out_dir / "run_metadata.json", [json.dumps(meta, indent=2, sort_keys=True)])
    print(
        f"ran {result.n_runs} replications: "
        f"no_park mean {result.mean_no_park}, "
        f"no_reservation mean {result.mean_no_reservation}"
    )
    print(f"outputs in {out_dir}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    spec = load_experiment_file(args.spec)
    if args.seed is not None:
        spec = replace(spec, base=replace(spec.base, seed=args.seed))
    out_dir = _out_dir(args)
    table = run_experiment(spec)
    emit_csv(table, out_dir / "results.csv")
    emit_plot_data(table, out_dir)
    emit_runs_csv(table, out_dir / "runs.csv")
    meta = scenario_metadata(spec.base)
    meta["experiment_kind"] = spec.kind
    meta["strategies"] = list(table.strategy_labels)
    meta["sweep_values"] = list(table.sweep_values)
    meta["spec_file"] = str(args.spec)
    _write_lines(out_dir / "run_metadata.json", [json.dumps(meta, indent=2, sort_keys=True)])
    print(f"swept {len(table.sweep_values)} values x {len(table.strategy_labels)} strategies")
    print(f"outputs in {out_dir}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    errors = []
    for loader in (load_scenario_file, load_experiment_file):
        try:
            loader(args.spec)
            print(f"{args.spec}: valid ({loader.__name__.removeprefix('load_').removesuffix('_file')})")
            return EXIT_OK
        except ConfigError as exc:
            errors.append(str(exc))
    print(f"{args.spec}: invalid", file=sys.stderr)
    for err in errors:
        print(f"  {err}", file=sys.stderr)
    return EXIT_CONFIG


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parksim",
        description="Reservation-based parking simulation and experiment runner",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a single scenario")
    p_run.add_argument("--spec", required=True, help="scenario YAML file")
    p_run.add_argument("--out", help="output directory")
    p_run.add_argument("--seed", type=int, help="override the scenario seed")
    p_run.add_argument("--log-events", action="store_true",
                       help="write per-run event logs (JSON lines)")
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="run an experiment sweep")
    p_sweep.add_argument("--spec", required=True, help="experiment YAML file")
    p_sweep.add_argument("--out", help="output directory")
    p_sweep.add_argument("--seed", type=int, help="override the base seed")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_val = sub.add_parser("validate", help="check a scenario or experiment file")
    p_val.add_argument("--spec", required=True, help="YAML file to check")
    p_val.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
