"""Experiment sweeps over buffer strategies and scenario parameters.

Two sweep kinds are built in:

- ``population_sweep``: fixed bad-behavior share, population stepped over a
  list of values.
- ``bad_fraction_sweep``: bad-behavior share stepped over a list of values,
  the population drawn per run uniformly from a configured range.

Each (sweep value, strategy) cell runs the scenario ``runs`` times and
aggregates mean and sample standard deviation of the NO PARK and
NO RESERVATION counts. Emission is fully deterministic: re-running the
same spec yields byte-identical files.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Union

from .buffers import BufferPolicyConfig, dynamic_buffer, static_buffer
from .simulator import AveragedMetrics, ScenarioConfig, run_averaged

POPULATION_SWEEP = "population_sweep"
BAD_FRACTION_SWEEP = "bad_fraction_sweep"

DEFAULT_STRATEGIES = (
    static_buffer(0),
    static_buffer(1),
    static_buffer(3),
    dynamic_buffer(),
)

CSV_HEADER = "sweep_kind,sweep_value,strategy,metric,mean,stddev,runs"


@dataclass(frozen=True)
class ExperimentSpec:
    kind: str = POPULATION_SWEEP
    base: ScenarioConfig = ScenarioConfig()
    population_values: tuple[int, ...] = (80, 90, 100, 110)
    bad_fraction_values: tuple[float, ...] = (0.25, 0.3, 0.35, 0.4, 0.45, 0.5)
    population_range: tuple[int, int] = (80, 110)
    strategies: tuple[BufferPolicyConfig, ...] = DEFAULT_STRATEGIES

    def __post_init__(self) -> None:
        if self.kind not in (POPULATION_SWEEP, BAD_FRACTION_SWEEP):
            raise ValueError(f"unknown experiment kind: {self.kind!r}")
        if not self.sweep_values:
            raise ValueError("sweep value list must be non-empty")
        if not self.strategies:
            raise ValueError("strategy list must be non-empty")
        labels = [s.label for s in self.strategies]
        if len(set(labels)) != len(labels):
            raise ValueError(f"strategy names must be unique, got {labels}")
        for strategy in self.strategies:
            strategy.validate_for_capacity(self.base.slots_per_area)

    @property
    def sweep_values(self) -> tuple[Union[int, float], ...]:
        if self.kind == POPULATION_SWEEP:
            return self.population_values
        return self.bad_fraction_values

    def cell_config(
        self, sweep_value: Union[int, float], strategy: BufferPolicyConfig
    ) -> ScenarioConfig:
        if self.kind == POPULATION_SWEEP:
            return replace(
                self.base, population=sweep_value, population_range=None,
                buffer=strategy,
            )
        return replace(
            self.base, bad_fraction=sweep_value,
            population_range=self.population_range, buffer=strategy,
        )


@dataclass(frozen=True)
class ResultTable:
    kind: str
    sweep_values: tuple[Union[int, float], ...]
    strategy_labels: tuple[str, ...]
    cells: dict[tuple[Union[int, float], str], AveragedMetrics]

    def cell(self, sweep_value, strategy_label) -> AveragedMetrics:
        return self.cells[(sweep_value, strategy_label)]


def run_experiment(spec: ExperimentSpec) -> ResultTable:
    """Run the full cross-product of sweep values and strategies."""
    cells = {}
    for value in spec.sweep_values:
        for strategy in spec.strategies:
            cfg = spec.cell_config(value, strategy)
            cells[(value, strategy.label)] = run_averaged(cfg)
    return ResultTable(
        kind=spec.kind,
        sweep_values=tuple(spec.sweep_values),
        strategy_labels=tuple(s.label for s in spec.strategies),
        cells=cells,
    )


def emit_csv(table: ResultTable, path: Union[str, Path]) -> Path:
    """Aggregated results, one row per (cell, metric).

    Rows are sorted by (sweep value, strategy name, metric); numbers use
    ``repr`` formatting with a dot decimal separator, LF line endings.
    """
    if not table.cells:
        raise ValueError("result table is empty")
    path = Path(path)
    rows = []
    for (value, label), cell in table.cells.items():
        rows.append((value, label, "no_park", cell.mean_no_park,
                     cell.std_no_park, cell.n_runs))
        rows.append((value, label, "no_reservation", cell.mean_no_reservation,
                     cell.std_no_reservation, cell.n_runs))
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    lines = [CSV_HEADER]
    for value, label, metric, mean, std, n in rows:
        lines.append(f"{table.kind},{value},{label},{metric},{mean},{std},{n}")
    _write_text(path, lines)
    return path


def emit_plot_data(table: ResultTable, out_dir: Union[str, Path]) -> list[Path]:
    """One series file per metric: sweep value column, one mean column per
    strategy, strategies in spec order. Ready for any plotting tool."""
    if not table.cells:
        raise ValueError("result table is empty")
    out_dir = Path(out_dir)
    paths = []
    for metric in ("no_park", "no_reservation"):
        lines = ["sweep_value," + ",".join(table.strategy_labels)]
        for value in sorted(table.sweep_values):
            means = []
            for label in table.strategy_labels:
                cell = table.cell(value, label)
                means.append(
                    cell.mean_no_park if metric == "no_park"
                    else cell.mean_no_reservation
                )
            lines.append(f"{value}," + ",".join(str(m) for m in means))
        path = out_dir / f"series_{metric}.csv"
        _write_text(path, lines)
        paths.append(path)
    return paths


def emit_runs_csv(table: ResultTable, path: Union[str, Path]) -> Path:
    """Per-run detail: populations, seeds, and every counter."""
    if not table.cells:
        raise ValueError("result table is empty")
    path = Path(path)
    lines = [
        "sweep_kind,sweep_value,strategy,run_index,run_seed,population,"
        "no_park,no_reservation,completed_parks,overstays,redirects,"
        "reservation_requests,peak_occupancy"
    ]
    for (value, label) in sorted(table.cells, key=lambda k: (k[0], k[1])):
        cell = table.cells[(value, label)]
        for r in cell.runs:
            m = r.metrics
            lines.append(
                f"{table.kind},{value},{label},{r.run_index},{r.run_seed},"
                f"{r.population},{m.no_park},{m.no_reservation},"
                f"{m.completed_parks},{m.overstays},{m.redirects},"
                f"{m.reservation_requests},{m.peak_occupancy}"
            )
    _write_text(path, lines)
    return path


def _write_text(path: Path, lines: list[str]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"could not write {path}: {exc}") from exc
