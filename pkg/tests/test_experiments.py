from dataclasses import replace

import pytest

from parksim.buffers import dynamic_buffer, static_buffer
from parksim.experiments import (
    BAD_FRACTION_SWEEP,
    CSV_HEADER,
    DEFAULT_STRATEGIES,
    ExperimentSpec,
    emit_csv,
    emit_plot_data,
    emit_runs_csv,
    run_experiment,
)
from parksim.simulator import ScenarioConfig


def tiny_base(**overrides):
    fields = dict(population=12, bad_fraction=0.25, parks_per_vehicle=4,
                  off_system_stops=1, runs=2, seed=31, entry_spread=60)
    fields.update(overrides)
    return ScenarioConfig(**fields)


def tiny_spec(**overrides):
    fields = dict(
        base=tiny_base(),
        population_values=(10, 14),
        strategies=(static_buffer(0), dynamic_buffer()),
    )
    fields.update(overrides)
    return ExperimentSpec(**fields)


@pytest.fixture(scope="module")
def small_table():
    return run_experiment(tiny_spec())


class TestSpec:
    def test_default_cross_product_size(self):
        spec = ExperimentSpec()
        assert len(spec.population_values) == 4
        assert len(spec.strategies) == 4
        assert [s.label for s in DEFAULT_STRATEGIES] == [
            "static-0", "static-1", "static-3", "dynamic",
        ]

    def test_bad_fraction_default_values(self):
        spec = ExperimentSpec(kind=BAD_FRACTION_SWEEP)
        assert spec.sweep_values == (0.25, 0.3, 0.35, 0.4, 0.45, 0.5)

    def test_duplicate_strategy_labels_rejected(self):
        with pytest.raises(ValueError):
            tiny_spec(strategies=(static_buffer(1), static_buffer(1)))

    def test_oversized_buffer_fails_fast(self):
        with pytest.raises(ValueError):
            tiny_spec(strategies=(static_buffer(11),))

    def test_empty_sweep_rejected(self):
        with pytest.raises(ValueError):
            tiny_spec(population_values=())

    def test_population_cell_config(self):
        spec = tiny_spec()
        cfg = spec.cell_config(14, spec.strategies[1])
        assert cfg.population == 14
        assert cfg.buffer == spec.strategies[1]
        assert cfg.bad_fraction == spec.base.bad_fraction
        assert cfg.population_range is None

    def test_bad_fraction_cell_config(self):
        spec = tiny_spec(kind=BAD_FRACTION_SWEEP,
                         bad_fraction_values=(0.25, 0.5),
                         population_range=(10, 14))
        cfg = spec.cell_config(0.5, spec.strategies[0])
        assert cfg.bad_fraction == 0.5
        assert cfg.population_range == (10, 14)


class TestRunExperiment:
    def test_cross_product_cells(self, small_table):
        assert len(small_table.cells) == 2 * 2

    def test_every_cell_has_configured_runs(self, small_table):
        assert all(cell.n_runs == 2 for cell in small_table.cells.values())

    def test_bad_fraction_sweep_population_per_run(self):
        spec = tiny_spec(kind=BAD_FRACTION_SWEEP,
                         base=tiny_base(runs=4),
                         bad_fraction_values=(0.25, 0.5),
                         population_range=(10, 20))
        table = run_experiment(spec)
        assert len(table.cells) == 4
        pops = set()
        for cell in table.cells.values():
            for r in cell.runs:
                assert 10 <= r.population <= 20
                pops.add(r.population)
        assert len(pops) > 1
        # the same run index draws the same population in every cell
        first = {(v, lab): tuple(r.population for r in cell.runs)
                 for (v, lab), cell in table.cells.items()}
        by_value = {}
        for (v, lab), populations in first.items():
            by_value.setdefault(v, set()).add(populations)
        for populations in by_value.values():
            assert len(populations) == 1


class TestEmitCsv:
    def test_header_and_row_count(self, small_table, tmp_path):
        path = emit_csv(small_table, tmp_path / "results.csv")
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 1 + 2 * len(small_table.cells)

    def test_rows_sorted(self, small_table, tmp_path):
        path = emit_csv(small_table, tmp_path / "results.csv")
        rows = [line.split(",") for line in
                path.read_text(encoding="utf-8").splitlines()[1:]]
        keys = [(float(r[1]), r[2], r[3]) for r in rows]
        assert keys == sorted(keys)

    def test_reemission_byte_identical(self, small_table, tmp_path):
        a = emit_csv(small_table, tmp_path / "a.csv")
        b = emit_csv(small_table, tmp_path / "b.csv")
        assert a.read_bytes() == b.read_bytes()

    def test_lf_line_endings_and_dot_decimals(self, small_table, tmp_path):
        path = emit_csv(small_table, tmp_path / "results.csv")
        raw = path.read_bytes()
        assert b"\r" not in raw
        assert b";" not in raw

    def test_empty_table_rejected(self, small_table, tmp_path):
        empty = replace(small_table, cells={})
        with pytest.raises(ValueError):
            emit_csv(empty, tmp_path / "nope.csv")
        assert not (tmp_path / "nope.csv").exists()


class TestEmitPlotData:
    def test_series_shape(self, small_table, tmp_path):
        paths = emit_plot_data(small_table, tmp_path)
        assert [p.name for p in paths] == ["series_no_park.csv",
                                           "series_no_reservation.csv"]
        lines = paths[0].read_text(encoding="utf-8").splitlines()
        assert lines[0] == "sweep_value,static-0,dynamic"
        assert len(lines) == 1 + 2  # one row per sweep value
        values = [float(line.split(",")[0]) for line in lines[1:]]
        assert values == sorted(values)

    def test_column_order_follows_strategy_order(self, tmp_path):
        spec = tiny_spec(strategies=(dynamic_buffer(), static_buffer(0)))
        table = run_experiment(spec)
        paths = emit_plot_data(table, tmp_path)
        header = paths[0].read_text(encoding="utf-8").splitlines()[0]
        assert header == "sweep_value,dynamic,static-0"

    def test_single_strategy_two_columns(self, tmp_path):
        spec = tiny_spec(strategies=(static_buffer(0),))
        table = run_experiment(spec)
        paths = emit_plot_data(table, tmp_path)
        header = paths[0].read_text(encoding="utf-8").splitlines()[0]
        assert header == "sweep_value,static-0"

    def test_values_match_table_means(self, small_table, tmp_path):
        paths = emit_plot_data(small_table, tmp_path)
        lines = paths[1].read_text(encoding="utf-8").splitlines()[1:]
        for line in lines:
            parts = line.split(",")
            value = int(parts[0])
            for label, mean in zip(small_table.strategy_labels, parts[1:]):
                assert float(mean) == small_table.cell(value, label).mean_no_reservation


class TestEmitRunsCsv:
    def test_mean_recomputable_from_per_run_rows(self, small_table, tmp_path):
        path = emit_runs_csv(small_table, tmp_path / "runs.csv")
        lines = path.read_text(encoding="utf-8").splitlines()
        header = lines[0].split(",")
        idx_value = header.index("sweep_value")
        idx_label = header.index("strategy")
        idx_np = header.index("no_park")
        groups = {}
        for line in lines[1:]:
            parts = line.split(",")
            key = (int(parts[idx_value]), parts[idx_label])
            groups.setdefault(key, []).append(int(parts[idx_np]))
        for key, values in groups.items():
            expected = small_table.cells[key].mean_no_park
            assert sum(values) / len(values) == pytest.approx(expected)

    def test_row_count(self, small_table, tmp_path):
        path = emit_runs_csv(small_table, tmp_path / "runs.csv")
        lines = path.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 1 + sum(c.n_runs for c in small_table.cells.values())
