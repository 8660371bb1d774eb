import random
from dataclasses import replace

import pytest

from parksim.buffers import dynamic_buffer, static_buffer
from parksim.simulator import (
    BAD,
    GOOD,
    OffSystemStop,
    ParkLeg,
    ScenarioConfig,
    build_scenario,
    default_area_locations,
    run,
    run_averaged,
)


def small_cfg(**overrides):
    base = dict(population=12, bad_fraction=0.25, runs=2, seed=9)
    base.update(overrides)
    return ScenarioConfig(**base)


class TestBuildScenario:
    def test_default_population_and_plan_shape(self):
        cfg = ScenarioConfig(population=80)
        scenario = build_scenario(cfg, run_index=0)
        assert len(scenario.agents) == 80
        for agent in scenario.agents:
            legs = [i for i in agent.plan if isinstance(i, ParkLeg)]
            stops = [i for i in agent.plan if isinstance(i, OffSystemStop)]
            assert len(legs) == 10
            assert len(stops) == 2
            # stops sit strictly between park legs
            assert not isinstance(agent.plan[0], OffSystemStop)
            assert not isinstance(agent.plan[-1], OffSystemStop)
            for a, b in zip(agent.plan, agent.plan[1:]):
                assert not (isinstance(a, OffSystemStop) and isinstance(b, OffSystemStop))
            for leg in legs:
                assert 0 <= leg.area < cfg.n_areas
                assert 60 <= leg.duration <= 180
            for stop in stops:
                assert 480 <= stop.duration <= 960
            assert 0 <= agent.entry_delay <= cfg.entry_spread

    def test_bad_fraction_zero_means_all_good(self):
        scenario = build_scenario(small_cfg(bad_fraction=0.0), 0)
        assert all(a.behavior == GOOD for a in scenario.agents)

    def test_exact_bad_count(self):
        scenario = build_scenario(ScenarioConfig(population=80, bad_fraction=0.25), 0)
        assert sum(a.behavior == BAD for a in scenario.agents) == 20

    def test_build_is_deterministic(self):
        cfg = small_cfg()
        assert build_scenario(cfg, 1) == build_scenario(cfg, 1)
        assert build_scenario(cfg, 1) != build_scenario(cfg, 2)

    def test_buffer_choice_does_not_change_demand(self):
        a = build_scenario(small_cfg(buffer=static_buffer(0)), 0)
        b = build_scenario(small_cfg(buffer=dynamic_buffer()), 0)
        assert a.agents == b.agents

    def test_population_range_sampling(self):
        cfg = small_cfg(population_range=(10, 20))
        populations = {build_scenario(cfg, i).population for i in range(6)}
        assert all(10 <= p <= 20 for p in populations)
        assert len(populations) > 1
        assert build_scenario(cfg, 3).population == build_scenario(cfg, 3).population

    def test_degenerate_configs_rejected(self):
        with pytest.raises(ValueError):
            ScenarioConfig(parks_per_vehicle=0)
        with pytest.raises(ValueError):
            ScenarioConfig(parks_per_vehicle=2, off_system_stops=2)
        with pytest.raises(ValueError):
            ScenarioConfig(bad_fraction=1.5)
        with pytest.raises(ValueError):
            ScenarioConfig(area_weights=(1.0,) * 3)
        with pytest.raises(ValueError):
            ScenarioConfig(area_locations=((0, 0),) * 3)
        with pytest.raises(ValueError):
            ScenarioConfig(park_duration_range=(100, 50))
        with pytest.raises(ValueError):
            ScenarioConfig(runs=0)

    def test_default_grid_layout(self):
        locs = default_area_locations(8)
        assert len(set(locs)) == 8
        assert locs[0] == (0.0, 0.0)


class TestRun:
    def test_single_good_vehicle_completes_everything(self):
        cfg = ScenarioConfig(population=1, bad_fraction=0.0, runs=1, seed=3)
        result = run(build_scenario(cfg, 0))
        m = result.metrics
        assert (m.no_park, m.no_reservation, m.completed_parks) == (0, 0, 10)
        assert m.overstays == 0

    def test_deterministic_metrics_and_trace(self):
        cfg = small_cfg()
        a = run(build_scenario(cfg, 0))
        b = run(build_scenario(cfg, 0))
        assert a.metrics == b.metrics
        assert a.trace_hash == b.trace_hash
        c = run(build_scenario(replace(cfg, seed=10), 0))
        assert c.trace_hash != a.trace_hash

    def test_eleven_vehicles_one_area_one_conflicting_leg(self):
        # 11 identical fully-overlapping single-leg plans against 10 slots:
        # ten are admitted, the eleventh request is refused.
        cfg = ScenarioConfig(
            n_areas=1,
            population=11,
            bad_fraction=0.0,
            parks_per_vehicle=1,
            off_system_stops=0,
            park_duration_range=(120, 120),
            entry_spread=0,
            runs=1,
            seed=1,
        )
        for seed in (1, 2, 3):
            result = run(build_scenario(replace(cfg, seed=seed), 0))
            m = result.metrics
            assert m.no_reservation == 1
            assert m.completed_parks == 10
            assert m.no_park == 0

    def test_conservation_across_random_configs(self):
        rng = random.Random(6)
        for _ in range(8):
            cfg = ScenarioConfig(
                n_areas=rng.randint(1, 6),
                slots_per_area=rng.randint(2, 8),
                population=rng.randint(5, 40),
                bad_fraction=rng.choice([0.0, 0.25, 0.5]),
                parks_per_vehicle=rng.randint(3, 8),
                off_system_stops=rng.randint(0, 2),
                buffer=rng.choice([static_buffer(0), static_buffer(1), dynamic_buffer()]),
                runs=1,
                seed=rng.randint(0, 999),
            )
            m = run(build_scenario(cfg, 0)).metrics
            planned = cfg.population * cfg.parks_per_vehicle
            assert m.completed_parks + m.no_park + m.no_reservation == planned
            assert (m.rejected_capacity + m.rejected_reputation
                    + m.rejected_credit + m.rejected_suspended) == m.no_reservation

    def test_zero_noise_within_area_capacity(self):
        # a population that fits one area can never be refused or stranded
        for seed in (11, 12, 13):
            cfg = ScenarioConfig(population=10, bad_fraction=0.0, runs=1, seed=seed)
            m = run(build_scenario(cfg, 0)).metrics
            assert m.no_park == 0
            assert m.no_reservation == 0
            assert m.completed_parks == 100

    def test_full_window_admission_all_good_never_strands(self):
        # with the whole-stay admission check, reservations are honored
        # exactly for punctual populations at any size
        for seed in (5, 6):
            cfg = ScenarioConfig(population=80, bad_fraction=0.0,
                                 admission_horizon=None, runs=1, seed=seed)
            m = run(build_scenario(cfg, 0)).metrics
            assert m.no_park == 0

    def test_bad_agents_overstay_every_completed_park(self):
        cfg = ScenarioConfig(population=8, bad_fraction=1.0, runs=1, seed=21)
        result = run(build_scenario(cfg, 0))
        m = result.metrics
        assert m.overstays == m.completed_parks > 0

    def test_good_agents_collect_no_warnings(self):
        cfg = small_cfg(population=16)
        scenario = build_scenario(cfg, 0)
        result = run(scenario)
        for agent in scenario.agents:
            if agent.behavior == GOOD:
                assert result.final_profiles[agent.id].warnings == 0

    def test_event_times_monotone(self):
        cfg = small_cfg(population=20)
        result = run(build_scenario(cfg, 0), collect_events=True)
        times = [e["time"] for e in result.events]
        assert times == sorted(times)

    def test_no_chained_redirects(self):
        # heavy contention: replacements park or fail, never redirect again
        cfg = ScenarioConfig(population=60, bad_fraction=0.5, n_areas=4,
                             slots_per_area=5, entry_spread=60, runs=1, seed=17)
        result = run(build_scenario(cfg, 0), collect_events=True)
        redirected = [e for e in result.events if e["outcome"].startswith("redirected")]
        assert result.metrics.redirects == len(redirected)

    def test_occupancy_never_exceeds_total_capacity(self):
        cfg = ScenarioConfig(population=40, bad_fraction=0.5, n_areas=4,
                             slots_per_area=5, runs=1, seed=23)
        result = run(build_scenario(cfg, 0))
        assert result.metrics.peak_occupancy <= 4 * 5

    def test_buffer_trace_recorded_for_dynamic_runs(self):
        cfg = small_cfg(population=30, bad_fraction=0.5, buffer=dynamic_buffer())
        result = run(build_scenario(cfg, 0))
        assert result.buffer_trace
        causes = {cause for (_, _, _, cause) in result.buffer_trace}
        assert causes <= {"late_departure", "reset"}


class TestRunAveraged:
    def test_single_run_mean_and_zero_deviation(self):
        cfg = small_cfg(runs=1)
        av = run_averaged(cfg)
        assert av.n_runs == 1
        assert av.mean_no_park == av.runs[0].metrics.no_park
        assert av.std_no_park == 0.0
        assert av.std_no_reservation == 0.0

    def test_mean_matches_recomputation_from_runs(self):
        av = run_averaged(small_cfg(runs=4, population=20, bad_fraction=0.5))
        values = [r.metrics.no_reservation for r in av.runs]
        assert av.mean_no_reservation == pytest.approx(sum(values) / len(values))

    def test_all_good_static0_zero_no_park(self):
        cfg = ScenarioConfig(population=10, bad_fraction=0.0,
                             buffer=static_buffer(0), runs=5, seed=444)
        av = run_averaged(cfg)
        assert av.mean_no_park == 0.0

    def test_distinct_run_seeds(self):
        av = run_averaged(small_cfg(runs=4))
        seeds = {r.run_seed for r in av.runs}
        assert len(seeds) == 4
