"""Deterministic discrete-event simulator for the reservation engine.

A scenario describes a population of vehicles, each with a trip plan of
park legs (reserve, arrive, stay, depart) interleaved with off-system
stops. Good vehicles leave exactly when their reservation ends; bad
vehicles silently stay an extra ``overstay_extra`` minutes. Vehicles
enter the system staggered over ``entry_spread`` minutes and favor the
more popular (central) areas per ``area_weights``.

Events are processed in (time, insertion sequence) order from a binary
heap, so a run is a pure function of its scenario: same config and seed,
same trace, bit for bit. All randomness is consumed while building the
scenario; the loop itself draws nothing.
"""

from __future__ import annotations

import hashlib
import heapq
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

import numpy as np

from . import admission, buffers, reward
from .model import (
    INITIAL_STARS,
    Location,
    ParkingArea,
    RunMetrics,
    SimTime,
    UserProfile,
)
from .rng import GENERATOR_NAME, substream

GOOD = "good"
BAD = "bad"


@dataclass(frozen=True)
class ScenarioConfig:
    n_areas: int = 8
    slots_per_area: int = 10
    horizon: SimTime = 3780  # minutes; bounds buffer reset ticks
    population: int = 80
    bad_fraction: float = 0.25
    parks_per_vehicle: int = 10
    park_duration_range: tuple[int, int] = (60, 180)
    off_system_stops: int = 2
    off_system_duration_range: tuple[int, int] = (480, 960)
    overstay_extra: int = 60
    travel_time: float = 40.0  # door-to-door minutes per unit of distance
    entry_spread: int = 240  # vehicles enter uniformly over [0, entry_spread]
    initial_credit: float = 1000.0
    buffer: buffers.BufferPolicyConfig = buffers.BufferPolicyConfig()
    reward: reward.RewardConfig = reward.RewardConfig()
    seed: int = 74025
    runs: int = 5
    # Optional explicit area coordinates; defaults to a unit grid.
    area_locations: Optional[tuple[Location, ...]] = None
    # Relative popularity of each area as a trip target; defaults to twice
    # the weight on the first two (central) areas.
    area_weights: Optional[tuple[float, ...]] = None
    # Admission look-ahead in minutes from the window start (None checks
    # the entire requested window).
    admission_horizon: Optional[int] = 1
    # When set, each run draws its population uniformly from this closed
    # range instead of using `population` (used by the bad-fraction sweep).
    population_range: Optional[tuple[int, int]] = None

    def __post_init__(self) -> None:
        if self.n_areas <= 0 or self.slots_per_area <= 0:
            raise ValueError("n_areas and slots_per_area must be positive")
        if self.population <= 0:
            raise ValueError("population must be positive")
        if not 0.0 <= self.bad_fraction <= 1.0:
            raise ValueError("bad_fraction must be in [0, 1]")
        if self.parks_per_vehicle <= 0:
            raise ValueError("each vehicle must plan at least one park")
        for name in ("park_duration_range", "off_system_duration_range"):
            lo, hi = getattr(self, name)
            if lo <= 0 or lo > hi:
                raise ValueError(f"{name} must satisfy 0 < min <= max")
        if self.off_system_stops < 0:
            raise ValueError("off_system_stops must be >= 0")
        if self.off_system_stops > self.parks_per_vehicle - 1:
            raise ValueError(
                "off-system stops are interleaved between parks, so at most "
                "parks_per_vehicle - 1 fit in a plan"
            )
        if self.overstay_extra < 0:
            raise ValueError("overstay_extra must be >= 0")
        if self.travel_time < 0:
            raise ValueError("travel_time must be >= 0")
        if self.entry_spread < 0:
            raise ValueError("entry_spread must be >= 0")
        if self.admission_horizon is not None and self.admission_horizon < 1:
            raise ValueError("admission_horizon must be >= 1 minute (or None)")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.area_locations is not None and len(self.area_locations) != self.n_areas:
            raise ValueError("area_locations must list one coordinate per area")
        if self.area_weights is not None:
            if len(self.area_weights) != self.n_areas:
                raise ValueError("area_weights must list one weight per area")
            if any(w <= 0 for w in self.area_weights):
                raise ValueError("area_weights must be positive")
        if self.population_range is not None:
            lo, hi = self.population_range
            if lo <= 0 or lo > hi:
                raise ValueError("population_range must satisfy 0 < min <= max")


def default_area_locations(n_areas: int) -> tuple[Location, ...]:
    """Unit-spaced grid layout, row-major, roughly square."""
    cols = math.ceil(math.sqrt(n_areas))
    return tuple((float(i % cols), float(i // cols)) for i in range(n_areas))


def default_area_weights(n_areas: int) -> tuple[float, ...]:
    """Twin-center demand profile: the first two areas pull double weight."""
    return tuple(2.0 if i < min(2, n_areas) else 1.0 for i in range(n_areas))


@dataclass(frozen=True)
class ParkLeg:
    area: int
    duration: int


@dataclass(frozen=True)
class OffSystemStop:
    duration: int


TripItem = Union[ParkLeg, OffSystemStop]


@dataclass(frozen=True)
class VehicleAgent:
    id: int
    behavior: str  # GOOD | BAD
    plan: tuple[TripItem, ...]
    entry_delay: int  # minutes before the first plan item starts
    initial_location: Location


class EventKind(Enum):
    PLACE_RESERVATION = "place_reservation"
    ARRIVE = "arrive"
    DEPART = "depart"
    BUFFER_RESET_TICK = "buffer_reset_tick"
    TRIP_PLAN_ADVANCE = "trip_plan_advance"


@dataclass(frozen=True)
class SimEvent:
    time: SimTime
    sequence: int
    kind: EventKind
    vehicle: Optional[int] = None
    reservation: Optional[int] = None
    area: Optional[int] = None


@dataclass(frozen=True)
class Scenario:
    config: ScenarioConfig
    run_index: int
    run_seed: int
    population: int
    agents: tuple[VehicleAgent, ...]
    area_locations: tuple[Location, ...]


def build_scenario(cfg: ScenarioConfig, run_index: int) -> Scenario:
    """Sample one run's population, behaviors, and trip plans.

    Independent substreams per concern keep runs comparable across
    configurations: two configs differing only in buffer policy see the
    same vehicles making the same trips.
    """
    run_seed = substream(cfg.seed, run_index, "run").getrandbits(63)

    population = cfg.population
    if cfg.population_range is not None:
        rng_pop = substream(cfg.seed, run_index, "population")
        population = rng_pop.randint(*cfg.population_range)

    n_bad = math.floor(population * cfg.bad_fraction)
    rng_behavior = substream(cfg.seed, run_index, "behavior")
    bad_ids = set(rng_behavior.sample(range(population), n_bad))

    locations = cfg.area_locations or default_area_locations(cfg.n_areas)
    weights = cfg.area_weights or default_area_weights(cfg.n_areas)
    area_ids = list(range(cfg.n_areas))
    rng_plans = substream(cfg.seed, run_index, "plans")
    agents = []
    for vid in range(population):
        legs = [
            ParkLeg(
                area=rng_plans.choices(area_ids, weights=weights)[0],
                duration=rng_plans.randint(*cfg.park_duration_range),
            )
            for _ in range(cfg.parks_per_vehicle)
        ]
        # Stops go into distinct gaps strictly between park legs; inserting
        # from the highest gap down keeps earlier indices valid.
        gaps = sorted(
            rng_plans.sample(range(1, cfg.parks_per_vehicle), cfg.off_system_stops),
            reverse=True,
        )
        plan: list[TripItem] = list(legs)
        for gap in gaps:
            plan.insert(
                gap, OffSystemStop(rng_plans.randint(*cfg.off_system_duration_range))
            )
        entry_delay = rng_plans.randint(0, cfg.entry_spread) if cfg.entry_spread else 0
        agents.append(
            VehicleAgent(
                id=vid,
                behavior=BAD if vid in bad_ids else GOOD,
                plan=tuple(plan),
                entry_delay=entry_delay,
                initial_location=locations[rng_plans.randrange(len(locations))],
            )
        )
    return Scenario(
        config=cfg,
        run_index=run_index,
        run_seed=run_seed,
        population=population,
        agents=tuple(agents),
        area_locations=tuple(locations),
    )


@dataclass
class RunResult:
    run_index: int
    run_seed: int
    population: int
    metrics: RunMetrics
    trace_hash: str
    events: Optional[list[dict]] = None
    buffer_trace: list[tuple[SimTime, int, int, str]] = field(default_factory=list)
    final_profiles: dict[int, UserProfile] = field(default_factory=dict)


class _Simulation:
    """One run's mutable state: engine, event heap, per-vehicle cursors."""

    def __init__(self, scenario: Scenario, collect_events: bool):
        cfg = scenario.config
        self.scenario = scenario
        self.cfg = cfg
        areas = {
            i: ParkingArea(id=i, capacity=cfg.slots_per_area, location=loc)
            for i, loc in enumerate(scenario.area_locations)
        }
        profiles = {
            agent.id: UserProfile(
                id=agent.id, stars=INITIAL_STARS, credit=cfg.initial_credit
            )
            for agent in scenario.agents
        }
        self.engine = admission.ParkingEngine(
            areas=areas,
            profiles=profiles,
            buffer_config=cfg.buffer,
            reward_config=cfg.reward,
            travel_minutes_per_unit=cfg.travel_time,
            admission_horizon=cfg.admission_horizon,
        )
        self.heap: list[tuple[SimTime, int, SimEvent]] = []
        self.sequence = 0
        self.clock: SimTime = 0
        self.cursor = {agent.id: 0 for agent in scenario.agents}
        self.location = {agent.id: agent.initial_location for agent in scenario.agents}
        self.pending_leg: dict[int, ParkLeg] = {}
        self.agent = {agent.id: agent for agent in scenario.agents}
        self.events_log: Optional[list[dict]] = [] if collect_events else None
        self.trace = hashlib.sha256()

    def push(self, time: SimTime, kind: EventKind, **fields) -> None:
        event = SimEvent(time=time, sequence=self.sequence, kind=kind, **fields)
        heapq.heappush(self.heap, (time, self.sequence, event))
        self.sequence += 1

    def record(self, event: SimEvent, outcome: str) -> None:
        line = (
            f"{event.time},{event.kind.value},{event.vehicle},"
            f"{event.area},{outcome}"
        )
        self.trace.update(line.encode())
        if self.events_log is not None:
            self.events_log.append(
                {
                    "time": event.time,
                    "kind": event.kind.value,
                    "vehicle": event.vehicle,
                    "area": event.area,
                    "outcome": outcome,
                }
            )

    # ----- event handlers ------------------------------------------------

    def advance_plan(self, event: SimEvent) -> None:
        vid = event.vehicle
        plan = self.agent[vid].plan
        idx = self.cursor[vid]
        if idx >= len(plan):
            self.record(event, "plan_complete")
            return
        self.cursor[vid] = idx + 1
        item = plan[idx]
        if isinstance(item, OffSystemStop):
            self.record(event, f"off_system:{item.duration}")
            self.push(event.time + item.duration, EventKind.TRIP_PLAN_ADVANCE, vehicle=vid)
        else:
            self.pending_leg[vid] = item
            self.record(event, f"next_leg:area{item.area}")
            self.push(event.time, EventKind.PLACE_RESERVATION, vehicle=vid, area=item.area)

    def place_reservation(self, event: SimEvent) -> None:
        vid = event.vehicle
        leg = self.pending_leg.pop(vid)
        now = event.time
        travel = self.engine.travel_minutes(self.location[vid], leg.area)
        decision = self.engine.request_reservation(
            user_id=vid,
            area_id=leg.area,
            start=now + travel,
            duration=leg.duration,
            now=now,
        )
        if decision.accepted:
            res = decision.reservation
            self.record(event, f"accepted:res{res.id}")
            self.push(res.start, EventKind.ARRIVE, vehicle=vid,
                      reservation=res.id, area=res.area)
        else:
            # Skipped leg: move on once the would-be stay has elapsed.
            self.record(event, f"rejected:{decision.reason.value}")
            self.push(now + leg.duration, EventKind.TRIP_PLAN_ADVANCE, vehicle=vid)

    def arrive(self, event: SimEvent) -> None:
        vid = event.vehicle
        res = self.engine.reservations[event.reservation]
        outcome = self.engine.handle_arrival(res, event.time)
        if outcome.kind == admission.PARKED:
            self.location[vid] = self.engine.areas[outcome.area].location
            stay = res.duration
            if self.agent[vid].behavior == BAD:
                stay += self.cfg.overstay_extra
            self.record(event, "parked")
            self.push(event.time + stay, EventKind.DEPART, vehicle=vid,
                      reservation=res.id, area=res.area)
        elif outcome.kind == admission.REDIRECTED:
            repl = outcome.replacement
            self.record(event, f"redirected:area{outcome.area}")
            self.push(repl.start, EventKind.ARRIVE, vehicle=vid,
                      reservation=repl.id, area=repl.area)
        else:
            self.location[vid] = self.engine.areas[outcome.area].location
            self.record(event, "no_park")
            self.push(event.time + res.duration, EventKind.TRIP_PLAN_ADVANCE, vehicle=vid)

    def depart(self, event: SimEvent) -> None:
        vid = event.vehicle
        res = self.engine.reservations[event.reservation]
        record = self.engine.handle_departure(res, event.time)
        outcome = "departed_on_time" if record.on_time else (
            f"departed_late:{record.overstay_minutes}"
        )
        self.record(event, outcome)
        self.push(event.time, EventKind.TRIP_PLAN_ADVANCE, vehicle=vid)

    def buffer_reset(self, event: SimEvent) -> None:
        self.engine.on_buffer_reset_tick(event.area, event.time)
        self.record(event, "buffer_reset")

    # ----- main loop ------------------------------------------------------

    def run(self) -> None:
        for agent in self.scenario.agents:
            self.push(agent.entry_delay, EventKind.TRIP_PLAN_ADVANCE, vehicle=agent.id)
        period = self.cfg.buffer.reset_period
        for area_id in self.engine.areas:
            for tick in range(period, self.cfg.horizon + 1, period):
                self.push(tick, EventKind.BUFFER_RESET_TICK, area=area_id)

        handlers = {
            EventKind.TRIP_PLAN_ADVANCE: self.advance_plan,
            EventKind.PLACE_RESERVATION: self.place_reservation,
            EventKind.ARRIVE: self.arrive,
            EventKind.DEPART: self.depart,
            EventKind.BUFFER_RESET_TICK: self.buffer_reset,
        }
        # The queue drains completely: every accepted stay runs to its
        # departure and every plan to its end, so late-starting parks are
        # counted rather than cut off at the horizon.
        while self.heap:
            time, _, event = heapq.heappop(self.heap)
            if time < self.clock:
                raise RuntimeError("event time went backwards")
            self.clock = time
            handlers[event.kind](event)


def run(
    scenario: Scenario,
    collect_events: bool = False,
) -> RunResult:
    """Execute one scenario to completion and collect its metrics."""
    sim = _Simulation(scenario, collect_events=collect_events)
    sim.run()
    _check_conservation(scenario, sim.engine.metrics)
    return RunResult(
        run_index=scenario.run_index,
        run_seed=scenario.run_seed,
        population=scenario.population,
        metrics=sim.engine.metrics,
        trace_hash=sim.trace.hexdigest(),
        events=sim.events_log,
        buffer_trace=sim.engine.buffer_trace,
        final_profiles=sim.engine.profiles,
    )


def _check_conservation(scenario: Scenario, m: RunMetrics) -> None:
    planned = scenario.population * scenario.config.parks_per_vehicle
    settled = m.completed_parks + m.no_park + m.no_reservation
    if settled != planned:
        raise RuntimeError(
            f"park legs do not balance: {settled} settled vs {planned} planned"
        )


@dataclass(frozen=True)
class AveragedMetrics:
    mean_no_park: float
    std_no_park: float
    mean_no_reservation: float
    std_no_reservation: float
    mean_requests: float
    runs: tuple[RunResult, ...]

    @property
    def n_runs(self) -> int:
        return len(self.runs)


def run_averaged(cfg: ScenarioConfig, collect_events: bool = False) -> AveragedMetrics:
    """Run ``cfg.runs`` independent replications and aggregate them."""
    results = [
        run(build_scenario(cfg, run_index), collect_events=collect_events)
        for run_index in range(cfg.runs)
    ]
    no_park = np.array([r.metrics.no_park for r in results], dtype=float)
    no_res = np.array([r.metrics.no_reservation for r in results], dtype=float)
    requests = np.array([r.metrics.reservation_requests for r in results], dtype=float)

    def _std(values: np.ndarray) -> float:
        return float(np.std(values, ddof=1)) if len(values) > 1 else 0.0

    return AveragedMetrics(
        mean_no_park=float(no_park.mean()),
        std_no_park=_std(no_park),
        mean_no_reservation=float(no_res.mean()),
        std_no_reservation=_std(no_res),
        mean_requests=float(requests.mean()),
        runs=tuple(results),
    )


def scenario_metadata(cfg: ScenarioConfig) -> dict:
    """Reproducibility notes recorded next to result files."""
    return {
        "generator": GENERATOR_NAME,
        "seed": cfg.seed,
        "runs": cfg.runs,
        "horizon_minutes": cfg.horizon,
        "buffer_policy": cfg.buffer.label,
    }
