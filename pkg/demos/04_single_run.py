"""One full simulation run, narrated.

Builds the default scenario (80 vehicles, a quarter of them overstayers,
8 areas x 10 slots, ~63 simulated hours), runs it to completion, and
summarizes what happened to reservations, parks, and reputations.
"""

from collections import Counter

from parksim import ScenarioConfig, build_scenario, run

cfg = ScenarioConfig(seed=7)
scenario = build_scenario(cfg, run_index=0)
result = run(scenario, collect_events=True)
m = result.metrics

print(f"population {scenario.population} "
      f"({sum(a.behavior == 'bad' for a in scenario.agents)} overstayers), "
      f"{cfg.n_areas} areas x {cfg.slots_per_area} slots, "
      f"buffer policy '{cfg.buffer.label}'")
print(f"trace hash {result.trace_hash[:16]}... (identical on every rerun)\n")

print(f"reservation requests   {m.reservation_requests:>6}")
print(f"  refused (NO RESERVATION) {m.no_reservation:>6}")
print(f"completed parks        {m.completed_parks:>6}")
print(f"failed parks (NO PARK) {m.no_park:>6}")
print(f"redirects              {m.redirects:>6}")
print(f"overstays               {m.overstays:>6}")
print(f"peak occupancy          {m.peak_occupancy:>6} / {cfg.n_areas * cfg.slots_per_area}")

kinds = Counter(e["kind"] for e in result.events)
print(f"\nevent mix over {sum(kinds.values())} events: "
      + ", ".join(f"{k}={v}" for k, v in kinds.most_common()))

stars = Counter(p.stars for p in result.final_profiles.values())
print("final star distribution: "
      + ", ".join(f"{s}★x{n}" for s, n in sorted(stars.items(), reverse=True)))
