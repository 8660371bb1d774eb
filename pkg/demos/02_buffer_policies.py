"""How the dynamic buffer breathes: bumps, reputation widening, resets.

Feeds a synthetic day of events to one area's buffer state and prints the
effective number of non-reservable slots after each event, next to what
the static policies would hold constant.
"""

from parksim import UserProfile
from parksim.buffers import (
    dynamic_buffer,
    effective_buffer,
    on_late_departure,
    on_reset_tick,
    static_buffer,
)

CAPACITY = 10
config = dynamic_buffer(dynamic_init=2, dynamic_max=3, reset_period=1440,
                        reputation_threshold_stars=2, reputation_weight=1.0)
state = config.initial_state()

print(f"dynamic policy: init {config.dynamic_init}, max {config.dynamic_max}, "
      f"daily reset, +1 slot per occupant below "
      f"{config.reputation_threshold_stars} stars\n")

def occupants(*stars):
    return [UserProfile(id=i, stars=s) for i, s in enumerate(stars)]

timeline = [
    (420, "late departure", "bump", occupants(3, 3, 4)),
    (460, "late departure", "bump", occupants(3, 3, 4)),
    (600, "two 1-star drivers parked", None, occupants(1, 1, 4)),
    (900, "late departure (already at max)", "bump", occupants(3, 4)),
    (1440, "daily reset", "reset", occupants(3, 4)),
    (1500, "quiet morning", None, occupants(4)),
]

print(f"{'minute':>6}  {'event':<34} {'base':>4} {'effective':>9}")
for minute, label, action, parked in timeline:
    if action == "bump":
        state = on_late_departure(state, config)
    elif action == "reset":
        state = on_reset_tick(state, config, now=minute)
    eff = effective_buffer(state, config, parked, now=minute, capacity=CAPACITY)
    print(f"{minute:>6}  {label:<34} {state.base:>4} {eff:>9}")

print("\nfor comparison, the static policies never move:")
for size in (0, 1, 3):
    cfg = static_buffer(size)
    eff = effective_buffer(cfg.initial_state(), cfg, occupants(1, 1), now=0,
                           capacity=CAPACITY)
    print(f"  static-{size}: effective buffer {eff} at all times")
