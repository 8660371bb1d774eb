"""Buffer policies: how many slots per area are kept non-reservable.

The buffer absorbs arrivals whose reserved spot is still taken by an
overstayer. A static policy keeps a fixed count; the dynamic policy grows
the buffer by one slot each time a vehicle departs late (up to a maximum),
resets it periodically to its initial value, and additionally widens it
while low-reputation users are physically parked in the area.

All three operations are pure: they take a state and return the updated
state, leaving scheduling to the simulation loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable

from .model import SimTime, UserProfile

STATIC = "static"
DYNAMIC = "dynamic"


class BufferInvariantError(RuntimeError):
    """A dynamic buffer left its configured [init, max] band."""


@dataclass(frozen=True)
class BufferPolicyConfig:
    kind: str = STATIC
    size: int = 0  # static policies only
    dynamic_init: int = 2
    dynamic_max: int = 3
    reset_period: int = 1440  # minutes between resets to dynamic_init
    reputation_threshold_stars: int = 2  # occupants below this widen the buffer
    reputation_weight: float = 1.0  # slots added per low-reputation occupant

    def __post_init__(self) -> None:
        if self.kind not in (STATIC, DYNAMIC):
            raise ValueError(f"unknown buffer kind: {self.kind!r}")
        if self.kind == STATIC and self.size < 0:
            raise ValueError("static buffer size must be >= 0")
        if self.dynamic_init > self.dynamic_max:
            raise ValueError("dynamic_init must not exceed dynamic_max")
        if self.reset_period <= 0:
            raise ValueError("reset_period must be positive")
        if self.reputation_weight < 0:
            raise ValueError("reputation_weight must be >= 0")
        if not 0 <= self.reputation_threshold_stars <= 5:
            raise ValueError("reputation_threshold_stars must be in [0, 5]")

    @property
    def label(self) -> str:
        return f"static-{self.size}" if self.kind == STATIC else "dynamic"

    def validate_for_capacity(self, capacity: int) -> None:
        if self.kind == STATIC and self.size > capacity:
            raise ValueError(
                f"static buffer size {self.size} exceeds area capacity {capacity}"
            )
        if self.kind == DYNAMIC and self.dynamic_max > capacity:
            raise ValueError(
                f"dynamic_max {self.dynamic_max} exceeds area capacity {capacity}"
            )

    def initial_state(self) -> "BufferState":
        base = self.size if self.kind == STATIC else self.dynamic_init
        return BufferState(base=base, last_reset=0)


def static_buffer(size: int) -> BufferPolicyConfig:
    return BufferPolicyConfig(kind=STATIC, size=size)


def dynamic_buffer(**overrides) -> BufferPolicyConfig:
    return BufferPolicyConfig(kind=DYNAMIC, **overrides)


@dataclass(frozen=True)
class BufferState:
    """Per-area mutable part of the policy: current base size and last reset."""

    base: int
    last_reset: SimTime = 0


def _check_bounds(state: BufferState, config: BufferPolicyConfig) -> BufferState:
    if config.kind == DYNAMIC and not (
        config.dynamic_init <= state.base <= config.dynamic_max
    ):
        raise BufferInvariantError(
            f"buffer base {state.base} outside "
            f"[{config.dynamic_init}, {config.dynamic_max}]"
        )
    return state


def effective_buffer(
    state: BufferState,
    config: BufferPolicyConfig,
    occupants: Iterable[UserProfile],
    now: SimTime,
    capacity: int,
) -> int:
    """Number of slots excluded from reservation admission right now.

    Static: the configured size. Dynamic: the current base plus one slot
    per ``reputation_weight`` low-reputation occupant, capped at
    ``dynamic_max``. Never exceeds the area capacity.
    """
    if config.kind == STATIC:
        return min(config.size, capacity)
    _check_bounds(state, config)
    low_rep = sum(1 for p in occupants if p.stars < config.reputation_threshold_stars)
    widened = state.base + math.floor(config.reputation_weight * low_rep)
    return min(config.dynamic_max, widened, capacity)


def on_late_departure(state: BufferState, config: BufferPolicyConfig) -> BufferState:
    """Grow the dynamic base by one slot, saturating at the maximum."""
    if config.kind == STATIC:
        return state
    new_state = replace(state, base=min(state.base + 1, config.dynamic_max))
    return _check_bounds(new_state, config)


def on_reset_tick(
    state: BufferState, config: BufferPolicyConfig, now: SimTime
) -> BufferState:
    """Periodic reset of the dynamic base to its initial value."""
    if config.kind == STATIC:
        return state
    return _check_bounds(BufferState(base=config.dynamic_init, last_reset=now), config)
