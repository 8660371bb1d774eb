"""Shared domain types for the parking reservation engine.

Conventions used throughout the package:

- Time is an integer number of minutes since simulation start (``SimTime``).
  All durations are whole minutes; one hour is 60.
- A reservation is for a parking *area*, not a specific slot. Vehicles park
  in any free spot, so physical occupancy is just the set of vehicles
  currently inside an area.
- Money is a plain float in abstract currency units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, TYPE_CHECKING

if TYPE_CHECKING:
    from .buffers import BufferState

SimTime = int
Location = tuple[float, float]

# Every user starts here; also anchors the fee multiplier (see reward module).
INITIAL_STARS = 3
MAX_STARS = 5


class ReservationState(Enum):
    ACCEPTED = "accepted"
    ARRIVED = "arrived"
    REDIRECTED = "redirected"
    DEPARTED = "departed"
    NO_PARK = "no_park"
    REJECTED = "rejected"


# Allowed lifecycle edges. REJECTED is terminal from creation; REDIRECTED
# reservations keep their state and reference the replacement reservation
# that carries the vehicle's claim at the alternative area.
VALID_TRANSITIONS: dict[ReservationState, frozenset[ReservationState]] = {
    ReservationState.ACCEPTED: frozenset(
        {ReservationState.ARRIVED, ReservationState.REDIRECTED, ReservationState.NO_PARK}
    ),
    ReservationState.REDIRECTED: frozenset(
        {ReservationState.ARRIVED, ReservationState.NO_PARK}
    ),
    ReservationState.ARRIVED: frozenset({ReservationState.DEPARTED}),
    ReservationState.DEPARTED: frozenset(),
    ReservationState.NO_PARK: frozenset(),
    ReservationState.REJECTED: frozenset(),
}


class InvalidTransition(RuntimeError):
    """A reservation was asked to move along an edge the lifecycle forbids."""


class RejectionReason(Enum):
    CAPACITY_FULL = "capacity_full"
    LOW_REPUTATION = "low_reputation"
    NO_CREDIT = "no_credit"
    SUSPENDED = "suspended"


@dataclass
class Reservation:
    """One accepted (or refused) claim on an area for a time window.

    The window is the half-open interval ``[start, start + duration)``:
    departing exactly at ``end`` is on time.
    """

    id: int
    user: int
    area: int
    start: SimTime
    duration: int
    state: ReservationState = ReservationState.ACCEPTED
    actual_departure: Optional[SimTime] = None
    reserved_fee: float = 0.0
    is_redirect_replacement: bool = False
    replaced_by: Optional[int] = None
    # Effective buffer at the moment this reservation passed admission;
    # None for auto-placed redirect replacements, which skip that check.
    buffer_at_acceptance: Optional[int] = None

    @property
    def end(self) -> SimTime:
        return self.start + self.duration

    def transition(self, new_state: ReservationState) -> None:
        if new_state not in VALID_TRANSITIONS[self.state]:
            raise InvalidTransition(
                f"reservation {self.id}: {self.state.value} -> {new_state.value}"
            )
        self.state = new_state


@dataclass
class UserProfile:
    """Reputation and payment state of one user.

    Stars live on a 0..5 scale; ``benefits`` and ``warnings`` are the
    counters that roll over into star gains/losses. ``suspended_sessions``
    counts upcoming reservation attempts that will be refused outright.
    """

    id: int
    stars: int = INITIAL_STARS
    benefits: int = 0
    warnings: int = 0
    credit: float = 0.0
    suspended_sessions: int = 0


@dataclass
class ParkingArea:
    """A gated parking area with uniform, interchangeable slots."""

    id: int
    capacity: int
    location: Location
    # vehicle id -> the ARRIVED reservation that let it in
    occupied: dict[int, Reservation] = field(default_factory=dict)
    # window-active reservations (accepted or arrived, window not elapsed)
    ledger: list[Reservation] = field(default_factory=list)
    buffer_state: "BufferState" = None  # type: ignore[assignment]

    def free_slots(self) -> int:
        return self.capacity - len(self.occupied)


@dataclass
class RunMetrics:
    """Counters collected over one simulation run."""

    no_park: int = 0
    no_reservation: int = 0
    completed_parks: int = 0
    overstays: int = 0
    redirects: int = 0
    reservation_requests: int = 0
    # rejection breakdown (sums to no_reservation)
    rejected_capacity: int = 0
    rejected_reputation: int = 0
    rejected_credit: int = 0
    rejected_suspended: int = 0
    peak_occupancy: int = 0


def distance(a: ParkingArea, b: ParkingArea) -> float:
    """Euclidean distance between two areas' locations."""
    return math.hypot(a.location[0] - b.location[0], a.location[1] - b.location[1])


def distance_between(a: Location, b: Location) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])
