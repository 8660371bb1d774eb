"""Reservation engine: admission, arrival with one redirect, departure.

The engine owns all per-area and per-user state for one simulation and is
driven by a single caller (the event loop, or a test). The flow for one
reservation:

1. ``request_reservation`` admits a request iff the user passes the
   reputation/credit checks and the concurrent demand around the arrival
   time stays below ``capacity - effective_buffer``. The admission promise
   covers the first ``admission_horizon`` minutes of the stay (default:
   the arrival minute); beyond that, free slots are not guaranteed and the
   buffer exists to absorb the fallout of late departures. The estimated
   fee is reserved against the user's credit.
2. ``handle_arrival`` parks the vehicle if a physical slot is free.
   Otherwise the engine suggests the nearest area with a free spot and
   auto-places a replacement reservation there (skipping the buffer check,
   not the physical one). At most one redirect: if the replacement also
   finds the area full, the outcome is NO PARK.
3. ``handle_departure`` frees the slot, settles the fee, and feeds the
   reward module and (on late departures) the dynamic buffer policy.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil
from typing import Optional

from . import buffers, reward
from .model import (
    Location,
    ParkingArea,
    RejectionReason,
    Reservation,
    ReservationState,
    RunMetrics,
    SimTime,
    UserProfile,
    distance_between,
)

# States whose window claims capacity during admission.
_COUNTED_STATES = (ReservationState.ACCEPTED, ReservationState.ARRIVED)


@dataclass(frozen=True)
class ReservationDecision:
    reservation: Optional[Reservation] = None
    reason: Optional[RejectionReason] = None

    @property
    def accepted(self) -> bool:
        return self.reservation is not None

    def __post_init__(self) -> None:
        if (self.reservation is None) == (self.reason is None):
            raise ValueError("decision carries either a reservation or a reason")


PARKED = "parked"
REDIRECTED = "redirected"
NO_PARK = "no_park"


@dataclass(frozen=True)
class ArrivalOutcome:
    kind: str  # PARKED | REDIRECTED | NO_PARK
    area: Optional[int] = None  # where the vehicle ended up / was sent
    replacement: Optional[Reservation] = None  # set iff kind == REDIRECTED


@dataclass(frozen=True)
class DepartureRecord:
    on_time: bool
    overstay_minutes: int
    fee: float


class ParkingEngine:
    def __init__(
        self,
        areas: dict[int, ParkingArea],
        profiles: dict[int, UserProfile],
        buffer_config: buffers.BufferPolicyConfig,
        reward_config: reward.RewardConfig,
        travel_minutes_per_unit: float,
        admission_horizon: Optional[int] = 1,
        metrics: Optional[RunMetrics] = None,
    ):
        if admission_horizon is not None and admission_horizon < 1:
            raise ValueError("admission_horizon must be >= 1 minute (or None)")
        self.areas = areas
        self.profiles = profiles
        self.buffer_config = buffer_config
        self.reward_config = reward_config
        self.travel_minutes_per_unit = travel_minutes_per_unit
        self.admission_horizon = admission_horizon
        self.metrics = metrics if metrics is not None else RunMetrics()
        self.reservations: dict[int, Reservation] = {}
        self._next_reservation_id = 0
        # (time, area, base, cause) whenever a dynamic base changes; used to
        # audit the policy's bounds and inter-reset monotonicity.
        self.buffer_trace: list[tuple[SimTime, int, int, str]] = []
        for area in areas.values():
            buffer_config.validate_for_capacity(area.capacity)
            if area.buffer_state is None:
                area.buffer_state = buffer_config.initial_state()

    # ----- helpers -------------------------------------------------------

    def travel_minutes(self, origin: Location, area_id: int) -> int:
        dist = distance_between(origin, self.areas[area_id].location)
        return ceil(dist * self.travel_minutes_per_unit)

    def effective_buffer(self, area: ParkingArea, now: SimTime) -> int:
        occupants = [self.profiles[v] for v in area.occupied]
        return buffers.effective_buffer(
            area.buffer_state, self.buffer_config, occupants, now, area.capacity
        )

    def _prune_ledger(self, area: ParkingArea, now: SimTime) -> None:
        area.ledger = [
            r for r in area.ledger if r.state in _COUNTED_STATES and r.end > now
        ]

    def _new_reservation(self, **kwargs) -> Reservation:
        res = Reservation(id=self._next_reservation_id, **kwargs)
        self._next_reservation_id += 1
        self.reservations[res.id] = res
        return res

    # ----- operations ----------------------------------------------------

    def overlap_count(
        self,
        area: ParkingArea,
        window_start: SimTime,
        window_end: SimTime,
        now: SimTime,
        exclude: Optional[Reservation] = None,
    ) -> int:
        """Peak concurrent demand on ``area`` over ``[window_start, window_end)``.

        Counts, minute by minute, the window-active reservations covering
        that minute, and adds the current overstayers (vehicles parked past
        their window's end) for the whole window, since there is no telling
        when they will leave. Implemented as an endpoint sweep; a
        minute-by-minute scan gives the same answer.
        """
        if window_end <= window_start:
            raise ValueError("window must be non-empty")
        self._prune_ledger(area, now)
        overstayers = sum(1 for r in area.occupied.values() if r.end <= now)
        deltas: list[tuple[SimTime, int]] = []
        for r in area.ledger:
            if exclude is not None and r.id == exclude.id:
                continue
            lo = max(r.start, window_start)
            hi = min(r.end, window_end)
            if lo < hi:
                deltas.append((lo, 1))
                deltas.append((hi, -1))
        peak = 0
        level = 0
        for _, step in sorted(deltas):
            level += step
            peak = max(peak, level)
        return peak + overstayers

    def request_reservation(
        self,
        user_id: int,
        area_id: int,
        start: SimTime,
        duration: int,
        now: SimTime,
    ) -> ReservationDecision:
        """Admit or refuse a reservation for ``[start, start + duration)``.

        The capacity rule checks peak demand over the admission horizon
        (the leading slice of the window), so the promise made to the user
        is a free slot at arrival, not for the whole stay.
        """
        if start < now:
            raise ValueError("reservation start lies in the past")
        if duration <= 0:
            raise ValueError("duration must be positive")
        self.metrics.reservation_requests += 1
        profile = self.profiles[user_id]
        area = self.areas[area_id]

        estimated_fee = reward.compute_fee(profile.stars, duration, self.reward_config)
        verdict = reward.admission_verdict(profile, estimated_fee, self.reward_config)
        if verdict is not None:
            if verdict is RejectionReason.SUSPENDED:
                # The refused attempt is the barred session.
                profile.suspended_sessions -= 1
                self.metrics.rejected_suspended += 1
            elif verdict is RejectionReason.LOW_REPUTATION:
                self.metrics.rejected_reputation += 1
            else:
                self.metrics.rejected_credit += 1
            self.metrics.no_reservation += 1
            return ReservationDecision(reason=verdict)

        buf = self.effective_buffer(area, now)
        checked = duration
        if self.admission_horizon is not None:
            checked = min(duration, self.admission_horizon)
        demand = self.overlap_count(area, start, start + checked, now)
        if demand >= area.capacity - buf:
            self.metrics.rejected_capacity += 1
            self.metrics.no_reservation += 1
            return ReservationDecision(reason=RejectionReason.CAPACITY_FULL)

        res = self._new_reservation(
            user=user_id,
            area=area_id,
            start=start,
            duration=duration,
            reserved_fee=estimated_fee,
            buffer_at_acceptance=buf,
        )
        area.ledger.append(res)
        profile.credit -= estimated_fee
        return ReservationDecision(reservation=res)

    def suggest_alternative(self, origin_id: int, now: SimTime) -> Optional[int]:
        """Nearest other area with a free physical slot, ties by lowest id."""
        origin = self.areas[origin_id]
        best: Optional[tuple[float, int]] = None
        for area in self.areas.values():
            if area.id == origin_id or area.free_slots() <= 0:
                continue
            key = (distance_between(origin.location, area.location), area.id)
            if best is None or key < best:
                best = key
        return None if best is None else best[1]

    def handle_arrival(self, res: Reservation, now: SimTime) -> ArrivalOutcome:
        """Park the vehicle, redirect it once, or record a failed park."""
        if res.state is not ReservationState.ACCEPTED:
            raise RuntimeError(
                f"arrival for reservation {res.id} in state {res.state.value}"
            )
        area = self.areas[res.area]
        if len(area.occupied) < area.capacity:
            res.transition(ReservationState.ARRIVED)
            area.occupied[res.user] = res
            if len(area.occupied) > area.capacity:
                raise RuntimeError(f"area {area.id} exceeded physical capacity")
            total = sum(len(a.occupied) for a in self.areas.values())
            self.metrics.peak_occupancy = max(self.metrics.peak_occupancy, total)
            return ArrivalOutcome(kind=PARKED, area=area.id)

        alternative = (
            None if res.is_redirect_replacement else self.suggest_alternative(area.id, now)
        )
        if alternative is None:
            res.transition(ReservationState.NO_PARK)
            self.profiles[res.user].credit += res.reserved_fee
            res.reserved_fee = 0.0
            self._prune_ledger(area, now)
            self.metrics.no_park += 1
            return ArrivalOutcome(kind=NO_PARK, area=area.id)

        travel = self.travel_minutes(area.location, alternative)
        replacement = self._new_reservation(
            user=res.user,
            area=alternative,
            start=now + travel,
            duration=res.duration,
            reserved_fee=res.reserved_fee,
            is_redirect_replacement=True,
        )
        res.reserved_fee = 0.0
        res.transition(ReservationState.REDIRECTED)
        res.replaced_by = replacement.id
        self.areas[alternative].ledger.append(replacement)
        self._prune_ledger(area, now)
        self.metrics.redirects += 1
        return ArrivalOutcome(kind=REDIRECTED, area=alternative, replacement=replacement)

    def handle_departure(self, res: Reservation, now: SimTime) -> DepartureRecord:
        """Free the slot, settle the fee, update reputation and buffer."""
        if res.state is not ReservationState.ARRIVED:
            raise RuntimeError(
                f"departure for reservation {res.id} in state {res.state.value}"
            )
        area = self.areas[res.area]
        area.occupied.pop(res.user)
        res.transition(ReservationState.DEPARTED)
        res.actual_departure = now

        on_time = now <= res.end
        overstay = max(0, now - res.end)
        profile = self.profiles[res.user]
        fee = reward.compute_fee(profile.stars, now - res.start, self.reward_config)
        profile.credit = max(0.0, profile.credit + res.reserved_fee - fee)
        res.reserved_fee = 0.0

        if on_time:
            self.profiles[res.user] = reward.record_on_time(profile, self.reward_config)
        else:
            self.profiles[res.user] = reward.record_overstay(profile, self.reward_config)
            area.buffer_state = buffers.on_late_departure(
                area.buffer_state, self.buffer_config
            )
            if self.buffer_config.kind == buffers.DYNAMIC:
                self.buffer_trace.append(
                    (now, area.id, area.buffer_state.base, "late_departure")
                )
            self.metrics.overstays += 1

        self._prune_ledger(area, now)
        self.metrics.completed_parks += 1
        return DepartureRecord(on_time=on_time, overstay_minutes=overstay, fee=fee)

    def request_extension(self, res: Reservation, extra: int, now: SimTime) -> bool:
        """Extend an ongoing stay iff the extra window passes admission.

        The check re-runs the capacity rule on ``[end, end + extra)`` with
        this reservation excluded; granted extensions enlarge the window so
        the later departure stays on time.
        """
        if res.state is not ReservationState.ARRIVED:
            raise RuntimeError("only an ongoing stay can be extended")
        if extra <= 0:
            raise ValueError("extension must be positive")
        if now >= res.end:
            raise ValueError("extension requested after the window ended")
        area = self.areas[res.area]
        buf = self.effective_buffer(area, now)
        demand = self.overlap_count(area, res.end, res.end + extra, now, exclude=res)
        if demand >= area.capacity - buf:
            return False
        res.duration += extra
        return True

    def on_buffer_reset_tick(self, area_id: int, now: SimTime) -> None:
        area = self.areas[area_id]
        area.buffer_state = buffers.on_reset_tick(
            area.buffer_state, self.buffer_config, now
        )
        if self.buffer_config.kind == buffers.DYNAMIC:
            self.buffer_trace.append((now, area_id, area.buffer_state.base, "reset"))
