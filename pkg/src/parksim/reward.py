"""Star-based reputation: benefits, warnings, suspension, and fees.

Users hold 0..5 stars, starting at 3. Each on-time departure registers a
benefit; collecting ``benefits_per_star`` of them converts into one star.
Each overstay registers a warning *and wipes the benefit counter*;
collecting ``warnings_per_star`` warnings costs one star. Overstaying while
(after the update) below ``suspension_threshold_stars`` bars the user for
one subsequent session, i.e. their next reservation attempt is refused.

Reputation also scales the parking fee: the hourly rate is multiplied by
``1 + star_fee_step * (3 - stars)``, so the multiplier is neutral at the
initial 3 stars, cheaper above, and more expensive below (floored at zero).

All functions here are pure; the caller stores the returned profile.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .model import INITIAL_STARS, MAX_STARS, RejectionReason, UserProfile


@dataclass(frozen=True)
class RewardConfig:
    benefits_per_star: int = 5   # on-time departures needed to gain a star
    warnings_per_star: int = 5   # overstays needed to lose a star
    suspension_threshold_stars: int = 2
    admission_min_stars: int = 1
    base_rate: float = 2.0       # money per hour at the 3-star anchor
    star_fee_step: float = 0.1   # fee multiplier step per star away from 3

    def __post_init__(self) -> None:
        if self.benefits_per_star < 1 or self.warnings_per_star < 1:
            raise ValueError("benefits_per_star and warnings_per_star must be >= 1")
        if not 0 <= self.suspension_threshold_stars <= MAX_STARS:
            raise ValueError("suspension_threshold_stars must be in [0, 5]")
        if not 0 <= self.admission_min_stars <= MAX_STARS:
            raise ValueError("admission_min_stars must be in [0, 5]")
        if self.base_rate < 0 or self.star_fee_step < 0:
            raise ValueError("base_rate and star_fee_step must be >= 0")


def record_on_time(profile: UserProfile, cfg: RewardConfig) -> UserProfile:
    """Register a benefit; promote one star when the counter fills up."""
    benefits = profile.benefits + 1
    stars = profile.stars
    if benefits == cfg.benefits_per_star:
        stars = min(MAX_STARS, stars + 1)
        benefits = 0
    return replace(profile, stars=stars, benefits=benefits)


def record_overstay(profile: UserProfile, cfg: RewardConfig) -> UserProfile:
    """Register a warning, reset benefits; demote and maybe suspend."""
    warnings = profile.warnings + 1
    stars = profile.stars
    if warnings == cfg.warnings_per_star:
        stars = max(0, stars - 1)
        warnings = 0
    suspended = profile.suspended_sessions
    if stars < cfg.suspension_threshold_stars:
        suspended += 1
    return replace(
        profile, stars=stars, benefits=0, warnings=warnings,
        suspended_sessions=suspended,
    )


def admission_verdict(
    profile: UserProfile, estimated_fee: float, cfg: RewardConfig
) -> Optional[RejectionReason]:
    """Why this user may not reserve right now, or None if they may.

    Checked in order: suspension, reputation, credit. A SUSPENDED verdict
    is the signal that one suspended session must be consumed by the
    caller (the refused attempt *is* the barred session).
    """
    if profile.suspended_sessions > 0:
        return RejectionReason.SUSPENDED
    if profile.stars < cfg.admission_min_stars:
        return RejectionReason.LOW_REPUTATION
    if profile.credit < estimated_fee:
        return RejectionReason.NO_CREDIT
    return None


def compute_fee(stars: int, minutes_parked: int, cfg: RewardConfig) -> float:
    """Parking fee for a stay, scaled by the user's reputation."""
    if minutes_parked < 0:
        raise ValueError("minutes_parked must be >= 0")
    multiplier = 1.0 + cfg.star_fee_step * (INITIAL_STARS - stars)
    return max(0.0, cfg.base_rate * (minutes_parked / 60.0) * multiplier)
