"""Reservation-based parking management: engine, reputation, simulator.

The package models gated parking areas where access requires a
reservation. Admission keeps a configurable buffer of non-reservable
slots per area; a star-based reputation system rewards punctual
departures and punishes overstays; a deterministic discrete-event
simulator drives vehicle populations through the system and reports how
often reservations are refused (NO RESERVATION) and how often a valid
reservation finds no physical spot (NO PARK).
"""

from .admission import (
    ArrivalOutcome,
    DepartureRecord,
    ParkingEngine,
    ReservationDecision,
)
from .buffers import (
    BufferPolicyConfig,
    BufferState,
    dynamic_buffer,
    effective_buffer,
    on_late_departure,
    on_reset_tick,
    static_buffer,
)
from .experiments import (
    ExperimentSpec,
    ResultTable,
    emit_csv,
    emit_plot_data,
    emit_runs_csv,
    run_experiment,
)
from .model import (
    ParkingArea,
    RejectionReason,
    Reservation,
    ReservationState,
    RunMetrics,
    UserProfile,
    distance,
)
from .reward import (
    RewardConfig,
    admission_verdict,
    compute_fee,
    record_on_time,
    record_overstay,
)
from .simulator import (
    AveragedMetrics,
    RunResult,
    Scenario,
    ScenarioConfig,
    VehicleAgent,
    build_scenario,
    run,
    run_averaged,
)

__version__ = "0.1.0"

__all__ = [
    "ArrivalOutcome",
    "AveragedMetrics",
    "BufferPolicyConfig",
    "BufferState",
    "DepartureRecord",
    "ExperimentSpec",
    "ParkingArea",
    "ParkingEngine",
    "RejectionReason",
    "Reservation",
    "ReservationDecision",
    "ReservationState",
    "ResultTable",
    "RewardConfig",
    "RunMetrics",
    "RunResult",
    "Scenario",
    "ScenarioConfig",
    "UserProfile",
    "VehicleAgent",
    "admission_verdict",
    "build_scenario",
    "compute_fee",
    "distance",
    "dynamic_buffer",
    "effective_buffer",
    "emit_csv",
    "emit_plot_data",
    "emit_runs_csv",
    "on_late_departure",
    "on_reset_tick",
    "record_on_time",
    "record_overstay",
    "run",
    "run_averaged",
    "run_experiment",
    "static_buffer",
]
