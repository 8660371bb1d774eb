"""Walk one vehicle through the reservation engine, step by step.

Shows the full lifecycle: admission with a fee reserve, arrival into a
free slot, a second vehicle bounced to the nearest alternative area when
its spot is still occupied, and fee settlement on departure.
"""

from parksim import ParkingEngine, ParkingArea, RewardConfig, UserProfile
from parksim.buffers import static_buffer

areas = {
    0: ParkingArea(id=0, capacity=2, location=(0.0, 0.0)),
    1: ParkingArea(id=1, capacity=2, location=(1.0, 0.0)),
}
profiles = {u: UserProfile(id=u, credit=50.0) for u in range(3)}
engine = ParkingEngine(
    areas=areas,
    profiles=profiles,
    buffer_config=static_buffer(0),
    reward_config=RewardConfig(),
    travel_minutes_per_unit=10.0,
)

print("== a reservation is admitted and a fee is reserved ==")
decision = engine.request_reservation(user_id=0, area_id=0, start=60,
                                      duration=120, now=0)
res = decision.reservation
print(f"user 0 books area 0 for [60, 180): accepted={decision.accepted}, "
      f"reserved fee {res.reserved_fee:.2f}, credit now {profiles[0].credit:.2f}")

print("\n== arrival parks in any free spot ==")
outcome = engine.handle_arrival(res, now=60)
print(f"user 0 arrives at minute 60 -> {outcome.kind}, "
      f"area 0 occupancy {len(areas[0].occupied)}/2")

print("\n== an overstayer forces a redirect ==")
# user 1 books the second slot and overstays its [60, 90) window
d1 = engine.request_reservation(user_id=1, area_id=0, start=60, duration=30, now=0)
engine.handle_arrival(d1.reservation, now=60)
# user 2 was promised a spot at minute 100: both area-0 slots are still taken
d2 = engine.request_reservation(user_id=2, area_id=0, start=100, duration=60, now=95)
outcome = engine.handle_arrival(d2.reservation, now=100)
print(f"user 2 arrives at minute 100 -> {outcome.kind} toward area "
      f"{outcome.area} (replacement reservation {outcome.replacement.id}, "
      f"arriving at minute {outcome.replacement.start})")
final = engine.handle_arrival(outcome.replacement, now=outcome.replacement.start)
print(f"user 2 reaches area 1 -> {final.kind}")

print("\n== departures settle fees and feed the reward system ==")
record = engine.handle_departure(d1.reservation, now=150)  # 60 minutes late
print(f"user 1 departs at 150: on_time={record.on_time}, "
      f"overstay {record.overstay_minutes} min, fee {record.fee:.2f}, "
      f"warnings now {engine.profiles[1].warnings}")
record = engine.handle_departure(res, now=180)
print(f"user 0 departs at 180: on_time={record.on_time}, fee {record.fee:.2f}, "
      f"benefits now {engine.profiles[0].benefits}")

print(f"\nrun counters: {engine.metrics}")
