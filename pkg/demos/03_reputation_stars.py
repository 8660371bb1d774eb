"""Star trajectories: a punctual driver against a chronic overstayer.

Both start at 3 stars. The punctual driver climbs to 5 and enjoys a fee
discount; the overstayer slides toward suspension territory and pays a
surcharge, and its benefit counter never survives an overstay.
"""

from parksim import RewardConfig, UserProfile, compute_fee
from parksim.reward import record_on_time, record_overstay

cfg = RewardConfig()  # 5 benefits per star up, 5 warnings per star down

punctual = UserProfile(id=1, stars=3)
overstayer = UserProfile(id=2, stars=3)

print(f"{'session':>7} | {'punctual':^22} | {'overstayer':^28}")
print(f"{'':>7} | {'stars':>5} {'benefits':>8} | "
      f"{'stars':>5} {'warnings':>8} {'suspended':>9}")
for session in range(1, 13):
    punctual = record_on_time(punctual, cfg)
    overstayer = record_overstay(overstayer, cfg)
    print(f"{session:>7} | {punctual.stars:>5} {punctual.benefits:>8} | "
          f"{overstayer.stars:>5} {overstayer.warnings:>8} "
          f"{overstayer.suspended_sessions:>9}")

print("\ntwo-hour parking fee at each reputation level "
      f"(base rate {cfg.base_rate}/h):")
for stars in range(5, -1, -1):
    print(f"  {stars} stars -> {compute_fee(stars, 120, cfg):.2f}")
