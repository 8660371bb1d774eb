"""The behavior experiment: what happens as overstayers multiply.

Sweeps the share of bad-behavior vehicles from 25% to 50% (population
drawn per run from [80, 110]), comparing the four buffer strategies.
Also prints the total reservation requests per sweep value: with more
overstayers, vehicles turn over more slowly, so fewer requests fit into
the horizon and the refusal counts must be read against that baseline.
"""

from pathlib import Path

from parksim import ExperimentSpec, emit_csv, emit_plot_data, run_experiment
from parksim.experiments import BAD_FRACTION_SWEEP

out = Path("out/bad_fraction_sweep")
spec = ExperimentSpec(kind=BAD_FRACTION_SWEEP)
table = run_experiment(spec)

print(f"{'bad share':>9} | {'requests':>8} | "
      + " | ".join(f"{lab:^16}" for lab in table.strategy_labels))
print(f"{'':>9} | {'(mean)':>8} | "
      + " | ".join(f"{'no_park':>7} {'no_resv':>8}" for _ in table.strategy_labels))
for value in table.sweep_values:
    requests = table.cell(value, "static-0").mean_requests
    row = []
    for label in table.strategy_labels:
        cell = table.cell(value, label)
        row.append(f"{cell.mean_no_park:>7.1f} {cell.mean_no_reservation:>8.1f}")
    print(f"{value:>9.2f} | {requests:>8.0f} | " + " | ".join(row))

emit_csv(table, out / "results.csv")
emit_plot_data(table, out)
print(f"\nwrote {out}/results.csv and series_*.csv")
