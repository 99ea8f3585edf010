"""A full variational run: alternating phase and mixer layers, a
derivative-free trust-region search over the angles, and a seeded
1024-shot measurement at the best parameters found.

Everything downstream of the seed is deterministic, so the histogram
below reproduces bit for bit on every machine.
"""

from ossvqa import OptimizerConfig, resolve_preset, run_experiment

instance, objective, run = resolve_preset("ossp224")
settings = dict(run["optimizer"])
settings["seed"] = 0
record = run_experiment(
    instance, objective,
    depth=run["depth"], initial_state=run["initial_state"],
    config=OptimizerConfig(**settings),
    shots=run["shots"], engine=run["engine"],
)

print(f"start {record.initial_state}, depth {record.depth}, "
      f"{record.config['kind']} optimizer, seed {record.seed}")
print(f"best expectation {record.best_expectation:.3f} after "
      f"{record.n_evaluations} evaluations (status {record.status})")
print(f"classical optimum {record.classical_optimum['value']:g} at "
      f"{record.classical_optimum['solutions']}")

print(f"\n{record.shots}-shot histogram at the best parameters:")
print(" count  value  feasible  schedule")
for row in record.histogram[:8]:
    print(f"  {row['count']:4d}  {row['value']:5g}  {str(row['feasible']):8s}"
          f"  {row['bitstring']}")
if len(record.histogram) > 8:
    print(f"  ... {len(record.histogram) - 8} more strings")

print(f"\nmode {record.mode} with fraction {record.dominant_fraction:.3f}; "
      f"feasible mass {record.feasible_fraction:.3f}")
print(f"best feasible sample: {record.best_feasible['bitstring']} at "
      f"value {record.best_feasible['value']:g}")
