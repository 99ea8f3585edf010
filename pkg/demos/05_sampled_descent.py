"""Sampled descent on a one-layer circuit, iteration by iteration.

The optimizer draws candidate angle vectors from a ball around the
incumbent, keeps the best, and shrinks the ball in proportion to the
improvement. The accepted-expectation trace is non-increasing by
construction. On this restricted circuit the descent settles on the
best schedule the single layer can reach from the start.
"""

from ossvqa import OptimizerConfig, resolve_preset, run_experiment

instance, objective, run = resolve_preset("ossp133-restricted")
settings = dict(run["optimizer"])
settings["seed"] = 0
record = run_experiment(
    instance, objective,
    depth=run["depth"], initial_state=run["initial_state"],
    config=OptimizerConfig(**settings),
    shots=run["shots"], engine=run["engine"],
)

print(f"start {record.initial_state}, {settings['sample_size']} candidates "
      f"per iteration, initial radius {settings['radius']:.4f}")
print("\n iter  expectation  radius   top of histogram")
for k, it in enumerate(record.iterations):
    top = next(iter(it["histogram"].items()))
    print(f"   {k:2d}  {it['expectation']:11.4f}  {it['radius']:.4f}"
          f"   {top[0]} x{top[1]}")

print(f"\nfinal mode {record.mode} with fraction "
      f"{record.dominant_fraction:.3f}")
print(f"value at mode: "
      f"{[r['value'] for r in record.histogram if r['bitstring'] == record.mode][0]:g}; "
      f"true optimum {record.classical_optimum['value']:g} at "
      f"{record.classical_optimum['solutions'][0]} is outside this "
      f"circuit's reachable set")
