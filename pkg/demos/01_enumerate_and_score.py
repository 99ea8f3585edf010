"""Enumerate every valid schedule of a small open-shop instance and score it.

A schedule assigns each of J jobs to one (machine, time-slot) position,
at most one job per position. Bits are one-hot: bit (m, t, j) says job j
sits at position (m, t). Feasible strings are exactly the injective
assignments, so there are (MT)!/(MT-J)! of them.
"""

from ossvqa import (
    OsspInstance,
    enumerate_solutions,
    evaluate_objective,
    linear_from_rows,
    optimal_solutions,
    solution_count,
)

# two machines, two slots, four jobs: every position is filled ("busy")
instance = OsspInstance(machines=2, time_slots=2, jobs=4)
weights = [
    [3, 2, 2, 3],  # machine 1, slot 1: cost of placing job 1..4 here
    [2, 2, 3, 0],  # machine 1, slot 2
    [2, 2, 4, 2],  # machine 2, slot 1
    [1, 1, 4, 2],  # machine 2, slot 2
]
objective = linear_from_rows(instance, weights)

solutions = enumerate_solutions(instance)
print(f"{instance.n_bits} bits, {len(solutions)} valid schedules "
      f"(formula says {solution_count(instance)})")

scored = sorted(
    (evaluate_objective(objective, instance, z), z) for z in solutions
)
print("\n value  schedule")
for value, z in scored:
    print(f"  {value:4g}  {z}")

best_value, best_set = optimal_solutions(instance, objective)
print(f"\noptimum {best_value:g} attained by {sorted(best_set)}")

# a one-machine, three-slot, three-job instance used throughout the demos
small = OsspInstance(machines=1, time_slots=3, jobs=3)
small_objective = linear_from_rows(small, [[3, 2, 2], [2, 2, 3], [1, 2, 3]])
print(f"\nsmall instance: {len(enumerate_solutions(small))} schedules, "
      f"optimum {optimal_solutions(small, small_objective)[0]:g}")
