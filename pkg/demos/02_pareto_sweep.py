"""Explore the (OI, C0) solution space with a grid sweep.

Every (threshold, iteration-limit) pair yields one candidate feature set.
The Pareto front keeps the non-dominated ones, and the closest-point
heuristic picks the solution nearest the ideal corner (0, 0).
"""

import numpy as np

from boolfc import Dataset, closest_point, pareto_front, sweep


def make_dataset(seed: int = 1, n: int = 250) -> Dataset:
    rng = np.random.default_rng(seed)
    cols = {}
    for g in range(4):
        base = rng.random(n) < 0.5
        cols[f"g{g}a"] = base
        cols[f"g{g}b"] = base ^ (rng.random(n) < 0.15)
    return Dataset(list(cols), np.column_stack(list(cols.values())))


def main() -> None:
    d = make_dataset()
    thresholds = [round(0.05 * i, 2) for i in range(1, 13)]  # 0.05 .. 0.60
    iterations = range(1, 6)
    sols = sweep(d, thresholds, iterations)
    print(f"swept {len(sols)} (lambda, iterations) combinations")

    front = pareto_front(sols)
    print("\nPareto front (OI ascending, C0 descending):")
    for s in front:
        print(f"  lambda={s.threshold:.2f} iters={s.limit_iter}  "
              f"m={s.num_features:2d}  OI={s.oi:.4f}  C0={s.c0:.4f}")

    best = closest_point(sols)
    print(f"\nclosest point to (0,0): lambda={best.threshold:.2f} "
          f"iters={best.limit_iter}  OI={best.oi:.4f}  C0={best.c0:.4f}  "
          f"distance={best.distance_to_origin():.4f}")


if __name__ == "__main__":
    main()
