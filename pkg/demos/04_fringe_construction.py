"""Grow features with unsupervised clustering trees.

The alternative constructor builds binary decision trees whose splits
minimize intra-cluster variance, then turns the "fringe" of each tree —
the last two tests on every root-to-leaf path — into new conjunctive
features.  The loop is append-only and runs until no new feature appears
or the budget is hit.
"""

import numpy as np

from boolfc import Dataset, UfringeConfig, report, to_text, ufringe_run


def make_dataset(seed: int = 2, n: int = 120) -> Dataset:
    rng = np.random.default_rng(seed)
    base = rng.random(n) < 0.5
    cols = {
        "a": base,
        "b": base ^ (rng.random(n) < 0.15),
        "c": rng.random(n) < 0.4,
        "d": rng.random(n) < 0.6,
    }
    return Dataset(list(cols), np.column_stack(list(cols.values())))


def main() -> None:
    d = make_dataset()
    fs = ufringe_run(d, UfringeConfig(max_features=25, min_leaf=5, max_depth=6))
    print(f"grew {d.k} primitives into {fs.m} features:")
    for e in fs.members:
        print("   ", to_text(e))
    rep = report(fs)
    print(f"\nOI={rep.oi:.4f}  C0={rep.c0:.4f}  C1={rep.c1:.4f}")


if __name__ == "__main__":
    main()
