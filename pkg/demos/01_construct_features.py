"""Construct conjunctive features from a redundant Boolean dataset.

Builds a synthetic dataset whose columns come in near-duplicate groups,
then runs the iterative construction in both modes:

  * fixed mode: a hand-picked correlation threshold and iteration cap;
  * risk mode: the threshold is derived from a significance level and the
    run stops at the minimum of the RMS(OI, C0) criterion.
"""

import numpy as np

from boolfc import (
    Dataset,
    FixedMode,
    RiskMode,
    UfcConfig,
    to_text,
    ufc_run,
)


def make_dataset(seed: int = 0, n: int = 200) -> Dataset:
    rng = np.random.default_rng(seed)
    cols = {}
    for g in range(3):
        base = rng.random(n) < 0.5
        cols[f"g{g}a"] = base
        cols[f"g{g}b"] = base ^ (rng.random(n) < 0.12)  # noisy copy
        cols[f"g{g}c"] = rng.random(n) < 0.5            # independent
    return Dataset(list(cols), np.column_stack(list(cols.values())))


def show(result, title: str) -> None:
    print(f"\n== {title} ==")
    print(f"threshold={result.threshold:.4f}  stop={result.stop_reason}  "
          f"iterations={result.iterations}")
    for e in result.features.members:
        print("   ", to_text(e))
    rep = result.final_report()
    print(f"OI={rep.oi:.4f}  C0={rep.c0:.4f}  C1={rep.c1:.4f}  RMS={rep.rms:.4f}")


def main() -> None:
    d = make_dataset()
    print(f"dataset: {d.n} rows x {d.k} primitive features")

    show(ufc_run(d, UfcConfig(FixedMode(threshold=0.3, limit_iter=3))),
         "fixed mode (lambda=0.3, 3 iterations)")

    result = ufc_run(d, UfcConfig(RiskMode(alpha=0.001)))
    show(result, "risk mode (alpha=0.001, RMS-minimum stop)")
    print("\nRMS trajectory (last value is the rolled-back overshoot):")
    for t, rep in enumerate(result.trajectory):
        print(f"  iter {t}: m={rep.m:2d}  OI={rep.oi:.4f}  "
              f"C0={rep.c0:.4f}  RMS={rep.rms:.4f}")


if __name__ == "__main__":
    main()
