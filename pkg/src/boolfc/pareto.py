"""Grid sweeps over (threshold, iteration cap), Pareto-front extraction
in the (OI, C0) plane, and the closest-point selection rule."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, TextIO

from .dataset import Dataset
from .ufc import FixedMode, UfcConfig, ufc_run

SWEEP_CSV_HEADER = "lambda,limit_iter,num_features,oi,c0,c1,rms"


@dataclass(frozen=True)
class Solution:
    """One run's summary point for Pareto analysis."""

    threshold: float
    limit_iter: int
    num_features: int
    oi: float
    c0: float
    c1: float
    rms: float
    features_path: Optional[str] = None

    def distance_to_origin(self) -> float:
        return math.sqrt(self.oi * self.oi + self.c0 * self.c0)


def sweep(
    d: Dataset,
    thresholds: Sequence[float],
    iters: Sequence[int],
    pruning: bool = False,
) -> list[Solution]:
    """One Solution per (threshold, limit_iter) grid point.  A single run
    at max(iters) per threshold provides every lower-iteration point from
    its trajectory, which matches independent runs exactly."""
    if not thresholds or not iters:
        raise ValueError("sweep grids must be non-empty")
    iters = sorted(set(int(t) for t in iters))
    if iters[0] < 1:
        raise ValueError("iteration counts must be >= 1")
    out: list[Solution] = []
    for lam in thresholds:
        cfg = UfcConfig(FixedMode(lam, iters[-1]), candidate_pruning=pruning)
        result = ufc_run(d, cfg)
        traj = result.trajectory
        for t in iters:
            rep = traj[min(t, len(traj) - 1)]
            out.append(
                Solution(
                    threshold=float(lam),
                    limit_iter=t,
                    num_features=rep.m,
                    oi=rep.oi,
                    c0=rep.c0,
                    c1=rep.c1,
                    rms=rep.rms,
                )
            )
    return out


def _dominates(p: Solution, q: Solution) -> bool:
    return p.oi <= q.oi and p.c0 <= q.c0 and (p.oi < q.oi or p.c0 < q.c0)


def pareto_front(sols: Sequence[Solution]) -> list[Solution]:
    """Non-dominated subset, sorted by OI ascending; coordinate duplicates
    collapse to the first in input order."""
    front: list[Solution] = []
    seen: set[tuple[float, float]] = set()
    for s in sols:
        if (s.oi, s.c0) in seen:
            continue
        if any(_dominates(other, s) for other in sols):
            continue
        seen.add((s.oi, s.c0))
        front.append(s)
    front.sort(key=lambda s: (s.oi, s.c0))
    return front


def closest_point(sols: Sequence[Solution]) -> Solution:
    """Solution with minimal Euclidean distance to the ideal point (0, 0);
    ties broken by smaller C0, then smaller threshold, then fewer iterations."""
    if not sols:
        raise ValueError("closest_point needs at least one solution")
    return min(
        sols,
        key=lambda s: (s.distance_to_origin(), s.c0, s.threshold, s.limit_iter),
    )


def write_sweep_csv(sols: Iterable[Solution], out: TextIO) -> None:
    out.write(SWEEP_CSV_HEADER + "\n")
    for s in sols:
        out.write(
            f"{s.threshold:.10g},{s.limit_iter},{s.num_features},"
            f"{s.oi:.10g},{s.c0:.10g},{s.c1:.10g},{s.rms:.10g}\n"
        )


def read_sweep_csv(stream: TextIO) -> list[Solution]:
    reader = csv.reader(stream)
    header = next(reader)
    if ",".join(h.strip() for h in header) != SWEEP_CSV_HEADER:
        raise ValueError(f"unexpected sweep CSV header: {header}")
    out = []
    for row in reader:
        if not row:
            continue
        lam, limit_iter, m, oi, c0, c1, rms_ = row
        out.append(
            Solution(
                threshold=float(lam),
                limit_iter=int(limit_iter),
                num_features=int(m),
                oi=float(oi),
                c0=float(c0),
                c1=float(c1),
                rms=float(rms_),
            )
        )
    return out


def solution_json_dict(s: Solution) -> dict:
    return {
        "lambda": s.threshold,
        "limit_iter": s.limit_iter,
        "num_features": s.num_features,
        "oi": s.oi,
        "c0": s.c0,
        "c1": s.c1,
        "rms": s.rms,
        "features_path": s.features_path,
    }
