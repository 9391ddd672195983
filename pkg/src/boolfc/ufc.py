"""The uFC construction loop: correlated-pair search, the triple
construction operator, pruning, and the fixed / risk-based run modes."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from . import expr as ex
from .dataset import Dataset, unique_count
from .metrics import FeatureSet, MetricsError, MetricsReport, report
from .stats import ContingencyTable, expected_counts_ok, lambda_from_risk


class UfcError(Exception):
    pass


@dataclass(frozen=True)
class CandidatePair:
    i: int
    j: int
    r: float


@dataclass(frozen=True)
class FixedMode:
    """Fixed correlation threshold and iteration cap."""

    threshold: float
    limit_iter: int

    def __post_init__(self):
        if not 0.0 < self.threshold < 1.0:
            raise ValueError(f"threshold must be in (0, 1), got {self.threshold}")
        if self.limit_iter < 1:
            raise ValueError("limit_iter must be >= 1")


@dataclass(frozen=True)
class RiskMode:
    """Threshold derived from a significance level; stops at the RMS minimum."""

    alpha: float
    hard_cap: int = 100

    def __post_init__(self):
        if not 0.0 < self.alpha < 0.5:
            raise ValueError(f"alpha must be in (0, 0.5), got {self.alpha}")
        if self.hard_cap < 1:
            raise ValueError("hard_cap must be >= 1")


@dataclass(frozen=True)
class UfcConfig:
    mode: Union[FixedMode, RiskMode]
    # None picks the mode default: off for fixed runs, on for risk runs
    candidate_pruning: Optional[bool] = None

    @property
    def pruning(self) -> bool:
        if self.candidate_pruning is None:
            return isinstance(self.mode, RiskMode)
        return self.candidate_pruning


@dataclass
class IterationLog:
    constructed: list[str] = field(default_factory=list)
    pruned: list[str] = field(default_factory=list)


@dataclass
class RunResult:
    features: FeatureSet
    trajectory: list[MetricsReport]
    logs: list[IterationLog]
    stop_reason: str  # fixpoint | iter_limit | rms_minimum | hard_cap
    threshold: float

    @property
    def iterations(self) -> int:
        return len(self.trajectory) - 1

    def final_report(self) -> MetricsReport:
        return report(self.features)

    def to_json_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "stop_reason": self.stop_reason,
            "iterations": self.iterations,
            "features": [ex.to_text(e) for e in self.features.members],
            "final_metrics": json.loads(self.final_report().to_json()),
            "trajectory": [json.loads(r.to_json()) for r in self.trajectory],
            "constructed": [log.constructed for log in self.logs],
            "pruned": [log.pruned for log in self.logs],
        }


def pair_tables(fs: FeatureSet) -> np.ndarray:
    """(m, m, 4) array of contingency counts a, b, c, d for all pairs."""
    ext = fs.extensions.astype(np.int64)
    a = ext.T @ ext
    s = np.count_nonzero(fs.extensions, axis=0)
    b = s[:, None] - a
    c = s[None, :] - a
    d = fs.dataset.n - a - b - c
    return np.stack([a, b, c, d], axis=-1)


def search_correlated_pairs(
    fs: FeatureSet, threshold: float, pruning: bool
) -> list[CandidatePair]:
    """All index pairs i < j with defined r strictly above the threshold,
    sorted by r descending then (i, j) ascending.  With pruning on, pairs
    failing the expected-frequency rule are excluded."""
    n = fs.dataset.n
    tables = pair_tables(fs)
    out: list[CandidatePair] = []
    for i in range(fs.m):
        for j in range(i + 1, fs.m):
            a, b, c, d = (int(v) for v in tables[i, j])
            m1, m2, m3, m4 = a + b, c + d, a + c, b + d
            if min(m1, m2, m3, m4) == 0:
                continue  # constant feature: r undefined, not a candidate
            r = (a * d - b * c) / np.sqrt(
                float(m1) * float(m2) * float(m3) * float(m4)
            )
            if r <= threshold:
                continue
            if pruning and not expected_counts_ok(ContingencyTable(a, b, c, d)):
                continue
            out.append(CandidatePair(i, j, float(r)))
    out.sort(key=lambda p: (-p.r, p.i, p.j))
    return out


def construct_new_features(
    fi: ex.FeatureExpr, fj: ex.FeatureExpr
) -> tuple[ex.FeatureExpr, ex.FeatureExpr, ex.FeatureExpr]:
    """The triple operator: fi&fj, !fi&fj, fi&!fj, in canonical form."""
    if ex.canonical_text(fi) == ex.canonical_text(fj):
        raise UfcError("cannot combine a feature with itself")
    return (
        ex.canonicalize(ex.And(fi, fj)),
        ex.canonicalize(ex.And(ex.Not(fi), fj)),
        ex.canonicalize(ex.And(fi, ex.Not(fj))),
    )


def prune_obsolete_features(fs: FeatureSet, parents: set[str]) -> FeatureSet:
    """Drop zero-support features and the parents of this iteration's
    combinations (parents given by canonical text); order is preserved."""
    supports = fs.supports()
    keep = [
        e
        for e, key, s in zip(fs.members, fs.keys, supports)
        if s > 0 and key not in parents
    ]
    if not keep:
        raise UfcError("pruning removed every feature (degenerate configuration)")
    return FeatureSet(keep, fs.dataset)


def count_common(fs1: FeatureSet, fs2: FeatureSet) -> int:
    """Number of features shared by canonical serialization."""
    return len(fs1.key_set() & fs2.key_set())


def ufc_run(d: Dataset, cfg: UfcConfig) -> RunResult:
    """Run the construction loop to a fixpoint, iteration cap, or the
    RMS minimum (risk mode).  Deterministic for a given (d, cfg)."""
    if unique_count(d) <= d.k:
        raise UfcError(
            f"degenerate dataset: unique rows ({unique_count(d)}) <= features ({d.k})"
        )
    if isinstance(cfg.mode, RiskMode):
        threshold = lambda_from_risk(cfg.mode.alpha, d.n)
        limit = cfg.mode.hard_cap
        risk_mode = True
    else:
        threshold = cfg.mode.threshold
        limit = cfg.mode.limit_iter
        risk_mode = False
    pruning = cfg.pruning

    fs = FeatureSet.from_primitives(d)
    trajectory = [report(fs)]
    logs: list[IterationLog] = []

    while True:
        log = IterationLog()
        candidates = search_correlated_pairs(fs, threshold, pruning)
        used: set[int] = set()
        parents: set[str] = set()
        children: list[ex.FeatureExpr] = []
        child_keys: set[str] = set()
        for pair in candidates:
            if pair.i in used or pair.j in used:
                continue  # remove_candidate: shares a member with a popped pair
            used.update((pair.i, pair.j))
            parents.update((fs.keys[pair.i], fs.keys[pair.j]))
            for child in construct_new_features(
                fs.members[pair.i], fs.members[pair.j]
            ):
                key = ex.to_text(child)
                if key in child_keys or key in fs.keys:
                    continue
                child_keys.add(key)
                children.append(child)
                log.constructed.append(key)

        merged = FeatureSet(list(fs.members) + children, d)
        new_fs = prune_obsolete_features(merged, parents)
        log.pruned = [k for k in merged.keys if k not in set(new_fs.keys)]

        if new_fs.keys == fs.keys:
            return RunResult(fs, trajectory, logs, "fixpoint", threshold)

        logs.append(log)
        prev_fs = fs
        fs = new_fs
        trajectory.append(report(fs))

        if risk_mode and trajectory[-1].rms > trajectory[-2].rms:
            # the previous iteration held the RMS minimum
            return RunResult(prev_fs, trajectory, logs, "rms_minimum", threshold)
        if len(trajectory) - 1 >= limit:
            reason = "hard_cap" if risk_mode else "iter_limit"
            return RunResult(fs, trajectory, logs, reason, threshold)
