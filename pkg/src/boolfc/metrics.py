"""Feature-set quality and complexity measures: OI, C0, C1, RMS."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict
from typing import Iterable, Sequence

import numpy as np

from . import expr as ex
from .dataset import Dataset, unique_count


class MetricsError(Exception):
    pass


class FeatureSet:
    """Ordered feature expressions bound to a dataset, extensions cached.

    Members are deduplicated by canonical serialization; the dataset's
    own columns are the primitive set.
    """

    def __init__(self, members: Sequence[ex.FeatureExpr], dataset: Dataset):
        if len(members) < 1:
            raise MetricsError("a feature set needs at least one member")
        self.dataset = dataset
        self.members = tuple(members)
        self.keys = tuple(ex.canonical_text(e) for e in members)
        if len(set(self.keys)) != len(self.keys):
            dupe = next(k for k in self.keys if self.keys.count(k) > 1)
            raise MetricsError(f"duplicate feature {dupe!r}")
        cols = [ex.evaluate(e, dataset) for e in members]
        ext = np.column_stack(cols)
        ext.setflags(write=False)
        self.extensions = ext  # (n, m) bool

    @classmethod
    def from_primitives(cls, dataset: Dataset) -> "FeatureSet":
        return cls([ex.Prim(name) for name in dataset.feature_names], dataset)

    @property
    def m(self) -> int:
        return len(self.members)

    def supports(self) -> np.ndarray:
        return np.count_nonzero(self.extensions, axis=0)

    def key_set(self) -> frozenset:
        return frozenset(self.keys)

    def __len__(self) -> int:
        return self.m

    def __repr__(self) -> str:
        return f"FeatureSet(m={self.m}, n={self.dataset.n})"


def overlapping_index(fs: FeatureSet) -> float:
    """OI = (sum of feature frequencies - 1) / (m - 1), with a virtual
    "null" feature covering individuals that satisfy no feature."""
    oi, _ = overlapping_index_detail(fs)
    return oi


def overlapping_index_detail(fs: FeatureSet) -> tuple[float, bool]:
    """OI plus whether the virtual null feature was added."""
    n = fs.dataset.n
    sum_p = float(fs.supports().sum()) / n
    uncovered = n - int(np.count_nonzero(fs.extensions.any(axis=1)))
    m = fs.m
    null_added = uncovered > 0
    if null_added:
        sum_p += uncovered / n
        m += 1
    if m < 2:
        raise MetricsError("overlapping index undefined for a single feature")
    return (sum_p - 1.0) / (m - 1), null_added


def complexity_c0(fs: FeatureSet) -> float:
    """Normalized excess feature count (|F| - |P|) / (unique(I) - |P|).

    Floored at 0: a set smaller than the primitives carries no excess.
    """
    k = fs.dataset.k
    if fs.m <= k:
        if fs.m == k and fs.key_set() == frozenset(fs.dataset.feature_names):
            return 0.0
    uniq = unique_count(fs.dataset)
    if uniq <= k:
        raise MetricsError(
            f"complexity undefined: unique rows ({uniq}) <= primitives ({k})"
        )
    return max((fs.m - k) / (uniq - k), 0.0)


def avg_length_c1(fs: FeatureSet) -> float:
    """Mean number of distinct literals per feature."""
    return sum(ex.literal_count(e) for e in fs.members) / fs.m


def rms(oi: float, c0: float) -> float:
    """Root mean square of the two indicators."""
    if not (math.isfinite(oi) and math.isfinite(c0)) or oi < 0 or c0 < 0:
        raise ValueError(f"rms expects finite non-negative inputs, got {oi}, {c0}")
    return math.sqrt((oi * oi + c0 * c0) / 2.0)


@dataclass(frozen=True)
class MetricsReport:
    oi: float
    c0: float
    c1: float
    rms: float
    m: int
    null_added: bool

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    def to_csv_row(self) -> str:
        return (
            f"{self.oi:.10g},{self.c0:.10g},{self.c1:.10g},"
            f"{self.rms:.10g},{self.m},{str(self.null_added).lower()}"
        )

    CSV_HEADER = "oi,c0,c1,rms,m,null_added"


def report(fs: FeatureSet) -> MetricsReport:
    oi, null_added = overlapping_index_detail(fs)
    c0 = complexity_c0(fs)
    c1 = avg_length_c1(fs)
    return MetricsReport(oi=oi, c0=c0, c1=c1, rms=rms(oi, c0),
                         m=fs.m, null_added=null_added)
