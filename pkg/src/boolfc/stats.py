"""Contingency statistics for Boolean feature pairs.

Pearson r on 2x2 tables, the n*r^2 chi-square identity, normal
quantiles, risk-derived correlation thresholds, the expected-frequency
rule for candidate pruning, and the Kendall rank test.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class StatsError(Exception):
    pass


class DegenerateTableError(StatsError):
    """A marginal is zero: the correlation coefficient is undefined."""


@dataclass(frozen=True)
class ContingencyTable:
    """2x2 joint counts: a = both true, b = first only, c = second only."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if min(self.a, self.b, self.c, self.d) < 0:
            raise ValueError("negative contingency count")
        if self.n < 1:
            raise ValueError("empty contingency table")

    @property
    def n(self) -> int:
        return self.a + self.b + self.c + self.d


def contingency(x: np.ndarray, y: np.ndarray) -> ContingencyTable:
    """Joint counts of two equal-length Boolean vectors."""
    x = np.asarray(x, dtype=bool)
    y = np.asarray(y, dtype=bool)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    a = int(np.count_nonzero(x & y))
    b = int(np.count_nonzero(x & ~y))
    c = int(np.count_nonzero(~x & y))
    return ContingencyTable(a, b, c, x.size - a - b - c)


def pearson_r(t: ContingencyTable) -> float:
    """Pearson correlation (phi) of a 2x2 table: (ad - bc) / sqrt of the
    product of the four marginals."""
    m1, m2 = t.a + t.b, t.c + t.d
    m3, m4 = t.a + t.c, t.b + t.d
    if min(m1, m2, m3, m4) == 0:
        raise DegenerateTableError(f"constant feature in table {t}")
    return (t.a * t.d - t.b * t.c) / math.sqrt(m1 * m2 * m3 * m4)


def chi2_obs(t: ContingencyTable) -> float:
    """Observed chi-square of independence; equals n * r^2."""
    r = pearson_r(t)
    return t.n * r * r


def expected_counts_ok(t: ContingencyTable) -> bool:
    """True iff all four expected cell counts under independence are >= 5."""
    n = t.n
    row1, row2 = t.a + t.b, t.c + t.d
    col1, col2 = t.a + t.c, t.b + t.d
    expectations = (
        row1 * col1 / n,
        row1 * col2 / n,
        row2 * col1 / n,
        row2 * col2 / n,
    )
    return all(e >= 5.0 for e in expectations)


# ---------------------------------------------------------------------------
# standard normal quantile (Acklam's rational approximation, |err| < 1.2e-9)

_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)

_P_LOW = 0.02425
_P_HIGH = 1 - _P_LOW


def normal_quantile(p: float) -> float:
    """Inverse standard normal CDF, absolute error well under 1e-6."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability must be in (0, 1), got {p}")
    if p < _P_LOW:
        q = math.sqrt(-2 * math.log(p))
        x = (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
            ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1)
    elif p <= _P_HIGH:
        q = p - 0.5
        r = q * q
        x = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / \
            (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1)
    else:
        q = math.sqrt(-2 * math.log(1 - p))
        x = -(((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
            ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1)
    return x


def normal_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2))


def lambda_from_risk(alpha: float, n: int) -> float:
    """Correlation threshold u_{1-alpha} / sqrt(n) for the one-sided
    independence test on a dataset of n individuals."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 < alpha < 0.5:
        raise ValueError(f"alpha must be in (0, 0.5), got {alpha}")
    return normal_quantile(1 - alpha) / math.sqrt(n)


@dataclass(frozen=True)
class RiskConfig:
    """Significance level plus the recommended band [5%/m, 5%] for m tests."""

    alpha: float
    planned_tests: int = 1

    def __post_init__(self):
        if not 0.0 < self.alpha < 0.5:
            raise ValueError(f"alpha must be in (0, 0.5), got {self.alpha}")
        if self.planned_tests < 1:
            raise ValueError("planned_tests must be >= 1")

    @property
    def recommended_band(self) -> tuple[float, float]:
        return (0.05 / self.planned_tests, 0.05)

    def threshold(self, n: int) -> float:
        return lambda_from_risk(self.alpha, n)


# ---------------------------------------------------------------------------
# Kendall rank test

def _kendall_s(x: Sequence[float], y: Sequence[float]) -> int:
    s = 0
    for i in range(len(x)):
        for j in range(i + 1, len(x)):
            dx = (x[i] > x[j]) - (x[i] < x[j])
            dy = (y[i] > y[j]) - (y[i] < y[j])
            s += dx * dy
    return s


def _tie_sizes(values: Sequence[float]) -> list[int]:
    counts: dict = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return [c for c in counts.values() if c > 1]


def kendall_tau_test(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Tie-corrected tau-b and its two-sided normal-approximation p-value."""
    n = len(x)
    if n != len(y):
        raise ValueError("sequences must have equal length")
    if n < 3:
        raise ValueError("need at least 3 observations")
    tx = _tie_sizes(x)
    ty = _tie_sizes(y)
    n0 = n * (n - 1) // 2
    n1 = sum(t * (t - 1) // 2 for t in tx)
    n2 = sum(t * (t - 1) // 2 for t in ty)
    if n1 == n0 or n2 == n0:
        raise StatsError("tau undefined: a sequence is entirely tied")
    s = _kendall_s(x, y)
    tau = s / math.sqrt((n0 - n1) * (n0 - n2))
    # variance of S with tie corrections
    v0 = n * (n - 1) * (2 * n + 5)
    vt = sum(t * (t - 1) * (2 * t + 5) for t in tx)
    vu = sum(t * (t - 1) * (2 * t + 5) for t in ty)
    var_s = (v0 - vt - vu) / 18.0
    if n > 2:
        var_s += (
            sum(t * (t - 1) * (t - 2) for t in tx)
            * sum(t * (t - 1) * (t - 2) for t in ty)
            / (9.0 * n * (n - 1) * (n - 2))
        )
    var_s += (
        sum(t * (t - 1) for t in tx)
        * sum(t * (t - 1) for t in ty)
        / (2.0 * n * (n - 1))
    )
    if var_s <= 0:
        raise StatsError("tau undefined: zero variance")
    z = s / math.sqrt(var_s)
    p = 2 * (1 - normal_cdf(abs(z)))
    return tau, min(1.0, p)


def kendall_exact_pvalue(x: Sequence[float], y: Sequence[float]) -> float:
    """Two-sided exact permutation p-value of tau; lengths up to 8."""
    n = len(x)
    if n != len(y):
        raise ValueError("sequences must have equal length")
    if n > 8:
        raise ValueError("exact permutation test limited to length 8")
    tau_obs, _ = kendall_tau_test(x, y)
    n0 = n * (n - 1) // 2
    n1 = sum(t * (t - 1) // 2 for t in _tie_sizes(x))
    n2 = sum(t * (t - 1) // 2 for t in _tie_sizes(y))
    denom = math.sqrt((n0 - n1) * (n0 - n2))
    hits = 0
    total = 0
    for perm in itertools.permutations(y):
        tau = _kendall_s(x, perm) / denom
        if abs(tau) >= abs(tau_obs) - 1e-12:
            hits += 1
        total += 1
    return hits / total
