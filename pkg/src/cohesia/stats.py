"""Descriptive statistics and hypothesis tests used across the pipeline.

Quartiles use linear interpolation between order statistics ("type 7"):
the q-th quantile sits at position q*(n-1) in the sorted sample (0-based)
and is interpolated linearly between the bracketing order statistics.
The method name is recorded in report provenance so results are auditable.

Chi-square p-values come from a local implementation of the regularized
incomplete gamma function; no external statistical dependency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DegenerateTable, EmptyInput, LengthMismatch, ZeroVariance

QUARTILE_METHOD = "type7-linear-interpolation"


@dataclass(frozen=True)
class FiveNumberSummary:
    min: float
    q1: float
    median: float
    q3: float
    max: float

    @property
    def iqr(self) -> float:
        return self.q3 - self.q1


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    p_value: float
    dof: int


def _quantile(sorted_xs: Sequence[float], q: float) -> float:
    pos = q * (len(sorted_xs) - 1)
    lo = math.floor(pos)
    hi = math.ceil(pos)
    if lo == hi:
        return float(sorted_xs[lo])
    frac = pos - lo
    return float(sorted_xs[lo]) * (1.0 - frac) + float(sorted_xs[hi]) * frac


def five_number_summary(xs: Sequence[float]) -> FiveNumberSummary:
    """Min, Q1, median, Q3, max of a non-empty sample."""
    if len(xs) == 0:
        raise EmptyInput("five_number_summary of empty sample")
    s = sorted(float(x) for x in xs)
    return FiveNumberSummary(
        min=s[0],
        q1=_quantile(s, 0.25),
        median=_quantile(s, 0.5),
        q3=_quantile(s, 0.75),
        max=s[-1],
    )

def lower_fence(xs: Sequence[float]) -> float:
    """Tukey lower outlier fence Q1 - 1.5*IQR.

    All-equal input degenerates to the common value (IQR = 0).
    """
    fns = five_number_summary(xs)
    return fns.q1 - 1.5 * fns.iqr


def _reg_upper_gamma(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).

    Series expansion for x < a + 1, Lentz continued fraction otherwise.
    """
    if x < 0 or a <= 0:
        raise ValueError("invalid arguments to Q(a, x)")
    if x == 0.0:
        return 1.0
    lg = math.lgamma(a)
    if x < a + 1.0:
        # P(a, x) by series, then Q = 1 - P
        term = 1.0 / a
        total = term
        n = a
        for _ in range(500):
            n += 1.0
            term *= x / n
            total += term
            if abs(term) < abs(total) * 1e-16:
                break
        p = total * math.exp(-x + a * math.log(x) - lg)
        return 1.0 - p
    # continued fraction for Q directly
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 500):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return h * math.exp(-x + a * math.log(x) - lg)


def chi_square_sf(statistic: float, dof: int) -> float:
    """Survival function of the chi-square distribution."""
    return _reg_upper_gamma(dof / 2.0, statistic / 2.0)


def chi_square_independence(table: Sequence[Sequence[float]]) -> ChiSquareResult:
    """Pearson chi-square test of independence on a 2x2 count table.

    No continuity correction is applied. Raises DegenerateTable when a
    row or column marginal is zero.
    """
    if len(table) != 2 or any(len(row) != 2 for row in table):
        raise DegenerateTable("expected a 2x2 table")
    obs = [[float(c) for c in row] for row in table]
    if any(c < 0 for row in obs for c in row):
        raise DegenerateTable("negative cell count")
    row_sums = [sum(row) for row in obs]
    col_sums = [obs[0][j] + obs[1][j] for j in range(2)]
    total = sum(row_sums)
    if any(s <= 0 for s in row_sums) or any(s <= 0 for s in col_sums):
        raise DegenerateTable("zero row or column marginal")
    stat = 0.0
    for i in range(2):
        for j in range(2):
            expected = row_sums[i] * col_sums[j] / total
            stat += (obs[i][j] - expected) ** 2 / expected
    return ChiSquareResult(statistic=stat, p_value=chi_square_sf(stat, 1), dof=1)


def pearson_correlation(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Sample Pearson correlation coefficient in [-1, 1]."""
    if len(xs) != len(ys):
        raise LengthMismatch(f"{len(xs)} vs {len(ys)}")
    n = len(xs)
    if n < 2:
        raise EmptyInput("correlation needs at least two pairs")
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    denom = math.sqrt(sxx) * math.sqrt(syy)
    if denom == 0.0:   # also catches underflow of near-constant samples
        raise ZeroVariance("constant sample")
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    r = sxy / denom
    return max(-1.0, min(1.0, r))
