"""Sorted-sample containers and Kolmogorov-Smirnov distances.

The verification experiments only ever need sup-distance comparisons between
a Monte Carlo sample and either a closed-form cdf or a second sample, so
this stays deliberately small.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["EmpiricalDistribution", "ks_one_sample", "ks_two_sample"]


@dataclass(frozen=True)
class EmpiricalDistribution:
    """A sample stored in sorted order, with an optional label."""

    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        values = np.sort(np.asarray(self.values, dtype=float))
        if values.size == 0:
            raise ValueError("empirical distribution needs at least one sample")
        if not np.all(np.isfinite(values)):
            raise ValueError("samples must be finite")
        object.__setattr__(self, "values", values)

    @property
    def count(self) -> int:
        return int(self.values.size)

    def quantile(self, q):
        return np.quantile(self.values, q)


def ks_one_sample(dist: EmpiricalDistribution, cdf) -> float:
    """sup_x |F_n(x) - F(x)| against a callable cdf.

    Uses the sorted-sample sweep: at the i-th order statistic the empirical
    cdf jumps from i/n to (i+1)/n, so the sup is attained at one of the two
    one-sided gaps evaluated on the sample itself.
    """
    x = dist.values
    n = x.size
    f = np.asarray(cdf(x), dtype=float)
    if f.shape != x.shape:
        raise ValueError("cdf must return one value per sample point")
    if np.any(f < 0.0) or np.any(f > 1.0):
        raise ValueError("cdf values must lie in [0, 1]")
    grid = np.arange(n, dtype=float)
    d_plus = np.max((grid + 1.0) / n - f)
    d_minus = np.max(f - grid / n)
    return float(max(d_plus, d_minus))


def ks_two_sample(a: EmpiricalDistribution, b: EmpiricalDistribution) -> float:
    """sup_x |F_a(x) - F_b(x)| via one merged sweep over both samples."""
    pooled = np.concatenate([a.values, b.values])
    cdf_a = np.searchsorted(a.values, pooled, side="right") / a.count
    cdf_b = np.searchsorted(b.values, pooled, side="right") / b.count
    return float(np.max(np.abs(cdf_a - cdf_b)))
