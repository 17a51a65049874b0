"""Coefficients of effective sample size and downward variation.

Two numbers drive every tail bound in this library.  The McDiarmid
coefficient ``c`` measures how much any single independent input can move the
statistic (for an average of n functions with ranges (a_i, b_i) it is
n^2 / sum (b_i - a_i)^2).  The downward-variation coefficient ``d`` certifies
that the statistic can be embedded into a monotone [0,1]-valued family; it is
available in closed form for four structural cases:

* finite parameter set with per-parameter ranges:  d = (sum of widths)^2
* monotone in a real parameter with range (a, b):  d = (b - a)^2
* differentiable with one-sided derivative bound K: d = (b - a + K)^2
* one-sided K-Lipschitz (no smoothness):            d = (b - a + K)^2

For block-independent clustered data the McDiarmid coefficient of the pooled
empirical CDF equals the cluster effective sample size
nu = K / (1 + s^2 / a^2), where K is the cluster count, a the mean cluster
size and s^2 the population variance of cluster sizes.  Both routes are
implemented and agree to rounding error.

All operations are pure and thread-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

from .bounds import BoundParams
from .errors import DomainError

__all__ = [
    "RangeSpec",
    "ClusterSpec",
    "FiniteTheta",
    "MonotoneReal",
    "LipschitzDifferentiable",
    "LipschitzOneSided",
    "DownwardVariationCase",
    "mcdiarmid_from_ranges",
    "mcdiarmid_from_clusters",
    "downward_variation",
    "lipschitz_difference_params",
]


@dataclass(frozen=True)
class RangeSpec:
    """An open range (lo, hi); only its width enters any formula."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise DomainError(f"range endpoints must be finite, got ({self.lo}, {self.hi})")
        if not self.lo < self.hi:
            raise DomainError(f"degenerate range: lo {self.lo} must be < hi {self.hi}")

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class ClusterSpec:
    """Deterministic, known cluster sizes of a block-independent sample.

    Zero-size clusters are rejected rather than dropped: dropping one
    silently would change the cluster count and with it every statistic.
    """

    sizes: tuple[int, ...]

    def __init__(self, sizes: Sequence[int]) -> None:
        object.__setattr__(self, "sizes", tuple(int(s) for s in sizes))
        if not self.sizes:
            raise DomainError("cluster size list must be nonempty")
        for s in self.sizes:
            if s < 1:
                raise DomainError(f"cluster sizes must be >= 1, got {s}")

    @property
    def k(self) -> int:
        """Number of clusters."""
        return len(self.sizes)

    @property
    def n(self) -> int:
        """Total number of observations."""
        return sum(self.sizes)

    @property
    def a_n(self) -> float:
        """Mean cluster size."""
        return self.n / self.k

    @property
    def s2_n(self) -> float:
        """Population (divide-by-K) variance of cluster sizes."""
        a = self.a_n
        return sum((s - a) ** 2 for s in self.sizes) / self.k

    @property
    def nu_n(self) -> float:
        """Effective sample size K / (1 + s^2/a^2); lies in [1, K]."""
        a = self.a_n
        return self.k / (1.0 + self.s2_n / (a * a))


@dataclass(frozen=True)
class FiniteTheta:
    """Finite parameter set; one range per parameter value."""

    ranges: tuple[RangeSpec, ...]

    def __init__(self, ranges: Sequence[RangeSpec]) -> None:
        object.__setattr__(self, "ranges", tuple(ranges))
        if not self.ranges:
            raise DomainError("finite parameter case needs at least one range")


@dataclass(frozen=True)
class MonotoneReal:
    """Monotone in a real parameter, values in a single range."""

    range: RangeSpec


@dataclass(frozen=True)
class LipschitzDifferentiable:
    """Differentiable on [0,1] with derivative bounded below by -k_lip."""

    range: RangeSpec
    k_lip: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.k_lip) and self.k_lip >= 0.0):
            raise DomainError(f"Lipschitz constant must be >= 0, got {self.k_lip}")


@dataclass(frozen=True)
class LipschitzOneSided:
    """One-sided K-Lipschitz on [0,1]; no smoothness assumed."""

    range: RangeSpec
    k_lip: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.k_lip) and self.k_lip >= 0.0):
            raise DomainError(f"Lipschitz constant must be >= 0, got {self.k_lip}")


DownwardVariationCase = Union[FiniteTheta, MonotoneReal, LipschitzDifferentiable, LipschitzOneSided]


def mcdiarmid_from_ranges(ranges: Sequence[RangeSpec]) -> float:
    """McDiarmid coefficient n^2 / sum of squared widths for an average of n functions."""
    ranges = tuple(ranges)
    if not ranges:
        raise DomainError("need at least one range")
    n = len(ranges)
    return n * n / sum(r.width**2 for r in ranges)


def mcdiarmid_from_clusters(spec: ClusterSpec) -> float:
    """McDiarmid coefficient n^2 / sum of squared cluster sizes.

    Identical to ``spec.nu_n``: with a the mean size and s^2 the population
    variance, sum(size^2) = K*(a^2 + s^2), so n^2 / sum(size^2) reduces to
    K / (1 + s^2/a^2) exactly.
    """
    n = spec.n
    value = n * n / sum(s * s for s in spec.sizes)
    assert abs(value - spec.nu_n) <= 1e-12 * spec.nu_n, "effective-sample-size identity broken"
    return value


def downward_variation(case: DownwardVariationCase) -> float:
    """Downward-variation coefficient for one of the four structural cases."""
    if isinstance(case, FiniteTheta):
        return sum(r.width for r in case.ranges) ** 2
    if isinstance(case, MonotoneReal):
        return case.range.width**2
    if isinstance(case, (LipschitzDifferentiable, LipschitzOneSided)):
        return (case.range.width + case.k_lip) ** 2
    raise DomainError(f"unknown downward-variation case: {case!r}")


def lipschitz_difference_params(
    n_units: int, k_lip: float = 0.0, *, grid_size: int | None = None
) -> BoundParams:
    """Coefficients for the difference of two averaged [0,1]-valued processes.

    For n_units averaged unit-level trajectories, the difference statistic has
    McDiarmid coefficient c = n/4.  Continuous time with shared Lipschitz
    constant K gives d = 4*(1+K)^2, so c*d = n*(1+K)^2.  When the comparison
    runs over a finite grid of ``grid_size`` time points instead, pass it here
    and d = 4*grid_size^2 (c*d = n*grid_size^2); k_lip is then ignored.

    Raises :class:`~bvconc.errors.VacuousBoundError` when c*d <= 1.
    """
    if n_units < 1:
        raise DomainError(f"unit count must be >= 1, got {n_units}")
    if not (math.isfinite(k_lip) and k_lip >= 0.0):
        raise DomainError(f"Lipschitz constant must be >= 0, got {k_lip}")
    c = n_units / 4.0
    if grid_size is not None:
        if grid_size < 1:
            raise DomainError(f"grid size must be >= 1, got {grid_size}")
        return BoundParams(c=c, d=4.0 * grid_size * grid_size)
    return BoundParams(c=c, d=4.0 * (1.0 + k_lip) ** 2)
