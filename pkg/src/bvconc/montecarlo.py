"""Simulation and enumeration harness validating the tail bounds.

Three experiments:

* ``conjecture_refutation_experiment`` drives the binomial-grid construction:
  an n-by-m array of independent cells, cell (i, j) uniform on two adjacent
  grid points, makes the sup deviation of the pooled empirical CDF equal to
  max_j |U_j - n/2| / (n*m) for independent U_j ~ Binomial(n, 1/2).  As m
  grows the exceedance probability tends to 1 while the naive "effective
  sample size n*m^2" bound stays fixed below 1 — the naive bound is false.

* ``iid_coverage`` checks the guaranteed direction: for iid uniform samples
  the deflated statistic sqrt(n) * D / L(n) (and the shifted one-sided
  variants) empirically stay within their sub-Gaussian budgets at every
  threshold.

* ``sharpness_experiment`` sizes the grid as m_n = ceil(1 / P(Bin(n,1/2) <= k))
  so that the smallest column count dips below k with probability about
  1 - 1/e, exhibiting the lower-bound behavior that makes the sqrt(log_4)
  denominator growth unavoidable.

Reproducibility contract: every trial draws from a counter-based Philox
stream keyed by (seed, experiment stream, trial index).  Results are
bitwise-identical for identical (config, seed) regardless of execution
order or worker count, and binomial draws are inverted from the exact
binomial CDF (never sampled by rejection or normal approximation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .bounds import TailSide, denominator, one_sided_shift
from .empirical import StepCdf, sup_distance_reference
from .errors import DomainError

__all__ = [
    "SimConfig",
    "SimRow",
    "SimReport",
    "binomial_grid_sup",
    "conjecture_refutation_experiment",
    "iid_coverage",
    "sharpness_experiment",
]

_MASK64 = (1 << 64) - 1

# fixed stream ids keep the experiments' substreams disjoint under one seed
_STREAM_GRID = 1
_STREAM_REFUTATION = 2
_STREAM_COVERAGE = 3
_STREAM_SHARPNESS = 4


def trial_rng(seed: int, stream: int, trial: int) -> np.random.Generator:
    """Counter-based generator for one trial: key (seed, stream), counter block = trial.

    Each trial owns a disjoint 2^128-block region of the Philox counter
    space, so serial and parallel executions produce identical draws.
    """
    key = np.array([seed & _MASK64, stream & _MASK64], dtype=np.uint64)
    counter = np.array([0, 0, trial & _MASK64, 0], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


def _check_seed(seed: int) -> int:
    if not isinstance(seed, int) or seed < 0 or seed > _MASK64:
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return seed


class BinomialHalf:
    """Exact Binomial(n, 1/2) machinery shared by sampling and tail arithmetic.

    The CDF is accumulated in exact rational arithmetic and only rounded to
    float once, so inversion sampling and enumeration oracles agree.
    """

    def __init__(self, n: int):
        if n < 1:
            raise DomainError(f"binomial trial count must be >= 1, got {n}")
        self.n = n
        denom = 1 << n
        acc = 0
        cdf_fractions = []
        for k in range(n + 1):
            acc += math.comb(n, k)
            cdf_fractions.append(Fraction(acc, denom))
        self._cdf_fractions = tuple(cdf_fractions)
        self._cdf = np.array([float(f) for f in cdf_fractions])

    def cdf_fraction(self, k: int) -> Fraction:
        """P(X <= k) as an exact rational."""
        if k < 0:
            return Fraction(0)
        if k >= self.n:
            return Fraction(1)
        return self._cdf_fractions[k]

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Inversion sampling from the exact CDF."""
        u = rng.random(size)
        return np.searchsorted(self._cdf, u, side="right")


@lru_cache(maxsize=32)
def _binomial_half(n: int) -> BinomialHalf:
    return BinomialHalf(n)


@dataclass(frozen=True)
class SimConfig:
    """Echo of the knobs that produced a report."""

    n: int
    m: int
    trials: int
    seed: int
    eps_grid: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.n < 1 or self.m < 1 or self.trials < 1:
            raise DomainError("n, m and trials must all be >= 1")
        _check_seed(self.seed)
        grid = tuple(float(e) for e in self.eps_grid)
        object.__setattr__(self, "eps_grid", grid)
        if any(e < 0 for e in grid) or any(a > b for a, b in zip(grid, grid[1:])):
            raise DomainError("eps grid must be nonnegative and sorted ascending")


@dataclass(frozen=True)
class SimRow:
    """One threshold: empirical tail frequency against its theoretical reference.

    ``violation`` is set when the empirical frequency exceeds ``bound`` by
    more than the configured number of binomial standard errors. ``m`` and
    ``exact`` are filled by experiments that sweep grid sizes or can
    enumerate the probability exactly.
    """

    eps: float
    empirical: float
    bound: float
    stderr: float
    violation: bool
    label: str = ""
    m: int | None = None
    exact: float | None = None


@dataclass(frozen=True)
class SimReport:
    config: SimConfig
    statistic: str
    rows: tuple[SimRow, ...]
    info: tuple[tuple[str, float], ...] = field(default=())
    notes: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "config": {
                "n": self.config.n,
                "m": self.config.m,
                "trials": self.config.trials,
                "seed": self.config.seed,
                "eps_grid": list(self.config.eps_grid),
            },
            "statistic": self.statistic,
            "rows": [
                {
                    "eps": r.eps,
                    "empirical": r.empirical,
                    "bound": r.bound,
                    "stderr": r.stderr,
                    "violation": r.violation,
                    "label": r.label,
                    "m": r.m,
                    "exact": r.exact,
                }
                for r in self.rows
            ],
            "info": {k: v for k, v in self.info},
            "notes": list(self.notes),
        }


def _stderr(p_hat: float, trials: int) -> float:
    return math.sqrt(p_hat * (1.0 - p_hat) / trials)


def binomial_grid_sup(n: int, m: int, seed: int) -> float:
    """One realization of the grid construction's sup statistic.

    Draws U_j ~ Binomial(n, 1/2) independently for j = 0..m-1 and returns
    max_j |U_j - n/2| / (n*m), the exact sup deviation of the pooled
    empirical CDF from its mean for the two-point-support grid data.
    """
    if n < 1 or m < 1:
        raise DomainError("n and m must be >= 1")
    _check_seed(seed)
    u = _binomial_half(n).draw(trial_rng(seed, _STREAM_GRID, 0), m)
    return float(np.max(np.abs(u - n / 2.0))) / (n * m)


def _strict_lower_cut(threshold: Fraction) -> int:
    """Largest integer strictly below ``threshold``."""
    fl = math.floor(threshold)
    return fl - 1 if threshold == fl else fl


def conjecture_refutation_experiment(
    n: int,
    m_list: Sequence[int],
    eps: float,
    trials: int,
    seed: int,
    *,
    violation_sigmas: float = 3.0,
) -> SimReport:
    """Exceedance of max_j |U_j/n - 1/2| > eps as the number of columns m grows.

    Each row carries the Monte Carlo frequency, the exact probability
    1 - (1 - p1)^m from the binomial tail, and the naive bound
    2*exp(-2*n*eps^2) that an "effective sample size n*m^2" reading would
    assert for every m.  The violation flag marks rows whose empirical
    frequency exceeds the naive bound — the refutation.
    """
    if not (0.0 < eps < 0.5):
        raise DomainError(f"eps must lie in (0, 1/2), got {eps}")
    m_list = tuple(int(m) for m in m_list)
    if not m_list or any(m < 1 for m in m_list):
        raise DomainError("m_list must be a nonempty list of positive integers")
    _check_seed(seed)
    if trials < 1:
        raise DomainError("trials must be >= 1")

    bh = _binomial_half(n)
    lo_cut = _strict_lower_cut(Fraction(n, 2) - Fraction(eps) * n)
    hi_cut = n - lo_cut  # U > n/2 + n*eps  <=>  U >= hi_cut, by symmetry
    p_one = bh.cdf_fraction(lo_cut) + (1 - bh.cdf_fraction(hi_cut - 1))
    naive = min(1.0, 2.0 * math.exp(-2.0 * n * eps * eps))

    rows = []
    for j, m in enumerate(m_list):
        hits = 0
        for t in range(trials):
            u = bh.draw(trial_rng(seed, _STREAM_REFUTATION, j * trials + t), m)
            if u.min() <= lo_cut or u.max() >= hi_cut:
                hits += 1
        emp = hits / trials
        se = _stderr(emp, trials)
        rows.append(
            SimRow(
                eps=eps,
                empirical=emp,
                bound=naive,
                stderr=se,
                violation=emp > naive + violation_sigmas * se,
                label=f"m={m}",
                m=m,
                exact=float(1 - (1 - p_one) ** m),
            )
        )
    config = SimConfig(n=n, m=max(m_list), trials=trials, seed=seed, eps_grid=(eps,))
    return SimReport(
        config=config,
        statistic="max_j |U_j/n - 1/2| over m independent Binomial(n, 1/2) columns",
        rows=tuple(rows),
        info=(("column_exceedance_probability", float(p_one)),),
    )


def _uniform_cdf(r):
    return np.clip(r, 0.0, 1.0)


def iid_coverage(
    n: int,
    trials: int,
    seed: int,
    eps_grid: Sequence[float],
    side: TailSide,
    *,
    violation_sigmas: float = 3.0,
) -> SimReport:
    """Empirical tail of the bounded sup statistic for iid uniform data.

    Per trial, n iid uniforms feed the exact sup distance to the uniform CDF.
    Rows labeled ``adjusted`` track the guaranteed statistic —
    sqrt(n)*D/L(n) two-sided, sqrt(n)*D± - S(n) one-sided — against its
    sub-Gaussian budget; rows labeled ``raw`` track the unadjusted sqrt(n)*D±
    against the same budget for comparison.
    """
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    if trials < 100:
        raise DomainError(f"need at least 100 trials for stable frequencies, got {trials}")
    _check_seed(seed)
    config = SimConfig(n=n, m=1, trials=trials, seed=seed, eps_grid=tuple(eps_grid))

    scale = 2.0 if side.is_two_sided else 1.0
    l_n = denominator(n)
    s_n = one_sided_shift(n)
    root_n = math.sqrt(n)

    adjusted = np.empty(trials)
    raw = np.empty(trials)
    for t in range(trials):
        u = trial_rng(seed, _STREAM_COVERAGE, t).random(n)
        uniq, counts = np.unique(u, return_counts=True)
        step = StepCdf(jump_points=uniq, values=np.cumsum(counts) / n)
        d = sup_distance_reference(step, _uniform_cdf, side)
        raw[t] = root_n * d
        adjusted[t] = raw[t] / l_n if side.is_two_sided else raw[t] - s_n

    rows = []
    for label, stats in (("adjusted", adjusted), ("raw", raw)):
        for eps in config.eps_grid:
            bound = min(1.0, scale * math.exp(-2.0 * eps * eps))
            emp = float(np.mean(stats > eps))
            se = _stderr(emp, trials)
            rows.append(
                SimRow(
                    eps=eps,
                    empirical=emp,
                    bound=bound,
                    stderr=se,
                    violation=emp > bound + violation_sigmas * se,
                    label=label,
                )
            )
    if side.is_two_sided:
        statistic = "sqrt(n) * sup|F - U| / L(n)  [raw rows: sqrt(n) * sup|F - U|]"
    else:
        sign = "+" if side is TailSide.PLUS else "-"
        statistic = (
            f"sqrt(n) * sup(F - U)^{sign} - S(n)  [raw rows: sqrt(n) * sup(F - U)^{sign}]"
        )
    return SimReport(config=config, statistic=statistic, rows=tuple(rows))


def sharpness_experiment(
    n: int,
    l_target: float,
    trials: int,
    seed: int,
    *,
    violation_sigmas: float = 3.0,
    m_cap: int = 10**7,
) -> SimReport:
    """Fixed-n slice of the lower-bound construction.

    With k = round(l_target * n) and m_n = ceil(1 / P(Bin(n,1/2) <= k)), the
    smallest of m_n binomial columns falls to k or below with probability
    1 - (1 - P)^{m_n} (about 1 - 1/e).  Rows compare the empirical frequency
    of the depth statistic sqrt(n) * (1/2 - min_j U_j / n) exceeding
    (1+delta) * sqrt(n) * (1/2 - l_target) for delta in {-0.1, 0, +0.1}
    against the exact probabilities; the ``min_le_k`` row reports the
    anchor event min_j U_j <= k itself.
    """
    if not (0.0 < l_target < 0.5):
        raise DomainError(f"l_target must lie in (0, 1/2), got {l_target}")
    k = round(l_target * n)
    if not (0 < k < n / 2):
        raise DomainError(
            f"k = round(l_target * n) = {k} must satisfy 0 < k < n/2 for n = {n}"
        )
    _check_seed(seed)
    if trials < 1:
        raise DomainError("trials must be >= 1")

    bh = _binomial_half(n)
    p_le_k = bh.cdf_fraction(k)
    m_n = math.ceil(1 / p_le_k)
    notes: tuple[str, ...] = ()
    if m_n > m_cap:
        notes = (f"m_n = {m_n} truncated to cap {m_cap}",)
        m_n = m_cap

    mins = np.empty(trials, dtype=int)
    for t in range(trials):
        u = bh.draw(trial_rng(seed, _STREAM_SHARPNESS, t), m_n)
        mins[t] = int(u.min())

    def exact_min_leq(cut: int) -> float:
        if cut < 0:
            return 0.0
        return float(1 - (1 - bh.cdf_fraction(cut)) ** m_n)

    root_n = math.sqrt(n)
    rows = []
    emp_anchor = float(np.mean(mins <= k))
    se = _stderr(emp_anchor, trials)
    exact_anchor = exact_min_leq(k)
    rows.append(
        SimRow(
            eps=float(k),
            empirical=emp_anchor,
            bound=exact_anchor,
            stderr=se,
            violation=emp_anchor > exact_anchor + violation_sigmas * se,
            label="min_le_k",
            m=m_n,
            exact=exact_anchor,
        )
    )
    taus = []
    for delta in (-0.1, 0.0, 0.1):
        tau = (1.0 + delta) * root_n * (0.5 - l_target)
        taus.append(tau)
        threshold = Fraction(n, 2) - (1 + Fraction(delta)) * n * (Fraction(1, 2) - Fraction(l_target))
        cut = _strict_lower_cut(threshold)
        exact = exact_min_leq(cut)
        emp = float(np.mean(mins <= cut))
        se = _stderr(emp, trials)
        rows.append(
            SimRow(
                eps=tau,
                empirical=emp,
                bound=exact,
                stderr=se,
                violation=emp > exact + violation_sigmas * se,
                label=f"delta={delta:+g}",
                m=m_n,
                exact=exact,
            )
        )
    config = SimConfig(n=n, m=m_n, trials=trials, seed=seed, eps_grid=tuple(sorted(taus)))
    return SimReport(
        config=config,
        statistic="sqrt(n) * (1/2 - min_j U_j / n) over m_n Binomial(n, 1/2) columns",
        rows=tuple(rows),
        info=(
            ("k", float(k)),
            ("m_n", float(m_n)),
            ("p_le_k", float(p_le_k)),
            ("truncated", float(bool(notes))),
        ),
        notes=notes,
    )
