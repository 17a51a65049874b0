"""Exact binomial machinery, enumeration oracles, and simulation determinism."""

import json
import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import stats as sps

from bvconc.bounds import TailSide
from bvconc.errors import DomainError
from bvconc.montecarlo import (
    BinomialHalf,
    SimConfig,
    binomial_grid_sup,
    conjecture_refutation_experiment,
    iid_coverage,
    sharpness_experiment,
    trial_rng,
)

import oracles


class TestBinomialHalf:
    @pytest.mark.parametrize("n", [1, 2, 7, 16, 64])
    def test_cdf_matches_scipy(self, n):
        bh = BinomialHalf(n)
        ours = np.asarray([float(bh.cdf_fraction(k)) for k in range(n + 1)])
        theirs = sps.binom.cdf(np.arange(n + 1), n, 0.5)
        assert np.allclose(ours, theirs, atol=1e-14)

    def test_cdf_fraction_exact(self):
        bh = BinomialHalf(16)
        assert bh.cdf_fraction(3) == Fraction(697, 65536)
        assert bh.cdf_fraction(4) == Fraction(2517, 65536)
        assert bh.cdf_fraction(-1) == 0
        assert bh.cdf_fraction(16) == 1

    def test_inversion_sampling_distribution(self):
        bh = BinomialHalf(16)
        draws = bh.draw(trial_rng(3, 99, 0), 200_000)
        for k in (3, 8, 12):
            p = float(bh.cdf_fraction(k))
            emp = float(np.mean(draws <= k))
            se = math.sqrt(p * (1 - p) / draws.size)
            assert abs(emp - p) <= 5 * se


class TestTrialRng:
    def test_reproducible_and_disjoint(self):
        a = trial_rng(7, 1, 5).random(8)
        b = trial_rng(7, 1, 5).random(8)
        c = trial_rng(7, 1, 6).random(8)
        d = trial_rng(8, 1, 5).random(8)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)
        assert not np.array_equal(a, d)


class TestBinomialGridSup:
    def test_forced_single_cell(self):
        for seed in range(20):
            assert binomial_grid_sup(1, 1, seed) == 0.5

    def test_enumeration_oracle_small_grids(self):
        # full 2^(n*m) enumeration against sampled frequencies, 4-sigma atoms
        for n, m, trials in ((2, 2, 40_000), (3, 2, 30_000), (1, 4, 30_000)):
            atoms = oracles.grid_sup_distribution_exact(n, m)
            samples = np.asarray([binomial_grid_sup_trials(n, m, seed=12, trials=trials)]).ravel()
            for value, prob in atoms.items():
                p = float(prob)
                emp = float(np.mean(np.isclose(samples, value)))
                se = math.sqrt(p * (1 - p) / trials) or 1.0 / trials
                assert abs(emp - p) <= 4 * se + 1e-12, (n, m, value)

    def test_two_by_two_exact_atoms(self):
        atoms = oracles.grid_sup_distribution_exact(2, 2)
        assert atoms == {0.0: Fraction(1, 4), 0.25: Fraction(3, 4)}

    def test_rejects_bad_args(self):
        with pytest.raises(DomainError):
            binomial_grid_sup(0, 2, 1)
        with pytest.raises(DomainError):
            binomial_grid_sup(2, 2, -1)


def binomial_grid_sup_trials(n, m, seed, trials):
    """Sample the grid statistic across many trials using the per-trial streams."""
    from bvconc.montecarlo import _STREAM_GRID, _binomial_half

    bh = _binomial_half(n)
    out = np.empty(trials)
    for t in range(trials):
        u = bh.draw(trial_rng(seed, _STREAM_GRID, t), m)
        out[t] = np.max(np.abs(u - n / 2.0)) / (n * m)
    return out


class TestConjectureRefutation:
    def test_exact_single_column_probability(self):
        report = conjecture_refutation_experiment(16, [1], 0.25, trials=500, seed=3)
        (row,) = report.rows
        assert row.exact == pytest.approx(2 * 697 / 65536, abs=1e-12)
        assert dict(report.info)["column_exceedance_probability"] == pytest.approx(
            2 * 697 / 65536, abs=1e-15
        )

    def test_exact_growth_matches_independent_computation(self):
        report = conjecture_refutation_experiment(16, [1, 8, 64], 0.25, trials=200, seed=3)
        p1 = 2 * float(sps.binom.cdf(3, 16, 0.5))
        for row in report.rows:
            assert row.exact == pytest.approx(1 - (1 - p1) ** row.m, rel=1e-9)

    def test_empirical_tracks_exact_and_grows(self):
        report = conjecture_refutation_experiment(16, [1, 16, 256], 0.25, trials=2000, seed=21)
        emps = [r.empirical for r in report.rows]
        for row in report.rows:
            tol = 4 * math.sqrt(max(row.exact * (1 - row.exact), 1e-9) / 2000)
            assert abs(row.empirical - row.exact) <= tol
        assert emps[0] <= emps[1] + 0.05 and emps[1] <= emps[2] + 0.05

    def test_naive_bound_violated_for_large_m(self):
        report = conjecture_refutation_experiment(16, [1, 1000], 0.25, trials=400, seed=5)
        first, last = report.rows
        assert not first.violation
        assert last.violation
        assert last.empirical > last.bound

    def test_preconditions(self):
        with pytest.raises(DomainError):
            conjecture_refutation_experiment(16, [1], 0.5, trials=10, seed=0)
        with pytest.raises(DomainError):
            conjecture_refutation_experiment(16, [], 0.25, trials=10, seed=0)


class TestIidCoverage:
    def test_report_shape_and_no_adjusted_violations(self):
        report = iid_coverage(25, 400, seed=17, eps_grid=(0.0, 0.5, 1.0), side=TailSide.TWO_SIDED)
        adjusted = [r for r in report.rows if r.label == "adjusted"]
        raw = [r for r in report.rows if r.label == "raw"]
        assert len(adjusted) == len(raw) == 3
        assert adjusted[0].bound == 1.0 and not adjusted[0].violation
        assert not any(r.violation for r in adjusted)

    def test_one_sided_shift_applies(self):
        report = iid_coverage(25, 200, seed=2, eps_grid=(0.25,), side=TailSide.PLUS)
        adjusted = [r for r in report.rows if r.label == "adjusted"][0]
        # the shifted statistic is almost always negative at modest n
        assert adjusted.empirical <= adjusted.bound + 3 * adjusted.stderr

    def test_preconditions(self):
        with pytest.raises(DomainError):
            iid_coverage(1, 200, 0, (0.5,), TailSide.TWO_SIDED)
        with pytest.raises(DomainError):
            iid_coverage(25, 50, 0, (0.5,), TailSide.TWO_SIDED)
        with pytest.raises(DomainError):
            iid_coverage(25, 200, 0, (0.5, 0.25), TailSide.TWO_SIDED)


class TestSharpness:
    def test_m_n_and_cut_arithmetic(self):
        report = sharpness_experiment(16, 0.25, trials=300, seed=9)
        info = dict(report.info)
        assert info["k"] == 4.0
        assert info["m_n"] == 27.0
        assert info["p_le_k"] == pytest.approx(2517 / 65536, abs=1e-15)
        anchor = [r for r in report.rows if r.label == "min_le_k"][0]
        assert anchor.exact == pytest.approx(1 - (1 - 2517 / 65536) ** 27, rel=1e-12)

    def test_delta_rows_match_exact(self):
        report = sharpness_experiment(16, 0.25, trials=4000, seed=29)
        for row in report.rows:
            se = math.sqrt(max(row.exact * (1 - row.exact), 1e-9) / 4000)
            assert abs(row.empirical - row.exact) <= 4 * se, row

    def test_preconditions(self):
        with pytest.raises(DomainError):
            sharpness_experiment(16, 0.5, trials=10, seed=0)
        with pytest.raises(DomainError):
            sharpness_experiment(16, 0.01, trials=10, seed=0)

    def test_truncation_cap(self):
        report = sharpness_experiment(16, 0.1, trials=50, seed=1, m_cap=100)
        assert dict(report.info)["truncated"] == 1.0
        assert report.config.m == 100
        assert report.notes


class TestDeterminism:
    def test_identical_config_identical_report(self):
        a = iid_coverage(25, 150, seed=77, eps_grid=(0.5, 1.0), side=TailSide.TWO_SIDED)
        b = iid_coverage(25, 150, seed=77, eps_grid=(0.5, 1.0), side=TailSide.TWO_SIDED)
        assert a == b
        assert json.dumps(a.to_dict(), sort_keys=True) == json.dumps(b.to_dict(), sort_keys=True)

    def test_seed_changes_results(self):
        a = iid_coverage(25, 150, seed=1, eps_grid=(0.25,), side=TailSide.TWO_SIDED)
        b = iid_coverage(25, 150, seed=2, eps_grid=(0.25,), side=TailSide.TWO_SIDED)
        assert a != b

    def test_refutation_and_sharpness_deterministic(self):
        r1 = conjecture_refutation_experiment(8, [1, 4], 0.25, trials=200, seed=13)
        r2 = conjecture_refutation_experiment(8, [1, 4], 0.25, trials=200, seed=13)
        assert r1 == r2
        s1 = sharpness_experiment(16, 0.25, trials=200, seed=13)
        s2 = sharpness_experiment(16, 0.25, trials=200, seed=13)
        assert s1 == s2


class TestSimConfig:
    def test_validation(self):
        with pytest.raises(DomainError):
            SimConfig(n=0, m=1, trials=1, seed=0, eps_grid=())
        with pytest.raises(DomainError):
            SimConfig(n=1, m=1, trials=1, seed=-1, eps_grid=())
        with pytest.raises(DomainError):
            SimConfig(n=1, m=1, trials=1, seed=0, eps_grid=(1.0, 0.5))
