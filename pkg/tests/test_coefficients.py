"""Coefficient formulas, the effective-sample-size identity, and fuzzed invariants."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bvconc.coefficients import (
    ClusterSpec,
    FiniteTheta,
    LipschitzDifferentiable,
    LipschitzOneSided,
    MonotoneReal,
    RangeSpec,
    downward_variation,
    lipschitz_difference_params,
    mcdiarmid_from_clusters,
    mcdiarmid_from_ranges,
)
from bvconc.errors import DomainError, VacuousBoundError


class TestRangeSpec:
    def test_width(self):
        assert RangeSpec(-1.0, 2.5).width == 3.5

    @pytest.mark.parametrize("lo,hi", [(1.0, 1.0), (2.0, 1.0), (float("nan"), 1.0)])
    def test_rejects_degenerate(self, lo, hi):
        with pytest.raises(DomainError):
            RangeSpec(lo, hi)


class TestMcdiarmidFromRanges:
    def test_four_unit_ranges(self):
        assert mcdiarmid_from_ranges([RangeSpec(0, 1)] * 4) == pytest.approx(4.0)

    def test_mixed_widths(self):
        assert mcdiarmid_from_ranges([RangeSpec(0, 1), RangeSpec(0, 3)]) == pytest.approx(0.4)

    def test_n_ranges_of_width_w(self):
        # n / w^2 for equal widths: n=7, w=0.5 -> 28
        assert mcdiarmid_from_ranges([RangeSpec(0, 0.5)] * 7) == pytest.approx(28.0)

    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            mcdiarmid_from_ranges([])


class TestClusterSpec:
    def test_equal_clusters(self):
        spec = ClusterSpec([5] * 12)
        assert spec.nu_n == pytest.approx(12.0)
        assert mcdiarmid_from_clusters(spec) == pytest.approx(12.0)

    def test_two_clusters(self):
        spec = ClusterSpec([1, 3])
        assert mcdiarmid_from_clusters(spec) == pytest.approx(1.6)
        assert spec.nu_n == pytest.approx(2.0 / (1.0 + 1.0 / 4.0))

    def test_three_clusters(self):
        spec = ClusterSpec([2, 3, 5])
        assert mcdiarmid_from_clusters(spec) == pytest.approx(100.0 / 38.0)

    def test_population_variance_convention(self):
        spec = ClusterSpec([1, 3])
        assert spec.a_n == pytest.approx(2.0)
        assert spec.s2_n == pytest.approx(1.0)  # divide by K, not K-1

    @pytest.mark.parametrize("sizes", [[], [0], [2, -1]])
    def test_rejects_bad_sizes(self, sizes):
        with pytest.raises(DomainError):
            ClusterSpec(sizes)

    def test_identity_fuzz(self):
        rng = np.random.default_rng(20240817)
        for _ in range(1000):
            k = int(rng.integers(1, 40))
            sizes = rng.integers(1, 50, size=k).tolist()
            spec = ClusterSpec(sizes)
            nu = spec.nu_n
            assert abs(mcdiarmid_from_clusters(spec) - nu) <= 1e-12 * nu
            assert 1.0 - 1e-12 <= nu <= k + 1e-12
            if len(set(sizes)) == 1:
                assert nu == pytest.approx(k)
            else:
                assert nu < k

    def test_merging_never_increases_coefficient(self):
        rng = np.random.default_rng(7)
        for _ in range(300):
            k = int(rng.integers(2, 12))
            sizes = rng.integers(1, 30, size=k).tolist()
            base = mcdiarmid_from_clusters(ClusterSpec(sizes))
            i, j = rng.choice(k, size=2, replace=False)
            merged = [s for idx, s in enumerate(sizes) if idx not in (i, j)]
            merged.append(sizes[i] + sizes[j])
            assert mcdiarmid_from_clusters(ClusterSpec(merged)) <= base + 1e-12


class TestDownwardVariation:
    def test_monotone_unit_range(self):
        assert downward_variation(MonotoneReal(RangeSpec(0, 1))) == pytest.approx(1.0)

    def test_finite_theta(self):
        case = FiniteTheta([RangeSpec(0, 1), RangeSpec(2, 3), RangeSpec(-1, 0)])
        assert downward_variation(case) == pytest.approx(9.0)

    def test_lipschitz_one_sided(self):
        assert downward_variation(LipschitzOneSided(RangeSpec(-1, 1), 2.0)) == pytest.approx(16.0)

    def test_differentiable_matches_one_sided(self):
        r = RangeSpec(0.0, 0.5)
        assert downward_variation(LipschitzDifferentiable(r, 1.5)) == downward_variation(
            LipschitzOneSided(r, 1.5)
        )

    @given(s=st.floats(0.1, 10.0), w=st.floats(0.1, 5.0), k=st.integers(1, 6))
    @settings(max_examples=100, deadline=None)
    def test_scale_covariance(self, s, w, k):
        base = downward_variation(FiniteTheta([RangeSpec(0, w)] * k))
        scaled = downward_variation(FiniteTheta([RangeSpec(0, s * w)] * k))
        assert scaled == pytest.approx(s * s * base, rel=1e-12)
        mono = downward_variation(MonotoneReal(RangeSpec(0, w)))
        mono_scaled = downward_variation(MonotoneReal(RangeSpec(0, s * w)))
        assert mono_scaled == pytest.approx(s * s * mono, rel=1e-12)

    def test_negative_lipschitz_rejected(self):
        with pytest.raises(DomainError):
            LipschitzOneSided(RangeSpec(0, 1), -0.5)


class TestLipschitzDifferenceParams:
    def test_continuous_no_drift(self):
        p = lipschitz_difference_params(100, 0.0)
        assert (p.c, p.d) == (25.0, 4.0)
        assert p.product == pytest.approx(100.0)

    def test_continuous_with_constant(self):
        p = lipschitz_difference_params(4, 1.0)
        assert (p.c, p.d) == (1.0, 16.0)

    def test_discrete_grid_flag(self):
        p = lipschitz_difference_params(100, grid_size=5)
        assert p.c == 25.0
        assert p.product == pytest.approx(2500.0)

    def test_vacuous_product_rejected(self):
        with pytest.raises(VacuousBoundError):
            lipschitz_difference_params(1, 0.0)

    def test_bad_inputs(self):
        with pytest.raises(DomainError):
            lipschitz_difference_params(0, 1.0)
        with pytest.raises(DomainError):
            lipschitz_difference_params(4, -1.0)
        with pytest.raises(DomainError):
            lipschitz_difference_params(4, grid_size=0)
