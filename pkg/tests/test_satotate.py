import math

import numpy as np
import pytest

from bsdlab.curves import ApRecord, ReductionType, trace_scan
from bsdlab.errors import (
    ConfigurationError,
    DomainError,
    InsufficientDataError,
    PreconditionError,
)
from bsdlab.montecarlo import sample_st_theta
from bsdlab.satotate import (
    REF_ST,
    REF_UNIFORM,
    ThetaSample,
    birch_ensemble,
    histogram,
    ks_statistic,
    st_cdf,
    supersingular_density,
    theta_distribution_report,
    uniform_cdf,
)


class TestCdfs:
    def test_st_values(self):
        assert st_cdf(0.0) == 0.0
        assert st_cdf(math.pi) == pytest.approx(1.0, abs=1e-15)
        assert st_cdf(math.pi / 2) == pytest.approx(0.5, abs=1e-15)

    def test_uniform_values(self):
        assert uniform_cdf(0.0) == 0.0
        assert uniform_cdf(math.pi / 2) == pytest.approx(0.5, abs=1e-15)
        assert uniform_cdf(math.pi / 4) == pytest.approx(0.25, abs=1e-15)

    def test_domain(self):
        for bad in (-0.1, math.pi + 0.1):
            with pytest.raises(DomainError):
                st_cdf(bad)
            with pytest.raises(DomainError):
                uniform_cdf(bad)

    def test_monotone_with_endpoints(self):
        grid = np.linspace(0.0, math.pi, 10**4)
        for cdf in (st_cdf, uniform_cdf):
            vals = [cdf(t) for t in grid]
            assert vals[0] == 0.0
            assert vals[-1] == pytest.approx(1.0, abs=1e-15)
            assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_st_derivative_matches_density(self):
        h = 1e-5
        for t in np.linspace(0.1, math.pi - 0.1, 200):
            num = (st_cdf(t + h) - st_cdf(t - h)) / (2 * h)
            assert num == pytest.approx((2 / math.pi) * math.sin(t) ** 2,
                                        abs=1e-8)


class TestKS:
    def test_single_midpoint(self):
        rep = ks_statistic(ThetaSample(np.array([math.pi / 2])), REF_ST)
        assert rep.statistic == pytest.approx(0.5, abs=1e-12)
        assert rep.n == 1

    def test_exact_st_quantiles(self):
        n = 100
        q = np.array([sample_st_theta((i - 0.5) / n) for i in range(1, n + 1)])
        rep = ks_statistic(ThetaSample(q), REF_ST)
        assert rep.statistic == pytest.approx(1 / (2 * n), abs=1e-9)

    def test_exact_uniform_quantiles(self):
        n = 100
        q = math.pi * (np.arange(1, n + 1) - 0.5) / n
        rep = ks_statistic(ThetaSample(q), REF_UNIFORM)
        assert rep.statistic == pytest.approx(1 / (2 * n), abs=1e-12)

    def test_permutation_invariant(self):
        rng = np.random.default_rng(1)
        vals = rng.uniform(0, math.pi, 500)
        a = ks_statistic(ThetaSample(vals), REF_ST).statistic
        b = ks_statistic(ThetaSample(rng.permutation(vals)), REF_ST).statistic
        assert a == b

    def test_empty_rejected(self):
        with pytest.raises(InsufficientDataError):
            ks_statistic(ThetaSample(np.array([])), REF_ST)

    def test_out_of_range_rejected(self):
        with pytest.raises(DomainError):
            ks_statistic(ThetaSample(np.array([-0.5])), REF_ST)


class TestHistogram:
    def test_single_bin(self):
        vals = np.array([0.0, 1.0, math.pi])
        h = histogram(vals, bins=1)
        assert h.counts.tolist() == [3]
        assert h.edges.tolist() == [0.0, math.pi]

    def test_pi_lands_in_last_bin(self):
        h = histogram(np.array([math.pi]), bins=10)
        assert h.counts[-1] == 1

    def test_counts_sum_preserved(self):
        rng = np.random.default_rng(2)
        vals = rng.uniform(0, math.pi, 1000)
        assert histogram(vals, bins=17).counts.sum() == 1000

    def test_integer_weights(self):
        vals = np.array([0.1, 0.1, 3.0])
        w = np.array([5, 2, 4], dtype=np.int64)
        h = histogram(vals, bins=2, weights=w)
        assert h.counts.tolist() == [7, 4]

    def test_bins_guard(self):
        with pytest.raises(ConfigurationError):
            histogram(np.array([1.0]), bins=0)

    def test_csv_shape(self):
        h = histogram(np.array([0.5, 2.5]), bins=4)
        lines = h.to_csv().strip().splitlines()
        assert lines[0] == "bin_lo,bin_hi,count"
        assert len(lines) == 5


def synthetic_supersingular(p):
    return ApRecord(p, ReductionType.GOOD, 0, p + 1, math.pi / 2, True)


class TestDensityAndReport:
    def test_all_supersingular(self):
        recs = [synthetic_supersingular(p) for p in (5, 7, 11)]
        assert supersingular_density(recs) == 1.0

    def test_no_good_primes(self):
        bad = ApRecord(11, ReductionType.MULTIPLICATIVE, None, None, None, None)
        with pytest.raises(InsufficientDataError):
            supersingular_density([bad])
        with pytest.raises(InsufficientDataError):
            theta_distribution_report([bad], cm=False)

    def test_cm_report_shape(self, curve_j1728, table_1e4):
        records = trace_scan(curve_j1728, 2000, table_1e4)
        rep = theta_distribution_report(records, cm=True)
        assert rep.cm is True
        assert rep.reports[0].reference == REF_UNIFORM
        good = [r for r in records if r.good]
        want = sum(1 for r in good if r.supersingular) / len(good)
        assert rep.supersingular_density == want
        assert rep.n_good == len(good)
        assert rep.histogram.counts.sum() == len(good)

    def test_noncm_report_shape(self, curve_37a1, table_1e4):
        records = trace_scan(curve_37a1, 2000, table_1e4)
        rep = theta_distribution_report(records, cm=False)
        assert rep.cm is False
        assert rep.supersingular_density is None
        assert rep.reports[0].reference == REF_ST
        # smoke bound only; the tight threshold runs at full scale
        assert rep.reports[0].statistic < 0.15


def legendre_table(p):
    chi = np.full(p, -1, dtype=np.int64)
    chi[0] = 0
    chi[np.unique(np.arange(p) ** 2 % p)] = 1
    chi[0] = 0
    return chi


def birch_oracle(p, bins):
    """Direct enumeration over all p^2 short Weierstrass equations."""
    chi = legendre_table(p)
    singular = 0
    angles = []
    for a in range(p):
        for b in range(p):
            if (4 * a**3 + 27 * b**2) % p == 0:
                singular += 1
                continue
            xs = np.arange(p, dtype=np.int64)
            t = -int(chi[(xs**3 + a * xs + b) % p].sum())
            angles.append(math.acos(max(-1.0, min(1.0, t / (2 * math.sqrt(p))))))
    return singular, np.array(angles)


class TestBirchEnsemble:
    def test_p5_size(self):
        res = birch_ensemble(5, bins=8)
        assert res.singular_count == 5
        assert res.ensemble_size == 20

    @pytest.mark.parametrize("p", [5, 7, 13])
    def test_matches_direct_enumeration(self, p):
        bins = 6
        singular, angles = birch_oracle(p, bins)
        res = birch_ensemble(p, bins=bins)
        assert res.singular_count == singular
        assert res.ensemble_size == p * p - singular == len(angles)
        want = histogram(angles, bins=bins)
        assert np.array_equal(res.histogram.counts, want.counts)
        # a fine histogram nails the angle multiset itself
        fine = birch_ensemble(p, bins=997)
        assert np.array_equal(fine.histogram.counts,
                              histogram(angles, bins=997).counts)
        direct_ks = ks_statistic(ThetaSample(angles), REF_ST)
        assert res.ks.statistic == pytest.approx(direct_ks.statistic,
                                                 abs=1e-12)
        assert res.ks.n == direct_ks.n

    def test_single_bin(self):
        res = birch_ensemble(7, bins=1)
        assert res.histogram.counts.tolist() == [res.ensemble_size]

    def test_bounds(self):
        with pytest.raises(ConfigurationError):
            birch_ensemble(3)
        with pytest.raises(ConfigurationError):
            birch_ensemble(20011)
        with pytest.raises(PreconditionError):
            birch_ensemble(5187)  # 3 x 7 x 13 x 19
