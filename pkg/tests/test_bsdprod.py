import math

import pytest

from bsdlab.bsdprod import (
    PartialProductSeries,
    accumulate_logP,
    compare_curves,
    default_checkpoints,
    rank_fit,
    series_from_csv,
    series_to_csv,
)
from bsdlab.curves import ApRecord, ReductionType, trace_scan
from bsdlab.errors import (
    InsufficientDataError,
    PreconditionError,
    SingularFitError,
)
from bsdlab.primes import loglog


def good_record(p, a_p):
    n_p = p + 1 - a_p
    theta = math.acos(max(-1.0, min(1.0, a_p / (2 * math.sqrt(p)))))
    return ApRecord(p, ReductionType.GOOD, a_p, n_p, theta,
                    a_p == 0 if p >= 5 else a_p % p == 0)


def synthetic_series(f, xs, label=""):
    return PartialProductSeries(label, [(x, f(loglog(x)), loglog(x)) for x in xs],
                                0, [])


def test_default_checkpoints():
    cps = default_checkpoints(1000)
    assert cps == [128, 256, 512, 1000]
    assert default_checkpoints(128) == [128]


def test_j1728_at_5(curve_j1728, table_1e4):
    records = trace_scan(curve_j1728, 5, table_1e4)
    series = accumulate_logP(records, [5])
    # N_3 = 4, N_5 = 8; p = 2 is additive and excluded
    assert series.logP_at(5) == pytest.approx(math.log(32 / 15), rel=1e-15)
    assert series.bad_primes_excluded == [2]
    assert series.prime_count == 2


def test_empty_records():
    series = accumulate_logP([], [10, 100])
    assert series.logP_at(10) == 0.0
    assert series.logP_at(100) == 0.0
    assert series.prime_count == 0


def test_single_supersingular_prime():
    r = good_record(13, 0)
    series = accumulate_logP([r], [13])
    assert series.logP_at(13) == pytest.approx(math.log1p(1 / 13), rel=1e-15)
    assert series.logP_at(13) > 0


def test_checkpoint_includes_boundary_prime(curve_37a1, table_1e4):
    # a checkpoint at x = p must include p's own factor
    records = trace_scan(curve_37a1, 11, table_1e4)
    with_11 = accumulate_logP(records, [11]).logP_at(11)
    upto_10 = accumulate_logP(records, [10]).logP_at(10)
    assert with_11 != upto_10


def test_prefix_consistency(curve_37a1, table_1e4):
    records = trace_scan(curve_37a1, 5000, table_1e4)
    both = accumulate_logP(records, [100, 5000])
    alone = accumulate_logP(records, [100])
    assert both.logP_at(100) == alone.logP_at(100)
    full = accumulate_logP(records, [5000])
    assert both.logP_at(5000) == full.logP_at(5000)


def test_segment_sum_matches_difference(curve_37a1, table_1e4):
    records = trace_scan(curve_37a1, 5000, table_1e4)
    series = accumulate_logP(records, [100, 5000])
    segment = math.fsum(
        math.log(r.n_p / r.p) for r in records if r.good and 100 < r.p <= 5000
    )
    diff = series.logP_at(5000) - series.logP_at(100)
    assert diff == pytest.approx(segment, abs=1e-12)


def test_descending_inputs_rejected(curve_37a1, table_1e4):
    records = trace_scan(curve_37a1, 100, table_1e4)
    with pytest.raises(PreconditionError):
        accumulate_logP(records, [100, 50])
    with pytest.raises(PreconditionError):
        accumulate_logP(list(reversed(records)), [100])


def test_rank_fit_exact_affine():
    series = synthetic_series(lambda t: 2.0 * t + 0.3,
                              [1000, 2000, 4000, 8000, 16000])
    fit = rank_fit(series)
    assert fit.slope == pytest.approx(2.0, abs=1e-12)
    assert fit.intercept == pytest.approx(0.3, abs=1e-12)
    assert fit.residual_rms == pytest.approx(0.0, abs=1e-13)
    assert fit.window == (1000, 16000)


def test_rank_fit_insufficient_data():
    series = synthetic_series(lambda t: t, [2000])
    with pytest.raises(InsufficientDataError):
        rank_fit(series)


def test_rank_fit_window_filter():
    series = synthetic_series(lambda t: t, [10, 20, 2000])
    with pytest.raises(InsufficientDataError):
        rank_fit(series)  # only one point at x >= 1000


def test_rank_fit_zero_span():
    series = PartialProductSeries("", [(2000, 1.0, 1.5), (2000, 2.0, 1.5)], 0, [])
    with pytest.raises(SingularFitError):
        rank_fit(series)


def test_compare_single_series():
    s = synthetic_series(lambda t: t, [1000], label="37a1")
    rows = compare_curves([s], 1000)
    assert len(rows) == 1
    assert rows[0]["label"] == "37a1"
    assert rows[0]["known_rank"] == 1
    assert rows[0]["tied"] is False


def test_compare_reports_ties_in_label_order():
    a = synthetic_series(lambda t: t, [1000], label="b-curve")
    b = synthetic_series(lambda t: t, [1000], label="a-curve")
    c = synthetic_series(lambda t: t + 1, [1000], label="z-curve")
    rows = compare_curves([a, b, c], 1000)
    assert [r["label"] for r in rows] == ["z-curve", "a-curve", "b-curve"]
    assert [r["tied"] for r in rows] == [False, True, True]
    assert rows[0]["known_rank"] is None


def test_csv_round_trip_is_byte_identical(curve_37a1, table_1e4):
    records = trace_scan(curve_37a1, 3000, table_1e4)
    series = accumulate_logP(records, [128, 1024, 3000], label="37a1")
    text = series_to_csv(series)
    again = series_to_csv(series_from_csv(text, label="37a1"))
    assert again == text
    parsed = series_from_csv(text)
    assert parsed.checkpoints == series.checkpoints


def test_csv_rejects_garbage():
    with pytest.raises(PreconditionError):
        series_from_csv("not,a,header\n1,2,3\n")
    with pytest.raises(PreconditionError):
        series_from_csv("x,logP,loglogx\n1,2\n")
    with pytest.raises(PreconditionError):
        series_from_csv("x,logP,loglogx\nfoo,2.0,3.0\n")