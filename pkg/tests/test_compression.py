import numpy as np
import pytest

from ternwave.common import InvalidArgumentError, Wavelet
from ternwave.compression import (
    BenchmarkRecord,
    CoefficientScan,
    CompressionResult,
    QualityTarget,
    _channel_budgets,
    min_coeffs_for_quality,
    reconstruct_at_m,
    relative_performance,
    subband_scan,
    threshold_keep_m,
)
from ternwave.image2d import forward2d, rgb_to_ycbcr


@pytest.fixture
def planes(rng):
    h, w = 48, 54
    yy, xx = np.mgrid[0:h, 0:w]
    r = 0.5 + 0.35 * np.sin(xx / 6.0) + 0.1 * rng.standard_normal((h, w))
    g = 0.5 + 0.30 * np.cos(yy / 5.0) + 0.1 * rng.standard_normal((h, w))
    b = 0.4 + 0.25 * np.sin((xx + yy) / 9.0) + 0.1 * rng.standard_normal((h, w))
    rgb = np.clip(np.stack([r, g, b], axis=-1), 0.0, 1.0)
    return rgb_to_ycbcr(np.rint(rgb * 255).astype(np.uint8))


# ---------------------------------------------------------------------------
# scan order and thresholding

def test_subband_scan_visits_each_block_once(rng):
    pyr = forward2d(rng.standard_normal((108, 108)), Wavelet.TERN1)
    assert pyr.levels == 2
    visits = list(subband_scan(pyr))
    assert len(visits) == len(set(visits))
    assert (1, 0, 0) not in visits      # level-1 scaling block feeds level 2
    assert (2, 0, 0) in visits
    total = sum(pyr.subband(*v).size for v in visits)
    assert total == pyr.total_coeffs


def test_threshold_keeps_largest_magnitudes(rng):
    pyr = forward2d(rng.standard_normal((40, 40)), Wavelet.CDF97)
    m = 100
    kept = threshold_keep_m(pyr, m)
    nz = kept.packed[kept.packed != 0.0]
    assert nz.size == m
    cutoff = np.min(np.abs(nz))
    dropped = np.abs(pyr.packed[kept.packed == 0.0])
    assert np.all(dropped <= cutoff + 1e-15)


def test_threshold_extremes(rng):
    pyr = forward2d(rng.standard_normal((40, 40)), Wavelet.CDF97)
    assert np.count_nonzero(threshold_keep_m(pyr, 0).packed) == 0
    full = threshold_keep_m(pyr, pyr.packed.size)
    assert np.array_equal(full.packed, pyr.packed)
    with pytest.raises(InvalidArgumentError):
        threshold_keep_m(pyr, pyr.packed.size + 1)
    with pytest.raises(InvalidArgumentError):
        threshold_keep_m(pyr, 10, scope="local")


def test_threshold_mapping_per_channel(rng):
    pyrs = {c: forward2d(rng.standard_normal((36, 36)), Wavelet.TERN2)
            for c in ("y", "cb", "cr")}
    m = 99
    out = threshold_keep_m(pyrs, m, scope="per-channel")
    counts = [int(np.count_nonzero(out[c].packed)) for c in ("y", "cb", "cr")]
    assert sum(counts) == m
    assert max(counts) - min(counts) <= 1   # equal sizes: near-even split
    joint = threshold_keep_m(pyrs, m, scope="global")
    assert sum(int(np.count_nonzero(joint[c].packed)) for c in joint) == m


def test_channel_budgets_proportional():
    assert _channel_budgets(10, [100, 100, 100]) == [4, 3, 3]
    assert _channel_budgets(0, [10, 10, 10]) == [0, 0, 0]
    assert _channel_budgets(30, [10, 10, 10]) == [10, 10, 10]
    # budgets never exceed a channel's capacity
    assert _channel_budgets(25, [20, 3, 3]) == [20, 3, 2]


def test_tie_break_is_deterministic():
    pyr = forward2d(np.zeros((40, 40)), Wavelet.CDF97)
    pyr.packed[:] = 1.0   # all magnitudes equal
    kept1 = threshold_keep_m(pyr, 17)
    kept2 = threshold_keep_m(pyr, 17)
    assert np.array_equal(kept1.packed, kept2.packed)
    assert np.count_nonzero(kept1.packed) == 17


# ---------------------------------------------------------------------------
# result containers

def test_compression_result_validates_bracket():
    with pytest.raises(InvalidArgumentError):
        CompressionResult(Wavelet.TERN1, 0.99, 10, 100, achieved=0.98,
                          achieved_below=0.97, levels=2)
    with pytest.raises(InvalidArgumentError):
        CompressionResult(Wavelet.TERN1, 0.99, 10, 100, achieved=0.995,
                          achieved_below=0.992, levels=2)
    # an uncertified bracket may legitimately sit above the target
    CompressionResult(Wavelet.TERN1, 0.99, 10, 100, achieved=0.995,
                      achieved_below=0.992, levels=2,
                      flags=("bracket_uncertified",))


def test_quality_target_range():
    QualityTarget(0.5)
    with pytest.raises(InvalidArgumentError):
        QualityTarget(1.0)
    with pytest.raises(InvalidArgumentError):
        QualityTarget(0.0)


def test_benchmark_record_pair():
    rec = BenchmarkRecord.pair("img", Wavelet.TERN1, 0.99, 80, 100)
    assert rec.beta_c == pytest.approx(0.2, abs=1e-15)
    with pytest.raises(InvalidArgumentError):
        BenchmarkRecord("img", Wavelet.TERN1, 0.99, 80, 100, 0.21)
    with pytest.raises(InvalidArgumentError):
        relative_performance(10, 0)


# ---------------------------------------------------------------------------
# quality search

def test_reconstruct_all_coefficients_is_lossless(planes):
    # quantizing the inverse of an untouched pyramid returns the original
    # integer image, so quality at m = total is exactly 1
    state = CoefficientScan(planes, Wavelet.TERN1)
    rec = state.reconstruct(state.total)
    assert state.quality(state.total) == 1.0
    again = CoefficientScan(planes, Wavelet.TERN1)
    assert np.array_equal(rec, again.reconstruct(again.total))
    assert rec.dtype == np.uint8


def test_quality_zero_coefficients_is_poor(planes):
    state = CoefficientScan(planes, Wavelet.CDF97)
    assert state.quality(0) < 0.5


def test_min_coeffs_bracket_certificate(planes):
    for wavelet in (Wavelet.TERN2, Wavelet.CDF97):
        res = min_coeffs_for_quality(planes, wavelet, 0.97)
        assert res.achieved >= 0.97
        assert 0 < res.m_min <= res.total_coeffs
        if "bracket_uncertified" not in res.flags:
            assert res.achieved_below is not None
            assert res.achieved_below < 0.97
        state = CoefficientScan(planes, wavelet)
        assert state.quality(res.m_min) == pytest.approx(res.achieved, abs=0)
        assert state.quality(res.m_min - 1) == pytest.approx(
            res.achieved_below, abs=0)


def test_min_coeffs_deterministic(planes):
    a = min_coeffs_for_quality(planes, Wavelet.TERN1, 0.97)
    b = min_coeffs_for_quality(planes, Wavelet.TERN1, 0.97)
    assert a == b


def test_min_coeffs_with_shared_state(planes):
    state = CoefficientScan(planes, Wavelet.CDF97)
    r1 = min_coeffs_for_quality(planes, Wavelet.CDF97, 0.95, state=state)
    r2 = min_coeffs_for_quality(planes, Wavelet.CDF97, 0.98, state=state)
    assert r1.m_min <= r2.m_min
    fresh = min_coeffs_for_quality(planes, Wavelet.CDF97, 0.98)
    assert fresh == r2


def test_min_coeffs_rejects_bad_target(planes):
    with pytest.raises(InvalidArgumentError):
        min_coeffs_for_quality(planes, Wavelet.CDF97, 1.0)
    with pytest.raises(InvalidArgumentError):
        min_coeffs_for_quality(planes, Wavelet.CDF97, -0.5)


def test_monotone_flag_reports_window(planes):
    res = min_coeffs_for_quality(planes, Wavelet.CDF97, 0.97)
    if "non_monotone" in res.flags:
        assert len(res.scan_window) >= 2
        ms = [m for m, _ in res.scan_window]
        assert ms == sorted(ms)
    else:
        assert res.scan_window == ()


def test_reconstruct_at_m_matches_scan(planes):
    state = CoefficientScan(planes, Wavelet.TERN2)
    direct = reconstruct_at_m(planes, Wavelet.TERN2, 500)
    assert np.array_equal(direct, state.reconstruct(500))


def test_per_channel_scope_changes_selection(planes):
    g = CoefficientScan(planes, Wavelet.CDF97, scope="global")
    p = CoefficientScan(planes, Wavelet.CDF97, scope="per-channel")
    # same total budget, different allocation across chroma planes
    assert g.total == p.total
    rg = g.reconstruct(400)
    rp = p.reconstruct(400)
    assert rg.shape == rp.shape
    assert not np.array_equal(rg, rp)


def test_ycbcr_mean_channel_mode(planes):
    state = CoefficientScan(planes, Wavelet.CDF97, channel_mode="ycbcr-mean")
    q = state.quality(state.total)
    assert q == 1.0
    assert state.quality(200) < 1.0
