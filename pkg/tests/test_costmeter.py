import numpy as np
import pytest

from ternwave.common import InvalidArgumentError, Wavelet
from ternwave.costmeter import (
    ASYMPTOTE,
    CostReport,
    instrument_transform,
    mu_cdf_level,
    mu_image_total,
    mu_ternary_level,
    nontrivial_rows,
)
from ternwave.ternary1d import TYPE_I, TYPE_II


def test_nontrivial_rows():
    # Type II runs two permutation rows (theta = pi) and one identity row
    assert nontrivial_rows(TYPE_I) == 6
    assert nontrivial_rows(TYPE_II) == 3


def test_per_level_counts():
    for n in (36, 300, 3000):
        assert mu_ternary_level(n, TYPE_I) == 10 * n
        assert mu_ternary_level(n, TYPE_II) == 5 * n
        assert mu_cdf_level(n) == 3 * n
    assert mu_cdf_level(101) == 303   # parity does not change the count
    with pytest.raises(InvalidArgumentError):
        mu_ternary_level(100, TYPE_I)   # needs a multiple of 3


def test_image_totals_approach_asymptotes():
    n = 3 ** 9
    for family in Wavelet:
        tot = mu_image_total(family, n)
        assert tot.near_asymptote
        assert tot.asymptote == ASYMPTOTE[family]
        assert abs(tot.ratio - tot.asymptote) / tot.asymptote < 0.001
        assert tot.count == pytest.approx(tot.ratio * n * n, rel=1e-12)


def test_image_totals_exact_small_case():
    # single ternary level on 36x36: rows+columns = 2 * 36 * (10 * 36)
    tot = mu_image_total(Wavelet.TERN1, 36)
    assert tot.levels == 1
    assert tot.count == 2 * 36 * 10 * 36


@pytest.mark.parametrize("family", tuple(Wavelet), ids=[w.value for w in Wavelet])
def test_instrumented_matches_analytic(family, rng):
    x = rng.standard_normal(3000)
    rep = instrument_transform(x, family)
    assert isinstance(rep, CostReport)
    assert rep.mu_instrumented == rep.mu_analytic
    assert rep.within_envelope
    assert rep.rescale_check < 1e-12


def test_instrumented_rejects_short_probe(rng):
    with pytest.raises(InvalidArgumentError):
        instrument_transform(rng.standard_normal(150), Wavelet.TERN1)


def test_envelope_property_is_advisory():
    rep = CostReport(family=Wavelet.CDF97, n=300, levels=1,
                     mu_analytic=900, mu_instrumented=950,
                     envelope=12, rescale_check=0.0)
    assert not rep.within_envelope
    with pytest.raises(InvalidArgumentError):
        CostReport(family=Wavelet.CDF97, n=300, levels=1,
                   mu_analytic=-1, mu_instrumented=900,
                   envelope=12, rescale_check=0.0)
