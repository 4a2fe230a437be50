import numpy as np
import pytest

from ternwave.common import InvalidArgumentError, TooShortError
from ternwave.ternary1d import (
    MIN_OPEN_LENGTH,
    TYPE_I,
    TYPE_II,
    Cascade,
    ExtensionKind,
    Subbands1D,
    forward_multi,
    forward_open,
    forward_periodic,
    inverse_multi,
    inverse_open,
    minimum_multi_length,
    plan_level,
    symmetric_extension_oracle,
)

SPECS = (TYPE_I, TYPE_II)


def periodic_matrix(n, spec):
    cols = [np.concatenate(
        [sb.sca, sb.wav_plus, sb.wav_minus])
        for sb in (forward_periodic(e, spec) for e in np.eye(n))]
    return np.array(cols).T


# ---------------------------------------------------------------------------
# level planning

def test_plan_level_mod_classes_site_centered():
    for k in range(2, 21):
        assert plan_level(3 * k, Cascade.SITE_CENTERED).counts() == (k, k + 1, k - 1)
        assert plan_level(3 * k + 1, Cascade.SITE_CENTERED).counts() == (k + 1, k, k)
        assert plan_level(3 * k + 2, Cascade.SITE_CENTERED).counts() == (k + 1, k + 1, k)


def test_plan_level_edge_centered_swaps_sca():
    for n in range(6, 64):
        site = plan_level(n, Cascade.SITE_CENTERED)
        edge = plan_level(n, Cascade.EDGE_CENTERED)
        assert edge.counts() == (site.n_wav_plus, site.n_sca, site.n_wav_minus)
        assert (edge.left, edge.right) == (site.left, site.right)


def test_plan_level_extensions():
    assert plan_level(9, Cascade.SITE_CENTERED).left is ExtensionKind.EDGE
    assert plan_level(9, Cascade.SITE_CENTERED).right is ExtensionKind.EDGE
    p10 = plan_level(10, Cascade.SITE_CENTERED)
    assert (p10.left, p10.right) == (ExtensionKind.SITE, ExtensionKind.SITE)
    p11 = plan_level(11, Cascade.SITE_CENTERED)
    assert (p11.left, p11.right) == (ExtensionKind.EDGE, ExtensionKind.SITE)


def test_plan_level_counts_sum_to_n():
    for cascade in Cascade:
        for n in range(MIN_OPEN_LENGTH, 80):
            assert sum(plan_level(n, cascade).counts()) == n


def test_plan_level_too_short():
    with pytest.raises(TooShortError):
        plan_level(MIN_OPEN_LENGTH - 1, Cascade.SITE_CENTERED)


# ---------------------------------------------------------------------------
# single level, open boundaries

@pytest.mark.parametrize("spec", SPECS, ids=("tern1", "tern2"))
@pytest.mark.parametrize("n", (6, 7, 8, 12, 13, 14, 33, 100))
def test_open_round_trip(spec, n, rng):
    x = rng.standard_normal(n)
    plan = plan_level(n, spec.cascade)
    sb = forward_open(x, spec, plan)
    assert np.max(np.abs(inverse_open(sb, spec) - x)) < 1e-12


@pytest.mark.parametrize("spec", SPECS, ids=("tern1", "tern2"))
@pytest.mark.parametrize("n", (12, 13, 14, 45, 46, 47))
def test_open_matches_symmetric_extension(spec, n, rng):
    for _ in range(5):
        x = rng.standard_normal(n)
        plan = plan_level(n, spec.cascade)
        fast = forward_open(x, spec, plan)
        ref, trimmed = symmetric_extension_oracle(x, spec, plan,
                                                  return_trimmed=True)
        for a, b in ((fast.sca, ref.sca), (fast.wav_plus, ref.wav_plus),
                     (fast.wav_minus, ref.wav_minus)):
            assert np.max(np.abs(a - b)) < 1e-12
        if trimmed.size:
            assert np.max(np.abs(trimmed)) < 1e-13


def test_open_transform_is_linear(rng):
    for spec in SPECS:
        plan = plan_level(48, spec.cascade)
        x, y = rng.standard_normal(48), rng.standard_normal(48)
        fx = forward_open(x, spec, plan)
        fy = forward_open(y, spec, plan)
        fxy = forward_open(2.0 * x - 3.0 * y, spec, plan)
        for band in ("sca", "wav_plus", "wav_minus"):
            lhs = getattr(fxy, band)
            rhs = 2.0 * getattr(fx, band) - 3.0 * getattr(fy, band)
            assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_forward_open_rejects_stale_plan(rng):
    x = rng.standard_normal(12)
    wrong = plan_level(15, TYPE_I.cascade)
    with pytest.raises(InvalidArgumentError):
        forward_open(x, TYPE_I, wrong)


def test_subbands_validate():
    plan = plan_level(12, Cascade.SITE_CENTERED)
    bad = Subbands1D(sca=np.zeros(3), wav_plus=np.zeros(5),
                     wav_minus=np.zeros(4), plan=plan)
    with pytest.raises(InvalidArgumentError):
        bad.validate()


def test_inverse_open_requires_plan():
    sb = Subbands1D(sca=np.zeros(4), wav_plus=np.zeros(4),
                    wav_minus=np.zeros(4), plan=None)
    with pytest.raises(InvalidArgumentError):
        inverse_open(sb, TYPE_I)


# ---------------------------------------------------------------------------
# periodic transform

@pytest.mark.parametrize("spec", SPECS, ids=("tern1", "tern2"))
def test_periodic_is_orthogonal_on_ring(spec):
    u = periodic_matrix(45, spec)
    assert np.max(np.abs(u.T @ u - np.eye(45))) < 1e-12


@pytest.mark.parametrize("spec", SPECS, ids=("tern1", "tern2"))
def test_periodic_preserves_norm(spec, rng):
    for _ in range(10):
        x = rng.standard_normal(45)
        sb = forward_periodic(x, spec)
        y = np.concatenate([sb.sca, sb.wav_plus, sb.wav_minus])
        assert abs(np.linalg.norm(y) - np.linalg.norm(x)) < 1e-12


def test_periodic_rejects_bad_length(rng):
    with pytest.raises(InvalidArgumentError):
        forward_periodic(rng.standard_normal(44), TYPE_I)
    with pytest.raises(InvalidArgumentError):
        forward_periodic(rng.standard_normal(3), TYPE_I)


def test_periodic_constant_input_concentrates_on_scaling(rng):
    # DC belongs entirely to the scaling channel; published angles are
    # rounded to 9 decimals so the wavelet leakage floor sits near 1e-9
    for spec in SPECS:
        sb = forward_periodic(np.full(45, 0.7), spec)
        assert np.max(np.abs(sb.wav_plus)) < 1e-8
        assert np.max(np.abs(sb.wav_minus)) < 1e-8
        assert np.allclose(sb.sca, 0.7 * np.sqrt(3.0), atol=1e-8)


# ---------------------------------------------------------------------------
# multi-level

def test_minimum_multi_length():
    assert minimum_multi_length(TYPE_I) == 36
    assert minimum_multi_length(TYPE_II) == 36


@pytest.mark.parametrize("spec", SPECS, ids=("tern1", "tern2"))
@pytest.mark.parametrize("n", (36, 37, 38, 108, 109, 110, 200))
def test_multi_round_trip(spec, n, rng):
    x = rng.standard_normal(n)
    levels = forward_multi(x, spec)
    assert np.max(np.abs(inverse_multi(levels, spec) - x)) < 1e-10


def test_multi_level_counts():
    # 36 -> scaling band 12 or 13, below the per-level minimum: one level;
    # 111 = 3*37 -> 37-long scaling band, still one; 110 -> sca 37 likewise
    x = np.arange(36.0)
    assert len(forward_multi(x, TYPE_I)) == 1
    x = np.arange(324.0)     # 324 -> 108 -> 36 -> 12: three levels
    assert len(forward_multi(x, TYPE_I)) == 3
    assert len(forward_multi(x, TYPE_I, max_levels=2)) == 2


def test_multi_too_short():
    with pytest.raises(TooShortError):
        forward_multi(np.zeros(35), TYPE_I)


def test_multi_coefficient_conservation(rng):
    x = rng.standard_normal(108)
    levels = forward_multi(x, TYPE_II)
    total = sum(len(sb.wav_plus) + len(sb.wav_minus) for sb in levels)
    total += len(levels[-1].sca)
    assert total == 108


def test_inverse_multi_checks_chain(rng):
    levels = forward_multi(rng.standard_normal(108), TYPE_I)
    levels[-1].sca = levels[-1].sca[:-1]
    with pytest.raises(InvalidArgumentError):
        inverse_multi(levels, TYPE_I)
    with pytest.raises(InvalidArgumentError):
        inverse_multi([], TYPE_I)
