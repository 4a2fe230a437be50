"""Coefficient thresholding and the minimal-count search at fixed MS-SSIM.

The codec model is deliberately bare: transform every color channel, keep the
m largest-magnitude coefficients, invert, and re-quantize to the source bit
depth.  Quality is MS-SSIM between the original and the re-ingested
reconstruction, so the score reflects what a decoder would actually emit.
``relative_performance`` turns a pair of minimal counts into the
dimensionless statistic beta_c = 1 - m_tern / m_cdf.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .common import InvalidArgumentError, UnattainableQualityError, Wavelet
from .image2d import ImagePlanes, Pyramid2D, forward2d, inverse2d, rgb_to_ycbcr, ycbcr_to_rgb
from .metrics import DEFAULT_PARAMS, MsSsimParams, ms_ssim

CHANNELS = ("y", "cb", "cr")
SCOPES = ("global", "per-channel")
CHANNEL_MODES = ("y", "ycbcr-mean")

GUARD_RADIUS = 8          # linear scan half-width around the bisection crossover
MAX_LEFT_EXTENSIONS = 16  # give up certifying after sliding the window this often

CSV_FIELDS = ("image_id", "width", "height", "wavelet", "target",
              "m_min", "total_coeffs", "achieved_msssim", "flags")


@dataclass(frozen=True)
class QualityTarget:
    """Minimal acceptable MS-SSIM, strictly inside (0, 1)."""

    ms_ssim_min: float

    def __post_init__(self):
        if not 0.0 < self.ms_ssim_min < 1.0:
            raise InvalidArgumentError(
                f"quality target {self.ms_ssim_min} outside (0, 1)")


PRESET_TARGETS = (QualityTarget(0.99), QualityTarget(0.98), QualityTarget(0.95))


@dataclass(frozen=True)
class CompressionResult:
    wavelet: Wavelet
    target: float
    m_min: int
    total_coeffs: int
    achieved: float
    achieved_below: float | None   # None only when m_min == 0
    levels: int
    flags: tuple[str, ...] = ()
    scan_window: tuple[tuple[int, float], ...] = ()

    def __post_init__(self):
        if self.achieved < self.target:
            raise InvalidArgumentError("result does not meet its own target")
        certified = "bracket_uncertified" not in self.flags
        if certified and self.achieved_below is not None \
                and self.achieved_below >= self.target:
            raise InvalidArgumentError("bracket is not a crossing")


@dataclass(frozen=True)
class BenchmarkRecord:
    """One ternary-vs-baseline comparison at a fixed target."""

    image_id: str
    family: Wavelet
    target: float
    m_tern: int
    m_cdf: int
    beta_c: float

    def __post_init__(self):
        if self.beta_c != 1.0 - self.m_tern / self.m_cdf:
            raise InvalidArgumentError("beta_c does not match its counts")

    @classmethod
    def pair(cls, image_id: str, family: Wavelet, target: float,
             m_tern: int, m_cdf: int) -> "BenchmarkRecord":
        return cls(image_id, family, target, m_tern, m_cdf,
                   relative_performance(m_tern, m_cdf))


def relative_performance(m_tern: int, m_cdf: int) -> float:
    """1 - m_tern/m_cdf; positive when the ternary codec needed fewer."""
    if m_cdf <= 0:
        raise InvalidArgumentError("baseline coefficient count must be positive")
    return 1.0 - m_tern / m_cdf


def subband_scan(pyramid: Pyramid2D):
    """Pinned subband visit order: level 1..L, (i, j) lexicographic.

    The (0, 0) block is the next level's input, so it is a leaf only at the
    deepest level.
    """
    bands = pyramid.bands_per_axis()
    for level in range(1, pyramid.levels + 1):
        for i in range(bands):
            for j in range(bands):
                if i == 0 and j == 0 and level < pyramid.levels:
                    continue
                yield level, i, j


def _scan_indices(pyramid: Pyramid2D) -> np.ndarray:
    """Flat packed-array indices in scan order (each coefficient once)."""
    grid = np.arange(pyramid.packed.size, dtype=np.int64).reshape(pyramid.packed.shape)
    proxy = dataclasses.replace(pyramid, packed=grid)
    idx = np.concatenate([proxy.subband(level, i, j).ravel()
                          for level, i, j in subband_scan(pyramid)])
    if idx.size != pyramid.packed.size:
        raise AssertionError("subband scan does not tile the plane")
    return idx


def _channel_budgets(m: int, sizes: list[int]) -> list[int]:
    """Split m across channels proportionally; remainder to earlier channels."""
    total = sum(sizes)
    base = [m * s // total for s in sizes]
    rem = m - sum(base)
    i = 0
    while rem > 0:
        if base[i] < sizes[i]:
            base[i] += 1
            rem -= 1
        i = (i + 1) % len(sizes)
    return base


def _keep_top(values: np.ndarray, m: int) -> np.ndarray:
    """Scan positions of the m largest |values|; ties favor earlier positions."""
    order = np.argsort(-np.abs(values), kind="stable")
    return order[:m]


def threshold_keep_m(pyramids, m: int, scope: str = "global"):
    """Zero all but the m largest-magnitude coefficients.

    ``pyramids`` is either a single Pyramid2D or an ordered mapping of them
    (one per channel).  ``global`` selects across all channels jointly;
    ``per-channel`` gives each channel a proportional share of m.  Ties break
    toward the earlier position in the scan order (channel, level, subband,
    row-major index), so the result is deterministic.
    """
    single = isinstance(pyramids, Pyramid2D)
    table = {"p": pyramids} if single else dict(pyramids)
    if scope not in SCOPES:
        raise InvalidArgumentError(f"unknown threshold scope {scope!r}")
    names = list(table)
    sizes = [table[c].packed.size for c in names]
    total = sum(sizes)
    if not 0 <= m <= total:
        raise InvalidArgumentError(f"m={m} outside [0, {total}]")

    scan = {c: _scan_indices(table[c]) for c in names}
    if scope == "per-channel" and not single:
        budgets = _channel_budgets(m, sizes)
        kept = {}
        for c, b in zip(names, budgets):
            vals = table[c].packed.ravel()[scan[c]]
            kept[c] = scan[c][_keep_top(vals, b)]
    else:
        vals = np.concatenate([table[c].packed.ravel()[scan[c]] for c in names])
        top = _keep_top(vals, m)
        kept, start = {}, 0
        for c, size in zip(names, sizes):
            local = top[(top >= start) & (top < start + size)] - start
            kept[c] = scan[c][local]
            start += size

    out = {}
    for c in names:
        p = table[c]
        flat = np.zeros(p.packed.size)
        flat[kept[c]] = p.packed.ravel()[kept[c]]
        out[c] = dataclasses.replace(p, packed=flat.reshape(p.packed.shape))
    return out["p"] if single else out


class CoefficientScan:
    """Shared state for repeated quality queries on one (image, wavelet) pair.

    Forward transforms and the stable magnitude sort are computed once;
    quality-at-m results are memoized, so bisection plus the guard scan cost
    one inverse transform per distinct m.
    """

    def __init__(self, planes: ImagePlanes, wavelet: Wavelet, *,
                 scope: str = "global", channel_mode: str = "y",
                 params: MsSsimParams = DEFAULT_PARAMS):
        if scope not in SCOPES:
            raise InvalidArgumentError(f"unknown threshold scope {scope!r}")
        if channel_mode not in CHANNEL_MODES:
            raise InvalidArgumentError(f"unknown channel mode {channel_mode!r}")
        self.planes = planes
        self.wavelet = wavelet
        self.scope = scope
        self.channel_mode = channel_mode
        self.params = params
        self.pyramids = {c: forward2d(getattr(planes, c), wavelet) for c in CHANNELS}
        self.levels = self.pyramids["y"].levels
        self._sizes = [self.pyramids[c].packed.size for c in CHANNELS]
        self.total = sum(self._sizes)
        self._scan = {c: _scan_indices(self.pyramids[c]) for c in CHANNELS}
        self._flat = {c: self.pyramids[c].packed.ravel() for c in CHANNELS}
        if scope == "per-channel":
            self._order = {c: _keep_top(self._flat[c][self._scan[c]], self._sizes[i])
                           for i, c in enumerate(CHANNELS)}
        else:
            vals = np.concatenate([self._flat[c][self._scan[c]] for c in CHANNELS])
            self._order = _keep_top(vals, self.total)
        self._quality: dict[int, float] = {}

    def _kept_indices(self, m: int) -> dict[str, np.ndarray]:
        if self.scope == "per-channel":
            budgets = _channel_budgets(m, self._sizes)
            return {c: self._scan[c][self._order[c][:b]]
                    for c, b in zip(CHANNELS, budgets)}
        top = self._order[:m]
        kept, start = {}, 0
        for c, size in zip(CHANNELS, self._sizes):
            local = top[(top >= start) & (top < start + size)] - start
            kept[c] = self._scan[c][local]
            start += size
        return kept

    def reconstruct(self, m: int) -> np.ndarray:
        """Integer RGB image rebuilt from the top-m coefficients."""
        if not 0 <= m <= self.total:
            raise InvalidArgumentError(f"m={m} outside [0, {self.total}]")
        kept = self._kept_indices(m)
        rec = {}
        for c in CHANNELS:
            p = self.pyramids[c]
            flat = np.zeros(p.packed.size)
            flat[kept[c]] = self._flat[c][kept[c]]
            rec[c] = inverse2d(dataclasses.replace(p, packed=flat.reshape(p.packed.shape)))
        planes = ImagePlanes(self.planes.width, self.planes.height,
                             rec["y"], rec["cb"], rec["cr"], self.planes.depth)
        rgb = ycbcr_to_rgb(planes)
        maxval = (1 << self.planes.depth) - 1
        dtype = np.uint8 if self.planes.depth <= 8 else np.uint16
        return np.rint(rgb * maxval).astype(dtype)

    def quality(self, m: int) -> float:
        """MS-SSIM of the re-ingested reconstruction against the original."""
        got = self._quality.get(m)
        if got is not None:
            return got
        rec = rgb_to_ycbcr(self.reconstruct(m), depth=self.planes.depth)
        if self.channel_mode == "y":
            score = ms_ssim(self.planes.y, rec.y, self.params)
        else:
            # shift chroma into [0, 1] so the luminance term stays meaningful
            scores = [ms_ssim(self.planes.y, rec.y, self.params)]
            for c in ("cb", "cr"):
                scores.append(ms_ssim(getattr(self.planes, c) + 0.5,
                                      getattr(rec, c) + 0.5, self.params))
            score = float(np.mean(scores))
        self._quality[m] = score
        return score


def reconstruct_at_m(planes: ImagePlanes, wavelet: Wavelet, m: int, *,
                     scope: str = "global") -> np.ndarray:
    """Transform, keep the top m coefficients, invert, re-quantize."""
    return CoefficientScan(planes, wavelet, scope=scope).reconstruct(m)


def min_coeffs_for_quality(planes: ImagePlanes, wavelet: Wavelet, target, *,
                           scope: str = "global", channel_mode: str = "y",
                           params: MsSsimParams = DEFAULT_PARAMS,
                           state: CoefficientScan | None = None) -> CompressionResult:
    """Certified-minimal coefficient count reaching the MS-SSIM target.

    Bisection assumes quality grows with m; a +-GUARD_RADIUS linear scan
    around the crossover then certifies the bracket.  If the scan shows a
    dip the result carries a ``non_monotone`` flag with the window recorded;
    if the window keeps extending left without finding the crossing the
    result is flagged ``bracket_uncertified``.
    """
    tval = target.ms_ssim_min if isinstance(target, QualityTarget) else float(target)
    if not 0.0 < tval < 1.0:
        raise InvalidArgumentError(f"quality target {tval} outside (0, 1)")
    st = state if state is not None else CoefficientScan(
        planes, wavelet, scope=scope, channel_mode=channel_mode, params=params)
    total = st.total
    best = st.quality(total)
    if best < tval:
        raise UnattainableQualityError(
            f"target {tval} unattainable: lossless gives {best:.6f}")

    flags: list[str] = []
    if st.quality(0) >= tval:
        crossover = 0
    else:
        lo, hi = 0, total    # quality(lo) < target <= quality(hi)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if st.quality(mid) >= tval:
                hi = mid
            else:
                lo = mid
        crossover = hi

    left = max(0, crossover - GUARD_RADIUS)
    right = min(total, crossover + GUARD_RADIUS)
    extensions = 0
    while left > 0 and st.quality(left) >= tval:
        if extensions >= MAX_LEFT_EXTENSIONS:
            flags.append("bracket_uncertified")
            break
        left = max(0, left - GUARD_RADIUS)
        extensions += 1

    window = [(m, st.quality(m)) for m in range(left, right + 1)]
    m_min = next(m for m, q in window if q >= tval)
    achieved = st.quality(m_min)
    achieved_below = st.quality(m_min - 1) if m_min > 0 else None
    if any(b < a for (_, a), (_, b) in zip(window, window[1:])):
        flags.append("non_monotone")

    return CompressionResult(
        wavelet=wavelet, target=tval, m_min=m_min, total_coeffs=total,
        achieved=achieved, achieved_below=achieved_below, levels=st.levels,
        flags=tuple(flags), scan_window=tuple(window) if flags else ())
