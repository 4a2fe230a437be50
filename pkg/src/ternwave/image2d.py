"""Color conversion and separable 2-D multi-level transforms.

Planes are transformed rows first, then columns, recursing on the
(sca, sca) / (L, L) block.  Coefficients are kept in a single packed array
(Mallat layout): each 1-D pass writes its subbands contiguously in
(sca | wav+ | wav-) or (approx | detail) order, so the top-left block of
the packed plane always holds the next level's input and total counts are
conserved by construction.

Color space is full-range BT.601 YCbCr: y in [0, 1], cb/cr in [-0.5, 0.5].
Chroma is never subsampled; all planes are transformed at full resolution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .common import InvalidArgumentError, Wavelet
from . import cdf97
from .ternary1d import (
    TYPE_I,
    TYPE_II,
    LevelPlan,
    TernaryCircuitSpec,
    _channel_order,
    _layout,
    _open_forward_wires,
    _open_inverse_wires,
    minimum_multi_length,
    plan_level,
)

KB = 0.114
KR = 0.299


@dataclass
class ImagePlanes:
    """Decoded image as YCbCr planes plus its source bit depth."""

    width: int
    height: int
    y: np.ndarray
    cb: np.ndarray
    cr: np.ndarray
    depth: int   # source bits per sample (8 or 16)

    def __post_init__(self):
        shape = (self.height, self.width)
        for name in ("y", "cb", "cr"):
            p = getattr(self, name)
            if p.shape != shape:
                raise InvalidArgumentError(
                    f"plane {name} has shape {p.shape}, expected {shape}")
            if not np.all(np.isfinite(p)):
                raise InvalidArgumentError(f"plane {name} has non-finite values")

    def planes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.y, self.cb, self.cr


def rgb_to_ycbcr(image: np.ndarray, depth: int | None = None) -> ImagePlanes:
    """Convert an (H, W, 3) 8- or 16-bit RGB array to normalized planes."""
    img = np.asarray(image)
    if img.ndim != 3 or img.shape[2] != 3:
        raise InvalidArgumentError(f"expected (H, W, 3) RGB, got {img.shape}")
    if depth is None:
        if img.dtype == np.uint8:
            depth = 8
        elif img.dtype == np.uint16:
            depth = 16
        else:
            raise InvalidArgumentError(
                "supply depth= for non-uint8/uint16 input")
    maxval = float(2 ** depth - 1)
    rgb = img.astype(np.float64) / maxval
    r, g, b = rgb[:, :, 0], rgb[:, :, 1], rgb[:, :, 2]
    y = KR * r + (1.0 - KR - KB) * g + KB * b
    cb = (b - y) / (2.0 * (1.0 - KB))
    cr = (r - y) / (2.0 * (1.0 - KR))
    h, w = y.shape
    return ImagePlanes(width=w, height=h, y=y, cb=cb, cr=cr, depth=depth)


def ycbcr_to_rgb(planes: ImagePlanes) -> np.ndarray:
    """Back to float RGB in [0, 1], clipped; quantize separately if needed."""
    y, cb, cr = planes.planes()
    r = y + 2.0 * (1.0 - KR) * cr
    b = y + 2.0 * (1.0 - KB) * cb
    g = (y - KR * r - KB * b) / (1.0 - KR - KB)
    rgb = np.stack([r, g, b], axis=-1)
    return np.clip(rgb, 0.0, 1.0)


# ---------------------------------------------------------------------------
# packed 2-D pyramid

@dataclass(frozen=True)
class Split97:
    """Axis bookkeeping for one CDF level."""

    n: int
    n_approx: int
    n_detail: int


def spec_for(wavelet: Wavelet) -> TernaryCircuitSpec | None:
    if wavelet is Wavelet.TERN1:
        return TYPE_I
    if wavelet is Wavelet.TERN2:
        return TYPE_II
    return None


def min_axis_length(wavelet: Wavelet) -> int:
    spec = spec_for(wavelet)
    return cdf97.MIN_LENGTH_97 if spec is None else minimum_multi_length(spec)


@dataclass
class Pyramid2D:
    """Packed multi-level 2-D decomposition of one plane."""

    wavelet: Wavelet
    levels: int
    width: int
    height: int
    packed: np.ndarray
    row_plans: tuple          # per level: LevelPlan (ternary) or Split97 (CDF)
    col_plans: tuple

    @property
    def total_coeffs(self) -> int:
        return self.width * self.height

    def _axis_offsets(self, plan) -> tuple[tuple[int, int], ...]:
        if isinstance(plan, LevelPlan):
            counts = plan.counts()
        else:
            counts = (plan.n_approx, plan.n_detail)
        out, pos = [], 0
        for c in counts:
            out.append((pos, pos + c))
            pos += c
        return tuple(out)

    def subband(self, level: int, i: int, j: int) -> np.ndarray:
        """View of one subband block; (0, 0) is the next level's input."""
        if not 1 <= level <= self.levels:
            raise InvalidArgumentError(f"level {level} out of range")
        rows = self._axis_offsets(self.col_plans[level - 1])
        cols = self._axis_offsets(self.row_plans[level - 1])
        r0, r1 = rows[i]
        c0, c1 = cols[j]
        return self.packed[r0:r1, c0:c1]

    def bands_per_axis(self) -> int:
        return 2 if self.wavelet is Wavelet.CDF97 else 3


def _tern_rows_forward(arr: np.ndarray, spec: TernaryCircuitSpec) -> np.ndarray:
    y = arr.astype(np.float64, copy=True)
    _open_forward_wires(y, spec)
    lay = _layout(arr.shape[1])
    sca_idx, wp_idx, wm_idx = _channel_order(spec, lay)
    perm = np.concatenate([sca_idx, wp_idx, wm_idx])
    return y[:, perm]


def _tern_rows_inverse(arr: np.ndarray, spec: TernaryCircuitSpec) -> np.ndarray:
    lay = _layout(arr.shape[1])
    sca_idx, wp_idx, wm_idx = _channel_order(spec, lay)
    perm = np.concatenate([sca_idx, wp_idx, wm_idx])
    y = np.empty_like(arr, dtype=np.float64)
    y[:, perm] = arr
    _open_inverse_wires(y, spec)
    return y


def _cdf_rows_forward(arr: np.ndarray) -> np.ndarray:
    a, d = cdf97.forward_level_97_batch(arr)
    return np.concatenate([a, d], axis=1)


def _cdf_rows_inverse(arr: np.ndarray) -> np.ndarray:
    na = (arr.shape[1] + 1) // 2
    return cdf97.inverse_level_97_batch(arr[:, :na], arr[:, na:])


def forward2d(plane: np.ndarray, wavelet: Wavelet,
              max_levels: int | None = None) -> Pyramid2D:
    """Separable multi-level transform of one plane.

    A level is applied only while both current dimensions are at or above
    the family minimum; a too-small plane simply yields zero levels (the
    packed array is then the plane itself).
    """
    p = np.asarray(plane, dtype=np.float64)
    if p.ndim != 2:
        raise InvalidArgumentError("plane must be 2-D")
    spec = spec_for(wavelet)
    min_n = min_axis_length(wavelet)
    packed = p.copy()
    h, w = packed.shape
    hc, wc = h, w
    row_plans, col_plans = [], []
    while (min(hc, wc) >= min_n
           and (max_levels is None or len(row_plans) < max_levels)):
        block = packed[:hc, :wc]
        if spec is None:
            block = _cdf_rows_forward(block)
            block = np.ascontiguousarray(block.T)
            block = _cdf_rows_forward(block)
            row_plans.append(Split97(wc, (wc + 1) // 2, wc // 2))
            col_plans.append(Split97(hc, (hc + 1) // 2, hc // 2))
            wc_next, hc_next = (wc + 1) // 2, (hc + 1) // 2
        else:
            rp = plan_level(wc, spec.cascade)
            cp = plan_level(hc, spec.cascade)
            block = _tern_rows_forward(block, spec)
            block = np.ascontiguousarray(block.T)
            block = _tern_rows_forward(block, spec)
            row_plans.append(rp)
            col_plans.append(cp)
            wc_next, hc_next = rp.n_sca, cp.n_sca
        packed[:hc, :wc] = block.T
        hc, wc = hc_next, wc_next
    return Pyramid2D(wavelet=wavelet, levels=len(row_plans), width=w, height=h,
                     packed=packed, row_plans=tuple(row_plans),
                     col_plans=tuple(col_plans))


def inverse2d(pyramid: Pyramid2D) -> np.ndarray:
    """Invert ``forward2d``; exact to floating-point roundoff."""
    packed = pyramid.packed.copy()
    spec = spec_for(pyramid.wavelet)
    for lvl in range(pyramid.levels - 1, -1, -1):
        rp, cp = pyramid.row_plans[lvl], pyramid.col_plans[lvl]
        hc, wc = cp.n, rp.n
        if hc > packed.shape[0] or wc > packed.shape[1]:
            raise InvalidArgumentError("pyramid plans exceed packed shape")
        block = np.ascontiguousarray(packed[:hc, :wc].T)
        if spec is None:
            block = _cdf_rows_inverse(block)
            block = np.ascontiguousarray(block.T)
            block = _cdf_rows_inverse(block)
        else:
            block = _tern_rows_inverse(block, spec)
            block = np.ascontiguousarray(block.T)
            block = _tern_rows_inverse(block, spec)
        packed[:hc, :wc] = block
    return packed
