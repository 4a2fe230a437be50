"""SSIM and multi-scale SSIM on normalized planes.

Defaults follow the original multi-scale formulation: 5 scales with weights
0.0448/0.2856/0.3001/0.2363/0.1333 (normalized), an 11-tap Gaussian window
with sigma 1.5, K1 = 0.01, K2 = 0.03, dynamic range 1.0.  Contrast-structure
means are taken at every scale, the luminance term only at the coarsest one.
Filtering is valid-mode, so each scale must keep min-dimension >= window;
``ms_ssim`` drops scales (renormalizing weights) when the image is too
small for the full pyramid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .common import InvalidArgumentError

_WANG_WEIGHTS = (0.0448, 0.2856, 0.3001, 0.2363, 0.1333)


@dataclass(frozen=True)
class MsSsimParams:
    scales: int = 5
    weights: tuple[float, ...] = field(default=None)  # normalized in __post_init__
    sigma: float = 1.5
    radius: int = 5          # window size = 2*radius + 1 = 11
    k1: float = 0.01
    k2: float = 0.03
    dynamic_range: float = 1.0

    def __post_init__(self):
        if self.scales < 1:
            raise InvalidArgumentError("scale count must be >= 1")
        w = self.weights
        if w is None:
            w = _WANG_WEIGHTS[:self.scales]
        if len(w) != self.scales:
            raise InvalidArgumentError(
                f"{len(w)} weights for {self.scales} scales")
        total = float(sum(w))
        if total <= 0:
            raise InvalidArgumentError("weights must have positive sum")
        object.__setattr__(self, "weights",
                           tuple(float(x) / total for x in w))

    @property
    def window(self) -> int:
        return 2 * self.radius + 1


DEFAULT_PARAMS = MsSsimParams()


def _gaussian_kernel(radius: int, sigma: float) -> np.ndarray:
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return k / k.sum()


def _filter_valid(plane: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Separable valid-mode correlation (kernel is symmetric)."""
    k = kernel.size
    h, w = plane.shape
    out = np.zeros((h, w - k + 1))
    for i, c in enumerate(kernel):
        out += c * plane[:, i:w - k + 1 + i]
    out2 = np.zeros((h - k + 1, out.shape[1]))
    for i, c in enumerate(kernel):
        out2 += c * out[i:h - k + 1 + i, :]
    return out2


def _check_pair(a: np.ndarray, b: np.ndarray, window: int) -> None:
    if a.shape != b.shape:
        raise InvalidArgumentError(f"shape mismatch {a.shape} vs {b.shape}")
    if a.ndim != 2:
        raise InvalidArgumentError("planes must be 2-D")
    if min(a.shape) < window:
        raise InvalidArgumentError(
            f"plane {a.shape} smaller than {window}x{window} window")


def _ssim_components(a, b, params: MsSsimParams):
    """Per-window luminance and contrast-structure maps."""
    kern = _gaussian_kernel(params.radius, params.sigma)
    c1 = (params.k1 * params.dynamic_range) ** 2
    c2 = (params.k2 * params.dynamic_range) ** 2
    mu_a = _filter_valid(a, kern)
    mu_b = _filter_valid(b, kern)
    var_a = _filter_valid(a * a, kern) - mu_a * mu_a
    var_b = _filter_valid(b * b, kern) - mu_b * mu_b
    cov = _filter_valid(a * b, kern) - mu_a * mu_b
    lum = (2.0 * mu_a * mu_b + c1) / (mu_a * mu_a + mu_b * mu_b + c1)
    cs = (2.0 * cov + c2) / (var_a + var_b + c2)
    return lum, cs


def ssim_map(a, b, params: MsSsimParams = DEFAULT_PARAMS) -> np.ndarray:
    """Local SSIM map (valid-mode: smaller than the inputs)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_pair(a, b, params.window)
    lum, cs = _ssim_components(a, b, params)
    return lum * cs


def ssim(a, b, params: MsSsimParams = DEFAULT_PARAMS) -> float:
    """Mean single-scale SSIM; 1.0 exactly for identical inputs."""
    return float(np.mean(ssim_map(a, b, params)))


def downsample_dyadic(plane: np.ndarray) -> np.ndarray:
    """2x2 block mean after cropping to even dimensions."""
    p = np.asarray(plane, dtype=np.float64)
    if p.ndim != 2 or min(p.shape) < 2:
        raise InvalidArgumentError("need a 2-D plane with dims >= 2")
    h, w = (p.shape[0] // 2) * 2, (p.shape[1] // 2) * 2
    p = p[:h, :w]
    return 0.25 * (p[0::2, 0::2] + p[0::2, 1::2] + p[1::2, 0::2] + p[1::2, 1::2])


def effective_scales(shape: tuple[int, int], params: MsSsimParams) -> int:
    """Largest scale count the image supports (window fits at every scale)."""
    scales = 0
    m = min(shape)
    while scales < params.scales and m >= params.window:
        scales += 1
        m //= 2
    return scales


def ms_ssim(a, b, params: MsSsimParams = DEFAULT_PARAMS) -> float:
    """Multi-scale SSIM score.

    Contrast-structure means enter at every scale, weighted geometrically;
    the coarsest scale contributes its full SSIM mean.  Negative means are
    clamped at zero before exponentiation (fractional powers).
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise InvalidArgumentError(f"shape mismatch {a.shape} vs {b.shape}")
    scales = effective_scales(a.shape, params)
    if scales == 0:
        raise InvalidArgumentError(
            f"plane {a.shape} smaller than the {params.window} window")
    weights = params.weights[:scales]
    total = sum(weights)
    weights = [w / total for w in weights]

    score = 1.0
    for j in range(scales):
        lum, cs = _ssim_components(a, b, params)
        if j < scales - 1:
            term = max(float(np.mean(cs)), 0.0)
            score *= term ** weights[j]
            a = downsample_dyadic(a)
            b = downsample_dyadic(b)
        else:
            term = max(float(np.mean(lum * cs)), 0.0)
            score *= term ** weights[j]
    return score


def psnr(a, b, peak: float = 1.0) -> float:
    """Debug aid only; not used by the benchmark."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    mse = float(np.mean((a - b) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(peak * peak / mse)
