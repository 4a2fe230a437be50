"""Scalar-multiplication cost model for both wavelet families.

Analytic counts use the interior model: a row of rescaled 3-site gates costs
5 multiplications per cell, rows whose angle is 0 or pi reduce to signed
permutations and cost nothing, and a CDF-9/7 lifting level costs exactly 3n.
``instrument_transform`` executes the cheap paths for real, counting every
multiplication as performed, and cross-checks the rescaled ternary path
against the production circuit through the compensating per-wire diagonal.
The rescaled gates live only here; the production transform never uses them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .common import InvalidArgumentError, Wavelet
from .image2d import min_axis_length, spec_for
from .ternary1d import (
    SQRT2,
    TernaryCircuitSpec,
    _cells_forward,
    _layout,
    _open_forward_wires,
    _swap,
    plan_level,
)

ASYMPTOTE = {Wavelet.TERN1: 22.5, Wavelet.TERN2: 11.25, Wavelet.CDF97: 8.0}

_TRIVIAL_SIN = 1e-12   # |sin theta| below this: gate is a signed permutation


def nontrivial_rows(spec: TernaryCircuitSpec) -> int:
    return sum(1 for t in spec.angles if abs(math.sin(t)) > _TRIVIAL_SIN)


@dataclass(frozen=True)
class CostReport:
    family: Wavelet
    n: int
    levels: int
    mu_analytic: int
    mu_instrumented: int
    envelope: int             # allowed |instrumented - analytic|
    rescale_check: float      # max |production - diagonal * rescaled| on the probe
    notes: str = ""

    def __post_init__(self):
        if min(self.mu_analytic, self.mu_instrumented) < 0:
            raise InvalidArgumentError("negative multiplication count")

    @property
    def within_envelope(self) -> bool:
        return abs(self.mu_instrumented - self.mu_analytic) <= self.envelope


@dataclass(frozen=True)
class ImageCostTotal:
    """Exact finite-level multiplication total for an n x n image."""

    family: Wavelet
    n: int
    levels: int
    count: int
    ratio: float              # count / n^2
    asymptote: float
    near_asymptote: bool      # ratio within 2% of the asymptote


def mu_ternary_level(n: int, spec: TernaryCircuitSpec) -> int:
    """Interior cost of one level on n samples: (5/3) n per non-trivial row."""
    if n <= 0 or n % 3:
        raise InvalidArgumentError("interior model needs n divisible by 3")
    return 5 * (n // 3) * nontrivial_rows(spec)


def mu_cdf_level(n: int) -> int:
    """Lifting cost of one CDF-9/7 level: exactly 3n for any parity."""
    if n < 2:
        raise InvalidArgumentError("need n >= 2")
    return 3 * n


def mu_image_total(family: Wavelet, n: int) -> ImageCostTotal:
    """Exact multiplication total for the full 2-D pyramid on n x n.

    Each level transforms the current m x m scaling block along both axes
    (2m row passes); recursion follows the same stopping rule as the
    transform.  Boundary gates are excluded (interior model; the residual
    shows up in instrument_transform's envelope instead).
    """
    if n < 1:
        raise InvalidArgumentError("need n >= 1")
    stop = min_axis_length(family)
    spec = spec_for(family)
    count, levels, m = 0, 0, n
    while m >= stop:
        if family is Wavelet.CDF97:
            count += 6 * m * m
            m = (m + 1) // 2
        else:
            plan = plan_level(m, spec.cascade)
            count += 2 * m * 5 * _layout(m).cells * nontrivial_rows(spec)
            m = plan.n_sca
        levels += 1
    asym = ASYMPTOTE[family]
    ratio = count / float(n * n)
    return ImageCostTotal(
        family=family, n=n, levels=levels, count=count, ratio=ratio,
        asymptote=asym, near_asymptote=abs(ratio - asym) <= 0.02 * asym)


def _rescaled_cells(y: np.ndarray, theta: float, cells: int) -> int:
    """Apply (sqrt2/sin) v(theta)^T per cell in place; returns mults used."""
    c, s = math.cos(theta), math.sin(theta)
    ca = (c + 1.0) / (SQRT2 * s)
    cb = (c - 1.0) / (SQRT2 * s)
    ce = SQRT2 * c / s
    blk = y[:3 * cells].reshape(cells, 3)
    p, q, r = blk[:, 0].copy(), blk[:, 1].copy(), blk[:, 2].copy()
    blk[:, 0] = ca * p - q + cb * r
    blk[:, 1] = p + ce * q + r
    blk[:, 2] = cb * p - q + ca * r
    return 5 * cells


def _instrument_ternary(signal: np.ndarray, family: Wavelet,
                        spec: TernaryCircuitSpec) -> CostReport:
    n = signal.size
    if n % 3:
        raise InvalidArgumentError("instrumented ternary run needs n divisible by 3")
    lay = _layout(n)   # n % 3 == 0: edge boundaries, no site gates
    y = signal.astype(np.float64).copy()
    row = y.reshape(1, n)
    mults = 0
    diag_scalar = 1.0
    for i, theta in enumerate(reversed(spec.angles)):
        if abs(math.sin(theta)) > _TRIVIAL_SIN:
            mults += _rescaled_cells(y, theta, lay.cells)
            diag_scalar *= math.sin(theta) / SQRT2
        else:
            _cells_forward(row, theta, 0, lay.cells)   # signed permutation, free
        if i < spec.depth - 1:
            _swap(row, lay.edges)
    # Hadamard rescaled to [[1,1],[1,-1]] and the sqrt2 edge weights skipped;
    # both fold into the compensating diagonal.
    lo = y[lay.edges].copy()
    hi = y[lay.edges + 1]
    y[lay.edges] = lo + hi
    y[lay.edges + 1] = lo - hi

    diag = np.full(n, diag_scalar)
    diag[lay.edges] /= SQRT2
    diag[lay.edges + 1] /= SQRT2
    diag[0] *= SQRT2
    diag[n - 1] *= SQRT2

    prod = signal.astype(np.float64).copy().reshape(1, n)
    _open_forward_wires(prod, spec)
    check = float(np.max(np.abs(prod[0] - diag * y)))

    return CostReport(
        family=family, n=n, levels=1,
        mu_analytic=mu_ternary_level(n, spec), mu_instrumented=mults,
        envelope=12 * spec.depth, rescale_check=check,
        notes="boundary Hadamard and edge weights folded into the diagonal")


def _instrument_cdf(signal: np.ndarray) -> CostReport:
    from .cdf97 import DEFAULT_SCHEME, forward_level_97

    n = signal.size
    x = signal.astype(np.float64)
    a = x[0::2].copy()
    d = x[1::2].copy()
    sch = DEFAULT_SCHEME
    mults = 0
    for predict, update in ((sch.alpha, sch.beta), (sch.gamma, sch.delta)):
        if n % 2 == 0:
            d[:-1] += predict * (a[:-1] + a[1:])
            d[-1] += (2.0 * predict) * a[-1]
        else:
            d += predict * (a[:-1] + a[1:])
        mults += d.size
        a[0] += (2.0 * update) * d[0]
        if n % 2 == 0:
            a[1:] += update * (d[:-1] + d[1:])
        else:
            a[1:-1] += update * (d[:-1] + d[1:])
            a[-1] += (2.0 * update) * d[-1]
        mults += a.size
    a *= sch.zeta
    d *= 1.0 / sch.zeta
    mults += a.size + d.size

    ref_a, ref_d = forward_level_97(x)
    check = float(max(np.max(np.abs(ref_a - a)), np.max(np.abs(ref_d - d))))
    return CostReport(
        family=Wavelet.CDF97, n=n, levels=1,
        mu_analytic=mu_cdf_level(n), mu_instrumented=mults,
        envelope=12, rescale_check=check,
        notes="lifting path is the production path; no rescaling needed")


def instrument_transform(signal, family: Wavelet) -> CostReport:
    """Single-level counting run; requires interior-dominated length >= 300."""
    x = np.asarray(signal, dtype=np.float64).ravel()
    if x.size < 300:
        raise InvalidArgumentError("instrumented runs need n >= 300")
    if family is Wavelet.CDF97:
        return _instrument_cdf(x)
    return _instrument_ternary(x, family, spec_for(family))
