"""CDF-9/7 biorthogonal wavelet via lifting, the comparison baseline.

Four lifting steps plus a scaling pair, with whole-sample (non-repeating)
mirror extension at both ends; works for any length >= 9, odd lengths give
ceil(n/2) approx and floor(n/2) detail coefficients.  The scaling constant
is chosen so both analysis bands carry a sqrt(2) factor relative to the
unit-DC filter normalization, which puts their l2 norms near 1 and makes
magnitude thresholding comparable across families.

The lifting constants are the standard factorization values; tests validate
them against direct filter convolution and the vanishing-moment property
instead of trusting the decimals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .common import InvalidArgumentError, TooShortError

MIN_LENGTH_97 = 9


@dataclass(frozen=True)
class LiftingScheme97:
    alpha: float
    beta: float
    gamma: float
    delta: float
    zeta: float


DEFAULT_SCHEME = LiftingScheme97(
    alpha=-1.586134342059924,
    beta=-0.052980118572961,
    gamma=0.882911075530934,
    delta=0.443506852043971,
    zeta=1.1496043988602418,
)


def _predict(evens: np.ndarray, odds: np.ndarray, coef: float, n: int) -> None:
    # odds[i] += coef * (evens[i] + evens[i+1]), mirror at the right end
    if n % 2 == 0:
        odds[:, :-1] += coef * (evens[:, :-1] + evens[:, 1:])
        odds[:, -1] += (2.0 * coef) * evens[:, -1]
    else:
        odds += coef * (evens[:, :-1] + evens[:, 1:])


def _update(evens: np.ndarray, odds: np.ndarray, coef: float, n: int) -> None:
    # evens[i] += coef * (odds[i-1] + odds[i]), mirror at both ends
    evens[:, 0] += (2.0 * coef) * odds[:, 0]
    if n % 2 == 0:
        evens[:, 1:] += coef * (odds[:, :-1] + odds[:, 1:])
    else:
        evens[:, 1:-1] += coef * (odds[:, :-1] + odds[:, 1:])
        evens[:, -1] += (2.0 * coef) * odds[:, -1]


def forward_level_97_batch(y: np.ndarray,
                           scheme: LiftingScheme97 = DEFAULT_SCHEME
                           ) -> tuple[np.ndarray, np.ndarray]:
    """One analysis level on every row of y; returns (approx, detail)."""
    n = y.shape[1]
    if n < MIN_LENGTH_97:
        raise TooShortError(f"CDF-9/7 level needs n >= {MIN_LENGTH_97}, got {n}")
    a = y[:, 0::2].astype(np.float64, copy=True)
    d = y[:, 1::2].astype(np.float64, copy=True)
    _predict(a, d, scheme.alpha, n)
    _update(a, d, scheme.beta, n)
    _predict(a, d, scheme.gamma, n)
    _update(a, d, scheme.delta, n)
    a *= scheme.zeta
    d *= 1.0 / scheme.zeta
    return a, d


def inverse_level_97_batch(a: np.ndarray, d: np.ndarray,
                           scheme: LiftingScheme97 = DEFAULT_SCHEME) -> np.ndarray:
    """Invert one level for every row; returns the interleaved signals."""
    if a.ndim != 2 or d.ndim != 2 or a.shape[0] != d.shape[0]:
        raise InvalidArgumentError("approx/detail batch shapes disagree")
    n = a.shape[1] + d.shape[1]
    if a.shape[1] != (n + 1) // 2:
        raise InvalidArgumentError(
            f"approx length {a.shape[1]} does not pair with detail {d.shape[1]}")
    a = a / scheme.zeta
    d = d * scheme.zeta
    _update(a, d, -scheme.delta, n)
    _predict(a, d, -scheme.gamma, n)
    _update(a, d, -scheme.beta, n)
    _predict(a, d, -scheme.alpha, n)
    y = np.empty((a.shape[0], n), dtype=np.float64)
    y[:, 0::2] = a
    y[:, 1::2] = d
    return y


def forward_level_97(signal, scheme: LiftingScheme97 = DEFAULT_SCHEME):
    """Single-level 1-D split; see the module docstring for conventions."""
    x = np.asarray(signal, dtype=np.float64)
    if x.ndim != 1:
        raise InvalidArgumentError("signal must be 1-D")
    a, d = forward_level_97_batch(x[np.newaxis, :], scheme)
    return a[0], d[0]


def inverse_level_97(approx, detail, scheme: LiftingScheme97 = DEFAULT_SCHEME):
    a = np.asarray(approx, dtype=np.float64)[np.newaxis, :]
    d = np.asarray(detail, dtype=np.float64)[np.newaxis, :]
    return inverse_level_97_batch(a, d, scheme)[0]


@dataclass
class Pyramid97:
    """Multi-level 1-D decomposition: deepest approx plus per-level details."""

    approx: np.ndarray
    details: list[np.ndarray]   # details[0] = finest level

    @property
    def levels(self) -> int:
        return len(self.details)


def forward_multi_97(signal, max_levels: int | None = None,
                     scheme: LiftingScheme97 = DEFAULT_SCHEME) -> Pyramid97:
    """Recurse on the approx band until it falls below 9 samples."""
    cur = np.asarray(signal, dtype=np.float64)
    if cur.ndim != 1:
        raise InvalidArgumentError("signal must be 1-D")
    if cur.size < MIN_LENGTH_97:
        raise TooShortError(
            f"CDF-9/7 transform needs n >= {MIN_LENGTH_97}, got {cur.size}")
    details: list[np.ndarray] = []
    while cur.size >= MIN_LENGTH_97 and (max_levels is None or len(details) < max_levels):
        cur, d = forward_level_97(cur, scheme)
        details.append(d)
    return Pyramid97(approx=cur, details=details)


def inverse_multi_97(pyramid: Pyramid97,
                     scheme: LiftingScheme97 = DEFAULT_SCHEME):
    cur = np.asarray(pyramid.approx, dtype=np.float64)
    for d in reversed(pyramid.details):
        cur = inverse_level_97(cur, d, scheme)
    return cur
