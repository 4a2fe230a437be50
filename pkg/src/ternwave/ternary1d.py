"""1-D ternary (dilation-3) wavelet transforms built from gate circuits.

A depth-z circuit is z rows of identical 3x3 rotation cells with wire
crossings between rows at every cell edge, topped by Hadamard pairs on the
edges.  Cell centers come out as the site-centered channel h+, the two
Hadamard outputs per edge as the edge-centered channels g+ (symmetric) and
g- (anti-symmetric).  ``angles[0]`` parameterizes the topmost row, i.e. the
row applied last on the way up.

Rotation cells are applied transposed (v(theta)^T); this is the orientation
under which symmetric boundary handling closes exactly, and it is pinned by
``symmetric_extension_oracle`` equality rather than by convention.

Open (finite) signals use mirror extensions chosen by n mod 3 so that no
extra coefficients appear: edge-centered ends get a sqrt(2) weight on the
boundary wire, site-centered ends get dedicated 2x2 boundary gates.  The
inverse circuit replaces those with their inverse gates and a 1/sqrt(2)
weight.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .common import InvalidArgumentError, TooShortError
from .gates import SQRT2, boundary_gate

#: Smallest open signal handled by a single level: every n >= 6 gives
#: non-overlapping boundary gadgets in all three n mod 3 classes.
MIN_OPEN_LENGTH = 6


class Cascade(enum.Enum):
    """Which channel carries the scaling data in a multi-level cascade."""

    SITE_CENTERED = "site"   # recurse on h+
    EDGE_CENTERED = "edge"   # recurse on g+


class ExtensionKind(enum.Enum):
    EDGE = "edge"
    SITE = "site"


@dataclass(frozen=True)
class TernaryCircuitSpec:
    """Circuit family: depth, row angles (index 0 = topmost row), cascade."""

    depth: int
    angles: tuple[float, ...]
    cascade: Cascade

    def __post_init__(self):
        if self.depth < 1:
            raise InvalidArgumentError("depth must be >= 1")
        if len(self.angles) != self.depth:
            raise InvalidArgumentError(
                f"expected {self.depth} angles, got {len(self.angles)}")
        if not all(math.isfinite(a) for a in self.angles):
            raise InvalidArgumentError("angles must be finite")


#: Depth-6 site-centered family.
TYPE_I = TernaryCircuitSpec(
    depth=6,
    angles=(0.072130476, 0.847695078, -0.576099009,
            -0.591746629, 0.673886987, 0.529449713),
    cascade=Cascade.SITE_CENTERED,
)

#: Depth-6 edge-centered family; two rows are plain permutations (theta = pi)
#: and one is the identity (theta = 0).
TYPE_II = TernaryCircuitSpec(
    depth=6,
    angles=(-0.261582176, math.pi, 0.107465734,
            math.pi, -0.461363266, 0.0),
    cascade=Cascade.EDGE_CENTERED,
)


@dataclass(frozen=True)
class LevelPlan:
    """Boundary extensions and subband counts for one open level."""

    n: int
    left: ExtensionKind
    right: ExtensionKind
    n_sca: int
    n_wav_plus: int
    n_wav_minus: int

    def counts(self) -> tuple[int, int, int]:
        return (self.n_sca, self.n_wav_plus, self.n_wav_minus)


@dataclass
class Subbands1D:
    """One level of transformed data; ``plan`` is None for periodic mode."""

    sca: np.ndarray
    wav_plus: np.ndarray
    wav_minus: np.ndarray
    plan: LevelPlan | None

    def validate(self) -> None:
        if self.plan is not None:
            got = (len(self.sca), len(self.wav_plus), len(self.wav_minus))
            if got != self.plan.counts():
                raise InvalidArgumentError(
                    f"subband lengths {got} do not match plan {self.plan.counts()}")


def minimum_multi_length(spec: TernaryCircuitSpec) -> int:
    """Per-level minimum used by the multi-level recursion (6 * depth)."""
    return 6 * spec.depth


def plan_level(n: int, cascade: Cascade) -> LevelPlan:
    """Choose boundary extensions and subband counts for length n.

    n = 3k   -> Edge/Edge,  channel counts (h+, g+, g-) = (k, k+1, k-1)
    n = 3k+1 -> Site/Site,  (k+1, k, k)
    n = 3k+2 -> Edge/Site,  (k+1, k+1, k); the Site/Edge mirror image is
                never used.

    For the edge-centered cascade the g+ channel is the scaling channel, so
    n_sca and n_wav_plus swap relative to the site-centered case.
    """
    if n < MIN_OPEN_LENGTH:
        raise TooShortError(f"open transform needs n >= {MIN_OPEN_LENGTH}, got {n}")
    mod = n % 3
    if mod == 0:
        k = n // 3
        left = right = ExtensionKind.EDGE
        n_site, n_edge_sym, n_edge_anti = k, k + 1, k - 1
    elif mod == 1:
        k = (n - 1) // 3
        left = right = ExtensionKind.SITE
        n_site, n_edge_sym, n_edge_anti = k + 1, k, k
    else:
        k = (n - 2) // 3
        left, right = ExtensionKind.EDGE, ExtensionKind.SITE
        n_site, n_edge_sym, n_edge_anti = k + 1, k + 1, k
    if cascade is Cascade.SITE_CENTERED:
        n_sca, n_wav_plus = n_site, n_edge_sym
    else:
        n_sca, n_wav_plus = n_edge_sym, n_site
    return LevelPlan(n=n, left=left, right=right, n_sca=n_sca,
                     n_wav_plus=n_wav_plus, n_wav_minus=n_edge_anti)


# ---------------------------------------------------------------------------
# wire layout and fused row kernels (batched over axis 0)

@dataclass(frozen=True)
class _Layout:
    n: int
    left: ExtensionKind
    right: ExtensionKind
    offset: int          # wire index of the first full cell
    cells: int           # number of full 3-wire cells
    edges: np.ndarray    # lower wire index of every Hadamard edge pair
    site_idx: np.ndarray
    edge_sym_idx: np.ndarray
    edge_anti_idx: np.ndarray


@lru_cache(maxsize=512)
def _layout(n: int) -> _Layout:
    mod = n % 3
    if mod == 0:
        left = right = ExtensionKind.EDGE
        offset, cells = 0, n // 3
    elif mod == 1:
        left = right = ExtensionKind.SITE
        offset, cells = 2, (n - 4) // 3
    else:
        left, right = ExtensionKind.EDGE, ExtensionKind.SITE
        offset, cells = 0, (n - 2) // 3
    edges: list[int] = []
    if left is ExtensionKind.SITE:
        edges.append(1)
    for j in range(cells):
        e = offset + 3 * j + 2
        if e <= n - 2:
            edges.append(e)
    edges_arr = np.asarray(edges, dtype=np.intp)

    site = [offset + 3 * j + 1 for j in range(cells)]
    if left is ExtensionKind.SITE:
        site.insert(0, 0)
    if right is ExtensionKind.SITE:
        site.append(n - 1)
    edge_sym = list(edges)
    if left is ExtensionKind.EDGE:
        edge_sym.insert(0, 0)
    if right is ExtensionKind.EDGE:
        edge_sym.append(n - 1)
    edge_anti = [e + 1 for e in edges]
    return _Layout(
        n=n, left=left, right=right, offset=offset, cells=cells,
        edges=edges_arr,
        site_idx=np.asarray(sorted(site), dtype=np.intp),
        edge_sym_idx=np.asarray(sorted(edge_sym), dtype=np.intp),
        edge_anti_idx=np.asarray(sorted(edge_anti), dtype=np.intp),
    )


def _cells_forward(y: np.ndarray, theta: float, offset: int, cells: int) -> None:
    # v(theta)^T on each cell (p, q, r):
    #   p' = c*u + d - (s/sqrt2) q,  q' = sqrt2 s*u + c q,  r' = c*u - d - ...
    # with u = (p+r)/2, d = (p-r)/2.
    if cells == 0:
        return
    c, s = math.cos(theta), math.sin(theta)
    blk = y[:, offset:offset + 3 * cells].reshape(y.shape[0], cells, 3)
    p, q, r = blk[:, :, 0], blk[:, :, 1], blk[:, :, 2]
    u = (p + r) * 0.5
    d = (p - r) * 0.5
    cq = (s / SQRT2) * q
    q_new = (SQRT2 * s) * u + c * q
    cu = c * u
    blk[:, :, 0] = cu + d - cq
    blk[:, :, 2] = cu - d - cq
    blk[:, :, 1] = q_new


def _cells_inverse(y: np.ndarray, theta: float, offset: int, cells: int) -> None:
    if cells == 0:
        return
    c, s = math.cos(theta), math.sin(theta)
    blk = y[:, offset:offset + 3 * cells].reshape(y.shape[0], cells, 3)
    p, q, r = blk[:, :, 0], blk[:, :, 1], blk[:, :, 2]
    u = (p + r) * 0.5
    d = (p - r) * 0.5
    cq = (s / SQRT2) * q
    q_new = (-SQRT2 * s) * u + c * q
    cu = c * u
    blk[:, :, 0] = cu + d + cq
    blk[:, :, 2] = cu - d + cq
    blk[:, :, 1] = q_new


def _swap(y: np.ndarray, edges: np.ndarray) -> None:
    tmp = y[:, edges].copy()
    y[:, edges] = y[:, edges + 1]
    y[:, edges + 1] = tmp


def _hadamard(y: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> None:
    a = y[:, lower].copy()
    b = y[:, upper]
    y[:, lower] = (a + b) / SQRT2
    y[:, upper] = (a - b) / SQRT2


def _open_forward_wires(y: np.ndarray, spec: TernaryCircuitSpec) -> None:
    """In-place open-boundary analysis circuit on rows of y."""
    lay = _layout(y.shape[1])
    n = lay.n
    for i, theta in enumerate(reversed(spec.angles)):
        _cells_forward(y, theta, lay.offset, lay.cells)
        if lay.left is ExtensionKind.SITE:
            g = boundary_gate("right", theta).entries  # = l(theta)^T
            y[:, 0:2] = y[:, 0:2] @ g.T
        if lay.right is ExtensionKind.SITE:
            g = boundary_gate("left", theta).entries   # = l(theta)
            y[:, n - 2:n] = y[:, n - 2:n] @ g.T
        if i < spec.depth - 1:
            _swap(y, lay.edges)
    _hadamard(y, lay.edges, lay.edges + 1)
    if lay.left is ExtensionKind.EDGE:
        y[:, 0] *= SQRT2
    if lay.right is ExtensionKind.EDGE:
        y[:, n - 1] *= SQRT2


def _open_inverse_wires(y: np.ndarray, spec: TernaryCircuitSpec) -> None:
    lay = _layout(y.shape[1])
    n = lay.n
    if lay.left is ExtensionKind.EDGE:
        y[:, 0] /= SQRT2
    if lay.right is ExtensionKind.EDGE:
        y[:, n - 1] /= SQRT2
    _hadamard(y, lay.edges, lay.edges + 1)
    for i, theta in enumerate(spec.angles):
        _cells_inverse(y, theta, lay.offset, lay.cells)
        if lay.left is ExtensionKind.SITE:
            g = boundary_gate("inverse-left", theta).entries   # = (l^T)^-1
            y[:, 0:2] = y[:, 0:2] @ g.T
        if lay.right is ExtensionKind.SITE:
            g = boundary_gate("inverse-right", theta).entries  # = l^-1
            y[:, n - 2:n] = y[:, n - 2:n] @ g.T
        if i < spec.depth - 1:
            _swap(y, lay.edges)


def _periodic_wires(y: np.ndarray, spec: TernaryCircuitSpec) -> None:
    """In-place periodic analysis circuit; y.shape[1] must be 3m, m >= 2."""
    n = y.shape[1]
    m = n // 3
    edges = np.arange(m, dtype=np.intp) * 3 + 2
    nxt = (edges + 1) % n
    for i, theta in enumerate(reversed(spec.angles)):
        _cells_forward(y, theta, 0, m)
        if i < spec.depth - 1:
            tmp = y[:, edges].copy()
            y[:, edges] = y[:, nxt]
            y[:, nxt] = tmp
    _hadamard(y, edges, nxt)


def _channel_order(spec: TernaryCircuitSpec, lay: _Layout):
    """Wire index arrays in (sca, wav_plus, wav_minus) order."""
    if spec.cascade is Cascade.SITE_CENTERED:
        return lay.site_idx, lay.edge_sym_idx, lay.edge_anti_idx
    return lay.edge_sym_idx, lay.site_idx, lay.edge_anti_idx


# ---------------------------------------------------------------------------
# public single-level operations

def forward_periodic(signal, spec: TernaryCircuitSpec) -> Subbands1D:
    """Single-level transform on a ring; length must be a multiple of 3, >= 6.

    Output subbands hold cell centers (site channel), lower and upper
    Hadamard outputs (edge channels) mapped to (sca, wav+, wav-) according
    to the cascade.  The transform is orthogonal.
    """
    x = np.asarray(signal, dtype=np.float64)
    if x.ndim != 1:
        raise InvalidArgumentError("signal must be 1-D")
    n = x.size
    if n < 6 or n % 3 != 0:
        raise InvalidArgumentError(
            f"periodic transform needs length divisible by 3 and >= 6, got {n}")
    y = x[np.newaxis, :].copy()
    _periodic_wires(y, spec)
    m = n // 3
    site = y[0, np.arange(m) * 3 + 1]
    edge_sym = y[0, np.arange(m) * 3 + 2]
    edge_anti = y[0, np.arange(m) * 3]   # (3j+3) mod n, reindexed ascending
    if spec.cascade is Cascade.SITE_CENTERED:
        sca, wp = site, edge_sym
    else:
        sca, wp = edge_sym, site
    return Subbands1D(sca=sca, wav_plus=wp, wav_minus=edge_anti, plan=None)


def _check_plan(signal_len: int, spec: TernaryCircuitSpec, plan: LevelPlan) -> None:
    expected = plan_level(signal_len, spec.cascade)
    if plan != expected:
        raise InvalidArgumentError(
            f"plan {plan} does not match plan_level({signal_len}) = {expected}")


def forward_open(signal, spec: TernaryCircuitSpec, plan: LevelPlan) -> Subbands1D:
    """Single-level open-boundary transform.

    Produces exactly the unique coefficients of the symmetric-extension
    transform (see ``symmetric_extension_oracle``) without materializing the
    extension.
    """
    x = np.asarray(signal, dtype=np.float64)
    if x.ndim != 1:
        raise InvalidArgumentError("signal must be 1-D")
    _check_plan(x.size, spec, plan)
    y = x[np.newaxis, :].copy()
    _open_forward_wires(y, spec)
    lay = _layout(x.size)
    sca_idx, wp_idx, wm_idx = _channel_order(spec, lay)
    out = Subbands1D(sca=y[0, sca_idx], wav_plus=y[0, wp_idx],
                     wav_minus=y[0, wm_idx], plan=plan)
    out.validate()
    return out


def inverse_open(subbands: Subbands1D, spec: TernaryCircuitSpec):
    """Invert one open level; exact up to floating-point roundoff."""
    plan = subbands.plan
    if plan is None:
        raise InvalidArgumentError("subbands carry no plan (periodic data?)")
    subbands.validate()
    lay = _layout(plan.n)
    sca_idx, wp_idx, wm_idx = _channel_order(spec, lay)
    y = np.empty((1, plan.n), dtype=np.float64)
    y[0, sca_idx] = subbands.sca
    y[0, wp_idx] = subbands.wav_plus
    y[0, wm_idx] = subbands.wav_minus
    _open_inverse_wires(y, spec)
    return y[0]


def symmetric_extension_oracle(signal, spec: TernaryCircuitSpec,
                               plan: LevelPlan, return_trimmed: bool = False):
    """Reference transform: mirror-extend, run the bulk circuit, trim.

    The double mirror extension of an open signal is periodic, so the bulk
    circuit is applied on one period ring:

      Edge/Edge: period 2n, ring = signal + reversed(signal); mirror edges
        land on cell edges.
      Site/Site: period 2n-2 (boundary samples not repeated), ring rotated
        by one so mirror sites land on cell centers.
      Edge/Site: period 2n-1.

    Unique coefficients are read off the wires covering the original n
    samples (the left boundary edge output lives on the last ring wire).
    With ``return_trimmed`` the dropped anti-symmetric boundary
    coefficients b* are returned as well; they vanish identically.
    """
    x = np.asarray(signal, dtype=np.float64)
    if x.ndim != 1:
        raise InvalidArgumentError("signal must be 1-D")
    _check_plan(x.size, spec, plan)
    n = x.size
    mod = n % 3
    if mod == 0:
        ring = np.concatenate([x, x[::-1]])
        y = ring[np.newaxis, :].copy()
        _periodic_wires(y, spec)
        w = y[0, :n].copy()
        w[0] = y[0, 2 * n - 1]
        trimmed = np.array([y[0, 0], y[0, n]])
    elif mod == 1:
        period = np.concatenate([x, x[-2:0:-1]])
        ring = np.roll(period, 1)
        y = ring[np.newaxis, :].copy()
        _periodic_wires(y, spec)
        w = y[0, 1:n + 1].copy()
        trimmed = np.array([])
    else:
        ring = np.concatenate([x, x[-2::-1]])
        y = ring[np.newaxis, :].copy()
        _periodic_wires(y, spec)
        w = y[0, :n].copy()
        w[0] = y[0, 2 * n - 2]
        trimmed = np.array([y[0, 0]])
    lay = _layout(n)
    sca_idx, wp_idx, wm_idx = _channel_order(spec, lay)
    out = Subbands1D(sca=w[sca_idx], wav_plus=w[wp_idx],
                     wav_minus=w[wm_idx], plan=plan)
    out.validate()
    if return_trimmed:
        return out, trimmed
    return out


# ---------------------------------------------------------------------------
# multi-level

def forward_multi(signal, spec: TernaryCircuitSpec,
                  max_levels: int | None = None) -> list[Subbands1D]:
    """Recursively transform the scaling channel.

    Stops when the scaling channel drops below ``minimum_multi_length(spec)``
    or after ``max_levels`` levels.  Each entry keeps its own scaling band;
    only the deepest one is needed for inversion, the others are the inputs
    of the following level.
    """
    x = np.asarray(signal, dtype=np.float64)
    if x.ndim != 1:
        raise InvalidArgumentError("signal must be 1-D")
    min_n = minimum_multi_length(spec)
    if x.size < min_n:
        raise TooShortError(
            f"multi-level transform needs n >= {min_n}, got {x.size}")
    levels: list[Subbands1D] = []
    cur = x
    while cur.size >= min_n and (max_levels is None or len(levels) < max_levels):
        plan = plan_level(cur.size, spec.cascade)
        sb = forward_open(cur, spec, plan)
        levels.append(sb)
        cur = sb.sca
    return levels


def inverse_multi(pyramid: list[Subbands1D], spec: TernaryCircuitSpec):
    """Invert ``forward_multi`` level by level, coarsest first."""
    if not pyramid:
        raise InvalidArgumentError("empty pyramid")
    cur = np.asarray(pyramid[-1].sca, dtype=np.float64)
    for level in reversed(pyramid):
        if level.plan is None:
            raise InvalidArgumentError("pyramid level carries no plan")
        if cur.size != level.plan.n_sca:
            raise InvalidArgumentError(
                "scaling band length does not chain between levels")
        sb = Subbands1D(sca=cur, wav_plus=level.wav_plus,
                        wav_minus=level.wav_minus, plan=level.plan)
        cur = inverse_open(sb, spec)
    return cur
