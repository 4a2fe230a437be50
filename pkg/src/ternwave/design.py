"""Sequence extraction, moment constraints, angle solving, and cascade plots.

The analysis sequences of a depth-z circuit live on 6z-3 sites (h+, centered
on a lattice site) and 6z sites (g+/g-, centered on a lattice edge).  They
are read off the periodic circuit by impulse probing on a ring large enough
that the supports cannot wrap.

Moments use symmetry-centered coordinates r: integers for site-centered
sequences, half-integers for edge-centered ones.  The high-frequency sign
(-1)^r on half-integer r alternates with the tap at r = +1/2 taken positive.
Any consistent choice gives the same vanishing/non-vanishing pattern, which
is what the constraints express.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .common import ConvergenceFailure, InvalidArgumentError
from .ternary1d import Cascade, TernaryCircuitSpec, _periodic_wires

SQRT3 = math.sqrt(3.0)

_CHANNEL_ALIASES = {
    "h_plus": "h_plus", "h+": "h_plus",
    "g_plus": "g_plus", "g+": "g_plus",
    "g_minus": "g_minus", "g-": "g_minus",
}


@dataclass(frozen=True)
class CenteredSequence:
    """Real sequence with coordinates centered on its symmetry point."""

    values: np.ndarray
    r: np.ndarray          # integer (site) or half-integer (edge) coordinates
    centering: str         # "site" or "edge"


@dataclass(frozen=True)
class SequenceSet:
    """The three analysis sequences of one circuit family."""

    depth: int
    h_plus: CenteredSequence
    g_plus: CenteredSequence
    g_minus: CenteredSequence

    def sequence(self, name: str) -> CenteredSequence:
        key = _CHANNEL_ALIASES.get(name)
        if key is None:
            raise InvalidArgumentError(f"unknown sequence {name!r}")
        return getattr(self, key)


@dataclass(frozen=True)
class MomentConstraint:
    sequence: str          # "h_plus" | "g_plus" | "g_minus"
    alpha: int
    highfreq: bool

    def label(self) -> str:
        kind = "high" if self.highfreq else "low"
        return f"{self.sequence}:{kind}:a={self.alpha}"


@dataclass(frozen=True)
class MomentConstraintSet:
    constraints: tuple[MomentConstraint, ...]

    def __post_init__(self):
        if not self.constraints:
            raise InvalidArgumentError("constraint set must be non-empty")
        ordered = tuple(sorted(
            self.constraints,
            key=lambda c: (c.sequence, c.highfreq, c.alpha)))
        object.__setattr__(self, "constraints", ordered)


def default_constraints(cascade: Cascade,
                        alphas: tuple[int, ...] = (0, 1, 2)) -> MomentConstraintSet:
    """The moment pattern each family is designed to satisfy.

    Site-centered cascade: both wavelet channels (g+, g-) get low-frequency
    vanishing moments, the scaling channel (h+) and symmetric wavelet (g+)
    get high-frequency ones.  Edge-centered cascade: same with the roles of
    h+ and g+ interchanged.
    """
    if cascade is Cascade.SITE_CENTERED:
        low, high = ("g_plus", "g_minus"), ("h_plus", "g_plus")
    else:
        low, high = ("h_plus", "g_minus"), ("g_plus", "h_plus")
    cons = [MomentConstraint(s, a, False) for s in low for a in alphas]
    cons += [MomentConstraint(s, a, True) for s in high for a in alphas]
    return MomentConstraintSet(tuple(cons))


def extract_sequences(spec: TernaryCircuitSpec) -> SequenceSet:
    """Probe the periodic circuit with impulses and slice out the sequences.

    Uses a ring of 12z sites; supports are 6z-3 and 6z, so a centered window
    never wraps.  The slices have the stated widths even when outer taps are
    numerically zero (some families do not exhaust the support cone).
    """
    z = spec.depth
    n = 12 * z
    y = np.eye(n)
    _periodic_wires(y, spec)
    # column w of y is now the analysis sequence of output wire w
    j0 = (n // 3) // 2
    center_site = 3 * j0 + 1
    h_lo = center_site - (3 * z - 2)
    h = y[h_lo:h_lo + (6 * z - 3), center_site].copy()
    e_lo = 3 * j0 + 2 - (3 * z - 1)
    gp = y[e_lo:e_lo + 6 * z, 3 * j0 + 2].copy()
    gm = y[e_lo:e_lo + 6 * z, 3 * j0 + 3].copy()
    r_site = np.arange(6 * z - 3, dtype=np.float64) - (3 * z - 2)
    r_edge = np.arange(6 * z, dtype=np.float64) - (3 * z - 1) - 0.5
    return SequenceSet(
        depth=z,
        h_plus=CenteredSequence(h, r_site, "site"),
        g_plus=CenteredSequence(gp, r_edge, "edge"),
        g_minus=CenteredSequence(gm, r_edge, "edge"),
    )


def moment(seq: CenteredSequence, alpha: int, highfreq: bool = False) -> float:
    """Sum r^alpha s_r, with an extra (-1)^r factor in high-frequency mode."""
    if alpha < 0:
        raise InvalidArgumentError("alpha must be a non-negative integer")
    w = seq.r ** alpha if alpha > 0 else np.ones_like(seq.r)
    if highfreq:
        if seq.centering == "site":
            k = np.rint(seq.r).astype(np.int64)
        else:
            k = np.rint(seq.r - 0.5).astype(np.int64)
        sign = np.where(k % 2 == 0, 1.0, -1.0)
        w = w * sign
    return float(np.sum(w * seq.values))


def is_trivial_constraint(con: MomentConstraint, cascade=None) -> bool:
    """True when the moment vanishes identically by symmetry.

    h+ is site-symmetric, g+ edge-symmetric, g- edge-anti-symmetric.  The
    summand's parity under r -> -r decides: low-frequency sums (and the
    site-centered high-frequency ones, where (-1)^r is even) vanish when
    alpha's parity differs from the sequence's; edge-centered high-frequency
    sums flip because (-1)^r is odd on the half-integer lattice.
    """
    antisym = con.sequence == "g_minus"
    odd_alpha = con.alpha % 2 == 1
    edge = con.sequence in ("g_plus", "g_minus")
    sign_odd = con.highfreq and edge
    # summand odd overall <=> vanishes
    return (int(odd_alpha) + int(antisym) + int(sign_odd)) % 2 == 1


@dataclass
class ResidualEntry:
    constraint: MomentConstraint
    value: float
    trivial: bool


@dataclass
class ResidualReport:
    entries: list[ResidualEntry]
    max_residual: float

    def max_designed_residual(self) -> float:
        vals = [abs(e.value) for e in self.entries if not e.trivial]
        return max(vals, default=0.0)


def verify_angles(spec: TernaryCircuitSpec,
                  constraints: MomentConstraintSet | None = None) -> ResidualReport:
    """Evaluate every constraint residual for the given circuit."""
    if constraints is None:
        constraints = default_constraints(spec.cascade)
    seqs = extract_sequences(spec)
    entries = []
    for con in constraints.constraints:
        val = moment(seqs.sequence(con.sequence), con.alpha, con.highfreq)
        entries.append(ResidualEntry(con, val, is_trivial_constraint(con)))
    max_res = max((abs(e.value) for e in entries), default=0.0)
    return ResidualReport(entries=entries, max_residual=max_res)


@dataclass
class SolveResult:
    angles: tuple[float, ...]
    residuals: list[float]
    max_residual: float
    converged: bool
    iterations: int


def _residual_vector(angles: np.ndarray, depth: int,
                     cons: list[MomentConstraint]) -> np.ndarray:
    spec = TernaryCircuitSpec(depth=depth, angles=tuple(angles),
                              cascade=Cascade.SITE_CENTERED)
    seqs = extract_sequences(spec)
    return np.array([moment(seqs.sequence(c.sequence), c.alpha, c.highfreq)
                     for c in cons])


def solve_angles(depth: int, constraints: MomentConstraintSet,
                 initial_angles, tol: float = 1e-10,
                 max_iterations: int = 200) -> SolveResult:
    """Damped least-squares solve for row angles meeting the constraints.

    Symmetry-trivial constraints are dropped up front; the solver needs at
    most ``depth`` independent constraints left over.  Success means the
    max residual drops below ``tol``; solutions are not unique and no
    particular branch is preferred.  On a cap hit a ConvergenceFailure
    carrying the best angles/residual is raised.
    """
    theta = np.asarray(initial_angles, dtype=np.float64).copy()
    if theta.size != depth:
        raise InvalidArgumentError(f"need {depth} initial angles, got {theta.size}")
    live = [c for c in constraints.constraints if not is_trivial_constraint(c)]
    if len(live) > depth:
        raise InvalidArgumentError(
            f"{len(live)} non-trivial constraints exceed depth {depth}")

    def full_result(th, it, ok):
        res = _residual_vector(th, depth, list(constraints.constraints))
        return SolveResult(angles=tuple(th), residuals=list(res),
                           max_residual=float(np.max(np.abs(res))) if res.size else 0.0,
                           converged=ok, iterations=it)

    if not live:
        return full_result(theta, 0, True)
    r = _residual_vector(theta, depth, live)
    if np.max(np.abs(r)) < tol:
        return full_result(theta, 0, True)

    lam = 1e-3
    step = 1e-7
    for it in range(1, max_iterations + 1):
        jac = np.empty((len(live), depth))
        for j in range(depth):
            tp, tm = theta.copy(), theta.copy()
            tp[j] += step
            tm[j] -= step
            jac[:, j] = (_residual_vector(tp, depth, live) -
                         _residual_vector(tm, depth, live)) / (2 * step)
        jtj = jac.T @ jac
        jtr = jac.T @ r
        improved = False
        for _ in range(25):
            try:
                delta = np.linalg.solve(jtj + lam * np.eye(depth), -jtr)
            except np.linalg.LinAlgError:
                lam *= 10
                continue
            trial = theta + delta
            r_trial = _residual_vector(trial, depth, live)
            if np.max(np.abs(r_trial)) < np.max(np.abs(r)):
                theta, r = trial, r_trial
                lam = max(lam * 0.3, 1e-14)
                improved = True
                break
            lam *= 10
        if np.max(np.abs(r)) < tol:
            return full_result(theta, it, True)
        if not improved:
            break
    best = float(np.max(np.abs(r)))
    raise ConvergenceFailure(
        f"angle solve stalled at residual {best:.3e}", tuple(theta), best)


def render_function(spec: TernaryCircuitSpec, channel: str,
                    iterations: int) -> tuple[np.ndarray, np.ndarray]:
    """Cascade-algorithm samples of a channel's continuum function.

    Iteration 1 returns the raw sequence on its own lattice.  Every further
    iteration refines through the scaling channel of the cascade, tripling
    the sample density: f_(k+1)(x) = sqrt3 * sum_r s_r f_k(3x - r), with the
    channel's own taps applied at the top.  Returns (x, values) plot data.

    Coordinates are handled on a doubled-integer grid so half-integer edge
    offsets stay exact.
    """
    if iterations < 1:
        raise InvalidArgumentError("iterations must be >= 1")
    seqs = extract_sequences(spec)
    chan = seqs.sequence(channel)
    if spec.cascade is Cascade.SITE_CENTERED:
        scal = seqs.h_plus
    else:
        scal = seqs.g_plus
    if iterations == 1:
        return chan.r.copy(), chan.values.copy()
    # Samples live at x = (a + 2i) / (2q): doubled coordinates keep the
    # half-integer edge lattice exact, sample spacing is 2 doubled units.
    values = scal.values.astype(np.float64)
    a = int(round(2 * scal.r[0]))
    q = 1
    for step_i in range(iterations - 1):
        taps = chan if step_i == iterations - 2 else scal
        r2 = np.rint(2 * taps.r).astype(np.int64)
        up = np.zeros((len(r2) - 1) * q + 1)
        up[::q] = taps.values
        values = SQRT3 * np.convolve(up, values)
        a += int(r2[0]) * q
        q *= 3
    x = (a + 2.0 * np.arange(values.size)) / (2.0 * q)
    return x, values
