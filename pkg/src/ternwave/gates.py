"""Elementary orthogonal gates of the ternary circuit construction.

Every transform in :mod:`ternwave.ternary1d` is a composition of four gate
shapes: a one-parameter 3x3 rotation acting on a cell of three wires, a 2x2
wire crossing, a 2x2 Hadamard pair, and 2x2 boundary gates that realize the
action of a rotation cell on mirror-symmetric data.  Gates are built here as
plain dense matrices; the transform modules may fuse them into vectorized
kernels, but these objects stay the single source of truth the tests check
against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .common import InvalidArgumentError

SQRT2 = math.sqrt(2.0)

#: Wire crossing: swaps the two values on a cell edge.
U_P = np.array([[0.0, 1.0], [1.0, 0.0]])

#: Hadamard pair: (a, b) -> ((a + b)/sqrt2, (a - b)/sqrt2).
U_H = np.array([[1.0, 1.0], [1.0, -1.0]]) / SQRT2

BOUNDARY_KINDS = ("left", "right", "inverse-left", "inverse-right")


@dataclass(frozen=True, eq=False)
class RotationGate3:
    """3x3 rotation cell, orthogonal and reflection symmetric."""

    theta: float
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.entries.setflags(write=False)


@dataclass(frozen=True, eq=False)
class Gate2:
    """2x2 gate: crossing, Hadamard pair, or a boundary variant."""

    kind: str
    theta: float | None
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.entries.setflags(write=False)


def ternary_gate(theta: float) -> RotationGate3:
    """Build the one-parameter 3x3 rotation cell.

        v(theta) = 1/2 * [[c+1,  sqrt2 s,  c-1],
                          [-sqrt2 s,  2c,  -sqrt2 s],
                          [c-1,  sqrt2 s,  c+1]]

    with c = cos(theta), s = sin(theta).  Orthogonal for every theta and
    invariant under simultaneous reversal of rows and columns.
    """
    if not math.isfinite(theta):
        raise InvalidArgumentError(f"theta must be finite, got {theta!r}")
    c, s = math.cos(theta), math.sin(theta)
    m = 0.5 * np.array([
        [c + 1.0, SQRT2 * s, c - 1.0],
        [-SQRT2 * s, 2.0 * c, -SQRT2 * s],
        [c - 1.0, SQRT2 * s, c + 1.0],
    ])
    return RotationGate3(theta=theta, entries=m)


def _l_matrix(theta: float) -> np.ndarray:
    # l(theta) = [[c, -s/sqrt2], [sqrt2 s, c]]; satisfies l~^T l = I with
    # l~ = (l^T)^-1 = [[c, -sqrt2 s], [s/sqrt2, c]].
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s / SQRT2], [SQRT2 * s, c]])


def _l_tilde_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -SQRT2 * s], [s / SQRT2, c]])


def boundary_gate(kind: str, theta: float) -> Gate2:
    """Build a 2x2 boundary gate.

    kind "left" returns l(theta), "right" its transpose, "inverse-left" the
    inverse-circuit gate l~(theta) = (l(theta)^T)^-1, and "inverse-right" the
    transpose of that.  Which object acts at which physical end of an open
    signal (and in what wire order) is wired up in :mod:`ternwave.ternary1d`,
    where the symmetric-extension oracle pins the convention.
    """
    if kind not in BOUNDARY_KINDS:
        raise InvalidArgumentError(f"unknown boundary gate kind {kind!r}")
    if not math.isfinite(theta):
        raise InvalidArgumentError(f"theta must be finite, got {theta!r}")
    if kind == "left":
        m = _l_matrix(theta)
    elif kind == "right":
        m = _l_matrix(theta).T
    elif kind == "inverse-left":
        m = _l_tilde_matrix(theta)
    else:
        m = _l_tilde_matrix(theta).T
    return Gate2(kind=kind, theta=theta, entries=m)


def fixed_gates() -> tuple[Gate2, Gate2]:
    """Return the two parameter-free gates (u_P crossing, u_H Hadamard)."""
    return (
        Gate2(kind="permutation", theta=None, entries=U_P.copy()),
        Gate2(kind="hadamard", theta=None, entries=U_H.copy()),
    )
