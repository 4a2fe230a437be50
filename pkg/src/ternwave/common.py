"""Shared enums and exception types used across ternwave modules."""

from __future__ import annotations

import enum


class Wavelet(str, enum.Enum):
    """Wavelet families selectable throughout the library and CLI."""

    TERN1 = "tern1"   # depth-6 ternary circuit, site-centered cascade
    TERN2 = "tern2"   # depth-6 ternary circuit, edge-centered cascade
    CDF97 = "cdf97"   # CDF-9/7 lifting baseline

    def __str__(self) -> str:  # argparse-friendly
        return self.value


class TernwaveError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(TernwaveError, ValueError):
    """A caller-supplied argument violates a precondition."""


class TooShortError(InvalidArgumentError):
    """Signal or plane is below the minimum transformable size."""


class DecodeError(TernwaveError):
    """An input image file could not be decoded."""


class UnattainableQualityError(TernwaveError):
    """Quality target cannot be met even with every coefficient kept."""


class ConvergenceFailure(TernwaveError):
    """Angle solver hit its iteration cap before reaching tolerance."""

    def __init__(self, message: str, angles, max_residual: float):
        super().__init__(message)
        self.angles = angles
        self.max_residual = max_residual
