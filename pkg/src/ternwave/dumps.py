"""Binary coefficient dump formats.

1-D ("TWV1" ternary / "CDF1" baseline) and 2-D ("TWV2" / "CDF2") share a
little-endian header:

    magic[4]  u8 cascade (0 site, 1 edge, 255 n/a)  u8 depth  u8 bands
    u32 level_count  ... format-specific plan fields ...  float64 payload

TWV1 stores each level's full (sca, wav+, wav-) triple as produced by
forward_multi; CDF1 stores per-level details plus the deepest approx, which
is exactly the Pyramid97 layout.  The 2-D formats record per-level row and
column plans followed by the packed coefficient plane.
"""

from __future__ import annotations

import struct

import numpy as np

from .common import DecodeError, InvalidArgumentError, Wavelet
from .cdf97 import Pyramid97
from .image2d import Pyramid2D, Split97
from .ternary1d import (
    Cascade,
    ExtensionKind,
    LevelPlan,
    Subbands1D,
    TYPE_I,
    TYPE_II,
    TernaryCircuitSpec,
)

_CASCADE_CODE = {Cascade.SITE_CENTERED: 0, Cascade.EDGE_CENTERED: 1}
_CASCADE_FROM = {0: Cascade.SITE_CENTERED, 1: Cascade.EDGE_CENTERED}
_EXT_CODE = {ExtensionKind.EDGE: 0, ExtensionKind.SITE: 1}
_EXT_FROM = {0: ExtensionKind.EDGE, 1: ExtensionKind.SITE}


def _write_f64(f, arr: np.ndarray) -> None:
    f.write(np.asarray(arr, dtype="<f8").tobytes())


def _read_f64(f, count: int, path: str) -> np.ndarray:
    raw = f.read(8 * count)
    if len(raw) != 8 * count:
        raise DecodeError(f"{path}: truncated payload")
    return np.frombuffer(raw, dtype="<f8").copy()


def dump_subbands(pyramid, path: str,
                  spec: TernaryCircuitSpec | None = None) -> None:
    """Write a 1-D decomposition (list of Subbands1D, or Pyramid97)."""
    if isinstance(pyramid, Pyramid97):
        with open(path, "wb") as f:
            f.write(b"CDF1")
            f.write(struct.pack("<BBBI", 255, 0, 2, pyramid.levels))
            # walk back from the deepest approx to recover per-level lengths
            cur_a = pyramid.approx.size
            lens = []
            for d in reversed(pyramid.details):
                lens.append((cur_a, d.size))
                cur_a = cur_a + d.size
            for na, nd in reversed(lens):
                f.write(struct.pack("<II", na, nd))
            for d in pyramid.details:
                _write_f64(f, d)
            _write_f64(f, pyramid.approx)
        return
    if spec is None:
        raise InvalidArgumentError("ternary dump needs the circuit spec")
    levels: list[Subbands1D] = list(pyramid)
    if not levels:
        raise InvalidArgumentError("refusing to dump an empty pyramid")
    with open(path, "wb") as f:
        f.write(b"TWV1")
        f.write(struct.pack("<BBBI", _CASCADE_CODE[spec.cascade],
                            spec.depth, 3, len(levels)))
        for sb in levels:
            f.write(struct.pack("<III", sb.sca.size, sb.wav_plus.size,
                                sb.wav_minus.size))
        for sb in levels:
            _write_f64(f, sb.sca)
            _write_f64(f, sb.wav_plus)
            _write_f64(f, sb.wav_minus)


def load_subbands(path: str):
    """Read a 1-D dump; returns (pyramid, metadata dict)."""
    with open(path, "rb") as f:
        magic = f.read(4)
        if magic not in (b"TWV1", b"CDF1"):
            raise DecodeError(f"{path}: bad magic {magic!r}")
        cascade_code, depth, bands, n_levels = struct.unpack("<BBBI", f.read(7))
        if magic == b"CDF1":
            if bands != 2:
                raise DecodeError(f"{path}: CDF1 must have 2 bands, got {bands}")
            lens = [struct.unpack("<II", f.read(8)) for _ in range(n_levels)]
            details = [_read_f64(f, nd, path) for _, nd in lens]
            approx = _read_f64(f, lens[-1][0] if lens else 0, path)
            meta = {"family": Wavelet.CDF97, "depth": None, "cascade": None}
            return Pyramid97(approx=approx, details=details), meta
        if bands != 3:
            raise DecodeError(f"{path}: TWV1 must have 3 bands, got {bands}")
        cascade = _CASCADE_FROM.get(cascade_code)
        if cascade is None:
            raise DecodeError(f"{path}: bad cascade code {cascade_code}")
        lens = [struct.unpack("<III", f.read(12)) for _ in range(n_levels)]
        from .ternary1d import plan_level  # local to avoid cycle at import
        levels = []
        for ns, np_, nm in lens:
            sca = _read_f64(f, ns, path)
            wp = _read_f64(f, np_, path)
            wm = _read_f64(f, nm, path)
            plan = plan_level(ns + np_ + nm, cascade)
            sb = Subbands1D(sca=sca, wav_plus=wp, wav_minus=wm, plan=plan)
            sb.validate()
            levels.append(sb)
        meta = {"family": Wavelet.TERN1 if cascade is Cascade.SITE_CENTERED
                else Wavelet.TERN2, "depth": depth, "cascade": cascade}
        return levels, meta


def dump_pyramid(pyramid: Pyramid2D, path: str) -> None:
    """Write a 2-D packed pyramid."""
    is_cdf = pyramid.wavelet is Wavelet.CDF97
    with open(path, "wb") as f:
        f.write(b"CDF2" if is_cdf else b"TWV2")
        if is_cdf:
            f.write(struct.pack("<BBBI", 255, 0, 2, pyramid.levels))
        else:
            spec = TYPE_I if pyramid.wavelet is Wavelet.TERN1 else TYPE_II
            f.write(struct.pack("<BBBI", _CASCADE_CODE[spec.cascade],
                                spec.depth, 3, pyramid.levels))
        f.write(struct.pack("<II", pyramid.width, pyramid.height))
        for plans in (pyramid.row_plans, pyramid.col_plans):
            for plan in plans:
                if isinstance(plan, LevelPlan):
                    f.write(struct.pack(
                        "<IBBIII", plan.n, _EXT_CODE[plan.left],
                        _EXT_CODE[plan.right], plan.n_sca,
                        plan.n_wav_plus, plan.n_wav_minus))
                else:
                    f.write(struct.pack("<III", plan.n, plan.n_approx,
                                        plan.n_detail))
        _write_f64(f, pyramid.packed.ravel())


def load_pyramid(path: str) -> Pyramid2D:
    with open(path, "rb") as f:
        magic = f.read(4)
        if magic not in (b"TWV2", b"CDF2"):
            raise DecodeError(f"{path}: bad magic {magic!r}")
        cascade_code, depth, bands, n_levels = struct.unpack("<BBBI", f.read(7))
        width, height = struct.unpack("<II", f.read(8))
        if magic == b"CDF2":
            wavelet = Wavelet.CDF97

            def read_plan():
                n, na, nd = struct.unpack("<III", f.read(12))
                if na + nd != n:
                    raise DecodeError(f"{path}: inconsistent CDF plan")
                return Split97(n, na, nd)
        else:
            cascade = _CASCADE_FROM.get(cascade_code)
            if cascade is None:
                raise DecodeError(f"{path}: bad cascade code {cascade_code}")
            wavelet = (Wavelet.TERN1 if cascade is Cascade.SITE_CENTERED
                       else Wavelet.TERN2)

            def read_plan():
                n, left, right, ns, np_, nm = struct.unpack(
                    "<IBBIII", f.read(18))
                if ns + np_ + nm != n:
                    raise DecodeError(f"{path}: inconsistent ternary plan")
                return LevelPlan(n=n, left=_EXT_FROM[left],
                                 right=_EXT_FROM[right], n_sca=ns,
                                 n_wav_plus=np_, n_wav_minus=nm)
        row_plans = tuple(read_plan() for _ in range(n_levels))
        col_plans = tuple(read_plan() for _ in range(n_levels))
        packed = _read_f64(f, width * height, path).reshape(height, width)
        return Pyramid2D(wavelet=wavelet, levels=n_levels, width=width,
                         height=height, packed=packed, row_plans=row_plans,
                         col_plans=col_plans)
