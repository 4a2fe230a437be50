"""Minimal binary PNM (P5/P6) reader/writer, optional PNG via Pillow.

Only the binary variants are supported; 16-bit samples are big-endian per
the Netpbm convention.  Anything malformed raises DecodeError with the
offending path in the message.
"""

from __future__ import annotations

import io
import os

import numpy as np

from .common import DecodeError, InvalidArgumentError


def _read_token(f: io.BufferedReader, path: str) -> bytes:
    tok = b""
    while True:
        ch = f.read(1)
        if not ch:
            raise DecodeError(f"{path}: truncated header")
        if ch == b"#":
            while ch not in (b"\n", b""):
                ch = f.read(1)
            continue
        if ch.isspace():
            if tok:
                return tok
            continue
        tok += ch


def read_pnm(path: str) -> tuple[np.ndarray, int]:
    """Read a binary pixmap; returns (array, maxval).

    P5 gives (H, W), P6 gives (H, W, 3); dtype is uint8 or uint16.
    """
    with open(path, "rb") as f:
        magic = f.read(2)
        if magic not in (b"P5", b"P6"):
            raise DecodeError(f"{path}: not a binary PNM (magic {magic!r})")
        try:
            width = int(_read_token(f, path))
            height = int(_read_token(f, path))
            maxval = int(_read_token(f, path))
        except ValueError as exc:
            raise DecodeError(f"{path}: bad header field: {exc}") from exc
        if width <= 0 or height <= 0 or not 0 < maxval < 65536:
            raise DecodeError(f"{path}: bad dimensions/maxval "
                              f"{width}x{height}/{maxval}")
        channels = 3 if magic == b"P6" else 1
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        count = width * height * channels
        raw = f.read(count * dtype.itemsize)
        if len(raw) != count * dtype.itemsize:
            raise DecodeError(f"{path}: truncated raster "
                              f"({len(raw)} of {count * dtype.itemsize} bytes)")
        arr = np.frombuffer(raw, dtype=dtype).reshape(
            (height, width, 3) if channels == 3 else (height, width))
        if dtype.itemsize == 2:
            arr = arr.astype(np.uint16)
        return arr.copy(), maxval


def write_pnm(path: str, array: np.ndarray, maxval: int = 255) -> None:
    arr = np.asarray(array)
    if arr.ndim == 3 and arr.shape[2] == 3:
        magic = b"P6"
    elif arr.ndim == 2:
        magic = b"P5"
    else:
        raise InvalidArgumentError(f"cannot write array of shape {arr.shape}")
    if not 0 < maxval < 65536:
        raise InvalidArgumentError(f"bad maxval {maxval}")
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    data = np.clip(np.rint(arr), 0, maxval).astype(dtype)
    h, w = arr.shape[:2]
    with open(path, "wb") as f:
        f.write(magic + b"\n%d %d\n%d\n" % (w, h, maxval))
        f.write(data.tobytes())


def read_image(path: str) -> tuple[np.ndarray, int]:
    """Read PNM or (if Pillow is installed) PNG; returns (array, bit depth)."""
    ext = os.path.splitext(path)[1].lower()
    if ext in (".pgm", ".ppm", ".pnm"):
        arr, maxval = read_pnm(path)
        depth = 16 if maxval > 255 else 8
        # re-scale non power-of-two maxvals onto the full grid
        full = (1 << depth) - 1
        if maxval != full:
            arr = np.rint(arr.astype(np.float64) * (full / maxval)).astype(
                np.uint16 if depth == 16 else np.uint8)
        return arr, depth
    if ext == ".png":
        try:
            from PIL import Image
        except ImportError as exc:
            raise DecodeError(
                f"{path}: PNG support needs the optional Pillow dependency "
                "(pip install ternwave[png])") from exc
        try:
            with Image.open(path) as im:
                mode = im.mode
                if mode not in ("L", "I;16", "RGB"):
                    im = im.convert("RGB")
                    mode = "RGB"
                arr = np.asarray(im)
        except Exception as exc:
            raise DecodeError(f"{path}: PNG decode failed: {exc}") from exc
        depth = 16 if arr.dtype == np.uint16 else 8
        return arr.copy(), depth
    raise DecodeError(f"{path}: unsupported image extension {ext!r}")
