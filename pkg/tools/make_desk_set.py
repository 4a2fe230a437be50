#!/usr/bin/env python3
"""Regenerate the bundled desk-scale benchmark images.

The five P6 pixmaps under data/desk/ are procedurally generated "photo-like"
scenes: smooth gradients, fractal value-noise texture, and hard occlusion
edges, i.e. the statistics wavelet coders care about.  Everything is seeded,
so the shipped bytes are reproducible with this script.  Sizes mix all three
length-mod-3 classes on both axes and keep min(width, height) >= 176 so the
5-scale MS-SSIM pyramid never degrades.

Usage: python3 tools/make_desk_set.py [outdir]   (default data/desk)
"""

import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))
from ternwave.pixmaps import write_pnm  # noqa: E402


def value_noise(rng, h, w, cell):
    """Bilinear value noise with smoothstep easing."""
    gh, gw = h // cell + 2, w // cell + 2
    g = rng.random((gh, gw))
    ys = np.arange(h) / cell
    xs = np.arange(w) / cell
    y0 = ys.astype(int)
    x0 = xs.astype(int)
    fy = (ys - y0)[:, None]
    fx = (xs - x0)[None, :]
    sy = fy * fy * (3 - 2 * fy)
    sx = fx * fx * (3 - 2 * fx)
    a = g[np.ix_(y0, x0)]
    b = g[np.ix_(y0, x0 + 1)]
    c = g[np.ix_(y0 + 1, x0)]
    d = g[np.ix_(y0 + 1, x0 + 1)]
    return (a * (1 - sy) * (1 - sx) + b * (1 - sy) * sx
            + c * sy * (1 - sx) + d * sy * sx)


def fbm(rng, h, w, cells=(64, 32, 16, 8, 4), gain=0.55):
    out = np.zeros((h, w))
    amp, total = 1.0, 0.0
    for cell in cells:
        out += amp * value_noise(rng, h, w, cell)
        total += amp
        amp *= gain
    return out / total


def _stack(r, g, b):
    return np.clip(np.stack([r, g, b], axis=-1), 0.0, 1.0)


def scene_ridge(rng, h, w):
    """Hazy hills under a clouded sky."""
    yy = np.linspace(0, 1, h)[:, None] * np.ones((1, w))
    clouds = 0.10 * fbm(rng, h, w, cells=(36, 18, 9, 4)) * (1 - yy)
    sky_r = 0.55 + 0.35 * (1 - yy) + clouds
    sky_g = 0.60 + 0.25 * (1 - yy) + clouds
    sky_b = 0.75 + 0.20 * (1 - yy) + 0.6 * clouds
    r, g, b = sky_r.copy(), sky_g.copy(), sky_b.copy()
    for k, (level, tone) in enumerate(((0.45, 0.55), (0.62, 0.38), (0.80, 0.22))):
        ridge = level + 0.12 * fbm(rng, 1, w, cells=(48, 24, 12))[0]
        mask = yy > ridge[None, :]
        haze = tone + 0.25 * (2 - k) / 3
        tex = 0.08 * fbm(rng, h, w, cells=(16, 8, 4))
        r[mask] = (haze * 0.9 + tex)[mask]
        g[mask] = (haze + tex)[mask]
        b[mask] = (haze * 1.08 + tex * 0.7)[mask]
    return _stack(r, g, b)


def scene_dunes(rng, h, w):
    """Warm banded sand with grain."""
    base = fbm(rng, h, w, cells=(96, 48, 24))
    bands = 0.5 + 0.5 * np.sin(10.0 * base + 3.0 * np.linspace(0, 1, w)[None, :])
    grain = fbm(rng, h, w, cells=(6, 3))
    v = 0.45 + 0.35 * bands + 0.12 * grain
    return _stack(v * 1.05, v * 0.82, v * 0.55)


def scene_shore(rng, h, w):
    """Sea stripes, sparkle, and a sand wedge."""
    yy = np.linspace(0, 1, h)[:, None] * np.ones((1, w))
    stripes = 0.5 + 0.5 * np.sin(34.0 * yy + 4.0 * fbm(rng, h, w, cells=(40, 20)))
    r = 0.10 + 0.08 * stripes
    g = 0.32 + 0.18 * stripes
    b = 0.45 + 0.30 * stripes * (1 - 0.4 * yy)
    sparkle = fbm(rng, h, w, cells=(4, 2)) > 0.72
    r = np.where(sparkle, 0.95, r)
    g = np.where(sparkle, 0.95, g)
    b = np.where(sparkle, 0.90, b)
    wedge = yy > 0.75 + 0.06 * fbm(rng, 1, w, cells=(52, 13))[0][None, :]
    sand = 0.55 + 0.15 * fbm(rng, h, w, cells=(10, 5))
    r = np.where(wedge, sand * 1.1, r)
    g = np.where(wedge, sand * 0.95, g)
    b = np.where(wedge, sand * 0.7, b)
    return _stack(r, g, b)


def scene_canopy(rng, h, w):
    """Leafy blobs with trunk streaks and light shafts."""
    blobs = fbm(rng, h, w, cells=(28, 14, 7))
    g = 0.25 + 0.55 * blobs
    r = 0.12 + 0.30 * blobs ** 2
    b = 0.10 + 0.22 * blobs ** 1.5
    trunks = value_noise(rng, 1, w, 9)[0]
    trunk_mask = (trunks > 0.8)[None, :] & (np.linspace(0, 1, h)[:, None] > 0.35)
    r = np.where(trunk_mask, 0.30, r)
    g = np.where(trunk_mask, 0.22, g)
    b = np.where(trunk_mask, 0.16, b)
    shafts = fbm(rng, h, w, cells=(60, 30)) > 0.62
    r = np.where(shafts, r * 0.6 + 0.38, r)
    g = np.where(shafts, g * 0.6 + 0.38, g)
    b = np.where(shafts, b * 0.6 + 0.30, b)
    return _stack(r, g, b)


def scene_blocks(rng, h, w):
    """Dusk skyline: rectangles, window speckle, haze gradient."""
    yy = np.linspace(0, 1, h)[:, None] * np.ones((1, w))
    r = 0.70 - 0.45 * yy
    g = 0.45 - 0.25 * yy
    b = 0.55 + 0.05 * yy
    x = 0
    while x < w:
        bw = int(rng.integers(14, 34))
        top = float(rng.uniform(0.30, 0.65))
        tone = float(rng.uniform(0.08, 0.22))
        sl = np.s_[:, x:min(x + bw, w)]
        mask = yy[sl] > top
        for ch in (r, g, b):
            ch[sl] = np.where(mask, tone, ch[sl])
        win = (rng.random((h, min(x + bw, w) - x)) > 0.965) & mask
        r[sl] = np.where(win, 0.95, r[sl])
        g[sl] = np.where(win, 0.85, g[sl])
        b[sl] = np.where(win, 0.55, b[sl])
        x += bw + int(rng.integers(2, 6))
    haze = 0.05 * fbm(rng, h, w, cells=(50, 25))
    return _stack(r + haze, g + haze, b + haze)


# (name, scene, width, height, seed): all three mod-3 classes on both axes
MANIFEST = (
    ("desk_01_ridge", scene_ridge, 264, 176, 101),
    ("desk_02_dunes", scene_dunes, 265, 177, 102),
    ("desk_03_shore", scene_shore, 266, 178, 103),
    ("desk_04_canopy", scene_canopy, 268, 180, 104),
    ("desk_05_blocks", scene_blocks, 256, 176, 105),
)


def main() -> int:
    outdir = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(__file__), "..", "data", "desk")
    os.makedirs(outdir, exist_ok=True)
    for name, scene, w, h, seed in MANIFEST:
        rng = np.random.default_rng(seed)
        rgb = scene(rng, h, w)
        # sensor grain: keeps the spectra photo-like instead of synthetically
        # smooth, which would skew the codec comparison
        rgb = np.clip(rgb + rng.normal(0.0, 2.5 / 255.0, rgb.shape), 0.0, 1.0)
        path = os.path.join(outdir, f"{name}.ppm")
        write_pnm(path, np.rint(rgb * 255.0), maxval=255)
        print(f"{path}: {w}x{h}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
