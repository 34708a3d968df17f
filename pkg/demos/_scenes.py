"""Synthetic test scene shared by the demo scripts."""

import numpy as np


def make_scene(h, w, seed=3):
    """RGB scene with a gradient, blobs, a hard edge, and fine texture."""
    yy, xx = np.mgrid[0:h, 0:w].astype(float)
    yy /= h
    xx /= w
    s = 0.45 + 0.25 * xx + 0.10 * np.sin(2 * np.pi * 3 * yy)
    rng = np.random.default_rng(seed)
    for _ in range(8):
        cy, cx = rng.uniform(0, 1, 2)
        rad, amp = rng.uniform(0.04, 0.25), rng.uniform(-0.3, 0.3)
        s += amp * np.exp(-(((yy - cy) ** 2 + (xx - cx) ** 2) / rad**2))
    s += 0.15 * ((xx > 0.55) & (xx < 0.75) & (yy > 0.2) & (yy < 0.8))
    s += 0.03 * np.sin(2 * np.pi * 14 * xx) * np.sin(2 * np.pi * 11 * yy)
    s = np.clip(s, 0.03, 0.97)
    t = 0.5 + 0.25 * np.sin(2 * np.pi * 2.3 * xx + 0.9)
    u = 0.5 + 0.25 * np.cos(2 * np.pi * 1.7 * yy + 0.2)
    rgb = np.stack(
        [s, np.clip(s * (0.65 + 0.45 * t), 0, 1), np.clip(s * (0.6 + 0.5 * u), 0, 1)],
        axis=-1,
    )
    return np.clip(rgb, 0, 1)
