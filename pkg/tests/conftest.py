"""Shared synthetic scenes and exposure brackets for the test suite.

All randomness is seeded so every test is reproducible.
"""

import numpy as np
import pytest


def make_scene(h, w, seed=3):
    """Piecewise-smooth RGB scene: gradient, blobs, a step edge, fine texture.

    Values stay inside (0, 1) so linear exposure scaling below 1 never clips.
    """
    yy, xx = np.mgrid[0:h, 0:w].astype(float)
    yy /= h
    xx /= w
    s = 0.45 + 0.25 * xx + 0.10 * np.sin(2 * np.pi * 3 * yy)
    rng = np.random.default_rng(seed)
    for _ in range(8):
        cy, cx = rng.uniform(0, 1, 2)
        rad = rng.uniform(0.04, 0.25)
        amp = rng.uniform(-0.3, 0.3)
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


def make_bracket(scene, factors=(0.35, 1.0, 2.2)):
    """Exposure bracket: linear scalings of the scene, clipped at white."""
    return [np.clip(scene * f, 0.0, 1.0) for f in factors]


def make_flat_mean_scene(h, w):
    """RGB scene whose every 8x8 window has mean exactly 0.5 per channel.

    Built from cosines whose period divides 8, so any aligned-or-not window
    of 8 samples sums to zero.  Useful where patch-mean-dependent weights
    must not vary with position.
    """
    y, x = np.mgrid[0:h, 0:w].astype(float)
    r = 0.5 + 0.14 * np.cos(np.pi * x / 2) + 0.06 * np.cos(np.pi * y / 4 + 0.4) * np.cos(np.pi * x / 4)
    g = 0.5 + 0.12 * np.cos(np.pi * y / 2 + 0.7) + 0.08 * np.cos(np.pi * x / 4) * np.cos(np.pi * y / 2)
    b = 0.5 + 0.10 * np.cos(np.pi * (x + y) / 4) + 0.05 * np.cos(np.pi * x / 2 + 1.1)
    return np.stack([r, g, b], axis=-1)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
