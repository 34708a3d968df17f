"""PNG input/output, noise simulation, and the PSNR metric.

Pixel values live in [0, 1] in memory; files are 8- or 16-bit PNG.  OpenCV
does the codec work because it round-trips 16-bit RGB files losslessly.
"""

import math

import cv2
import numpy as np

from .image import validate_image

__all__ = ["load_png", "save_png", "add_gaussian_noise", "psnr"]

_SCALE = {np.dtype(np.uint8): 255.0, np.dtype(np.uint16): 65535.0}


def load_png(path) -> np.ndarray:
    """Load an 8- or 16-bit RGB or grayscale PNG as float64 (H, W, C) in [0, 1].

    Grayscale files load with one channel.
    """
    raw = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise ValueError(f"cannot read image file: {path}")
    if raw.dtype not in _SCALE:
        raise ValueError(f"unsupported sample type {raw.dtype} in {path}")
    if raw.ndim == 2:
        raw = raw[:, :, None]
    elif raw.ndim == 3 and raw.shape[2] == 3:
        raw = raw[:, :, ::-1]  # BGR -> RGB
    else:
        raise ValueError(
            f"unsupported channel layout {raw.shape} in {path}; "
            "expected RGB or grayscale"
        )
    return raw.astype(np.float64) / _SCALE[raw.dtype]


def save_png(img: np.ndarray, path) -> None:
    """Write an image as 8-bit PNG, clamping to [0, 1] and rounding half-up."""
    img = validate_image(img)
    q = np.floor(np.clip(img, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)
    data = q[:, :, 0] if q.shape[2] == 1 else q[:, :, ::-1]
    if not cv2.imwrite(str(path), data):
        raise ValueError(f"cannot write PNG file: {path}")


def add_gaussian_noise(img: np.ndarray, sigma_8bit: float, seed: int = 0) -> np.ndarray:
    """Add white Gaussian noise of standard deviation sigma_8bit/255.

    sigma is given on the 8-bit scale to match the usual convention.  The
    result is not clamped; clamping happens at save time.
    """
    img = validate_image(img)
    if sigma_8bit < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma_8bit}")
    if sigma_8bit == 0:
        return img.copy()
    rng = np.random.default_rng(seed)
    return img + rng.normal(0.0, sigma_8bit / 255.0, img.shape)


def psnr(a: np.ndarray, b: np.ndarray) -> float:
    """Peak signal-to-noise ratio in dB for [0, 1]-range images.

    Returns math.inf for identical inputs.
    """
    a = validate_image(a)
    b = validate_image(b)
    if a.shape != b.shape:
        raise ValueError(f"image shapes differ: {a.shape} vs {b.shape}")
    mse = float(np.mean((a - b) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(1.0 / mse)
