"""Orthonormal RGB <-> YUV color conversion.

The matrix has orthonormal rows, so the conversion is an isometry: per-pixel
Euclidean norm is preserved and white Gaussian noise keeps its standard
deviation in every output channel.  That property is what allows a single
noise threshold to be reused across all three channels downstream.

Note the luminance channel is (R+G+B)/sqrt(3), so a white pixel maps to
Y = sqrt(3), not 1.  Code that needs a [0, 1] brightness rescales by
1/LUMA_SCALE at the point of use.
"""

import numpy as np

__all__ = ["RGB_TO_YUV", "YUV_TO_RGB", "LUMA_SCALE", "rgb_to_yuv", "yuv_to_rgb"]

RGB_TO_YUV = np.array(
    [
        [1.0 / np.sqrt(3.0), 1.0 / np.sqrt(3.0), 1.0 / np.sqrt(3.0)],
        [np.sqrt(2.0) / 2.0, 0.0, -np.sqrt(2.0) / 2.0],
        [1.0 / np.sqrt(6.0), -2.0 / np.sqrt(6.0), 1.0 / np.sqrt(6.0)],
    ]
)
YUV_TO_RGB = RGB_TO_YUV.T.copy()

# Y value of the white pixel (1, 1, 1).
LUMA_SCALE = float(np.sqrt(3.0))


def _apply(matrix, img):
    img = np.asarray(img, dtype=np.float64)
    if img.ndim < 1 or img.shape[-1] != 3:
        raise ValueError(f"expected 3 channels on the last axis, got shape {img.shape}")
    return img @ matrix.T


def rgb_to_yuv(img: np.ndarray) -> np.ndarray:
    """Convert (..., 3) RGB values to orthonormal YUV.

    U and V may be negative; they are stored unshifted.
    """
    return _apply(RGB_TO_YUV, img)


def yuv_to_rgb(img: np.ndarray) -> np.ndarray:
    """Convert (..., 3) orthonormal YUV values back to RGB."""
    return _apply(YUV_TO_RGB, img)
