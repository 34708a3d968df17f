"""Raster plumbing: patch extraction, the sliding reference grid, and
overlap-average accumulation.

Images are float64 arrays of shape (H, W, C) with values nominally in
[0, 1]; C is 1 or 3.  Patches are bare (b, b) arrays addressed by their
top-left corner (x, y).  Grid positions are clamped at the borders so the
last patch ends exactly on the image edge, which guarantees every pixel is
covered without inventing padded values.
"""

import numpy as np

__all__ = [
    "validate_image",
    "validate_sequence",
    "extract_patch",
    "axis_positions",
    "reference_grid",
    "Accumulator",
]


def validate_image(img: np.ndarray) -> np.ndarray:
    """Check shape/finiteness and return the image as float64 (H, W, C)."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim == 2:
        img = img[:, :, None]
    if img.ndim != 3 or img.shape[2] not in (1, 3):
        raise ValueError(f"expected (H, W) or (H, W, 1|3) image, got shape {img.shape}")
    if not np.all(np.isfinite(img)):
        raise ValueError("image contains NaN or Inf values")
    return img


def validate_sequence(images) -> list:
    """Validate a list of registered exposures: same size, same channels."""
    if len(images) < 1:
        raise ValueError("exposure sequence must contain at least one image")
    out = [validate_image(im) for im in images]
    shape = out[0].shape
    for i, im in enumerate(out[1:], start=1):
        if im.shape != shape:
            raise ValueError(
                f"exposure {i} has shape {im.shape}, expected {shape}; "
                "inputs must be pre-registered and equally sized"
            )
    return out


def extract_patch(img: np.ndarray, channel: int, origin, b: int) -> np.ndarray:
    """Copy the b x b patch of one channel plane at top-left corner (x, y)."""
    img = validate_image(img)
    h, w = img.shape[:2]
    x, y = origin
    if x < 0 or y < 0 or x + b > w or y + b > h:
        raise ValueError(
            f"patch exceeds image bounds: origin ({x}, {y}), size {b}, image {w}x{h}"
        )
    return img[y : y + b, x : x + b, channel].copy()


def axis_positions(length: int, b: int, step: int) -> np.ndarray:
    """Sliding positions along one axis: 0, step, 2*step, ... clamped to length-b."""
    if b > length:
        raise ValueError(f"patch size {b} exceeds image extent {length}")
    if not 1 <= step <= b:
        raise ValueError(f"step must be in [1, {b}], got {step}")
    last = length - b
    return np.array(list(range(0, last, step)) + [last], dtype=np.intp)


def reference_grid(width: int, height: int, b: int, step: int) -> np.ndarray:
    """All reference patch origins as an (n, 2) array of (x, y) rows.

    Positions are returned in raster order (y-major).  The union of the
    returned patches covers every pixel whenever step <= b.
    """
    xs = axis_positions(width, b, step)
    ys = axis_positions(height, b, step)
    gx, gy = np.meshgrid(xs, ys)
    return np.stack([gx.ravel(), gy.ravel()], axis=1)


class Accumulator:
    """Per-pixel running sum and hit count for overlap averaging.

    Workers may each fill a private accumulator and combine them with
    merge(); that is equivalent to accumulating everything into one.
    """

    def __init__(self, height: int, width: int, channels: int):
        self.height = height
        self.width = width
        self.channels = channels
        self.sum = np.zeros((channels, height, width))
        self.count = np.zeros((channels, height, width), dtype=np.int64)

    def add(self, patch: np.ndarray, origin, channel: int) -> None:
        """Accumulate one b x b patch at top-left corner (x, y)."""
        patch = np.asarray(patch, dtype=np.float64)
        b = patch.shape[0]
        x, y = origin
        if x < 0 or y < 0 or x + b > self.width or y + b > self.height:
            raise ValueError(
                f"patch exceeds image bounds: origin ({x}, {y}), size {b}, "
                f"image {self.width}x{self.height}"
            )
        self.sum[channel, y : y + b, x : x + b] += patch
        self.count[channel, y : y + b, x : x + b] += 1

    def add_patches(self, patches: np.ndarray, origins: np.ndarray, channel: int) -> None:
        """Accumulate a batch: patches (n, b, b) at origins (n, 2) of (x, y).

        Scatter-add via bincount on flattened pixel indices; duplicates in
        origins are legitimate repeated contributions.
        """
        patches = np.asarray(patches, dtype=np.float64)
        origins = np.asarray(origins)
        n, b, _ = patches.shape
        if n == 0:
            return
        xs = origins[:, 0]
        ys = origins[:, 1]
        if xs.min() < 0 or ys.min() < 0 or xs.max() + b > self.width or ys.max() + b > self.height:
            raise ValueError("batch contains out-of-bounds patch origins")
        rows = ys[:, None] + np.arange(b)
        cols = xs[:, None] + np.arange(b)
        flat = (rows[:, :, None] * self.width + cols[:, None, :]).ravel()
        npix = self.height * self.width
        self.sum[channel] += np.bincount(
            flat, weights=patches.ravel(), minlength=npix
        ).reshape(self.height, self.width)
        self.count[channel] += np.bincount(flat, minlength=npix).reshape(
            self.height, self.width
        )

    def merge(self, other: "Accumulator") -> None:
        """Fold another accumulator's sums and counts into this one."""
        if other.sum.shape != self.sum.shape:
            raise ValueError("accumulator shapes differ")
        self.sum += other.sum
        self.count += other.count

    def finalize(self) -> np.ndarray:
        """Average to an (H, W, C) image.  Every pixel must have been hit."""
        if np.any(self.count == 0):
            c, y, x = np.argwhere(self.count == 0)[0]
            raise ValueError(f"uncovered pixels: first at x={x}, y={y}, channel={c}")
        return np.moveaxis(self.sum / self.count, 0, -1)
