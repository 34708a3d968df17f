"""Cross-exposure block matching and collaborative stack filtering.

A 3D block is the stack of K co-located b x b patches, one per exposure.
Blocks are compared with the sum over exposures of per-image patch
difference norms, so patches are only ever compared against patches from
the same image and the match geometry is shared by the whole sequence.

For each reference position the k nearest blocks inside a clipped search
window are selected (the reference itself always first, remaining ties
broken in raster order).  Collaborative filtering then runs per exposure:
for every 2D frequency, the vector of that coefficient across the group is
1D-DCT transformed, hard-thresholded, and transformed back, all without
leaving the 2D-DCT domain.
"""

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .transform import Dct1Plan

__all__ = [
    "MatchParams",
    "block_distance_3d",
    "find_similar_blocks",
    "match_grid",
    "collaborative_filter_group",
]


@dataclass
class MatchParams:
    """Block-matching tunables.

    search: search window side N_S in pixels (odd)
    k_nn: number of most-similar blocks kept per reference
    b: patch side in pixels
    """

    search: int = 39
    k_nn: int = 16
    b: int = 8

    def __post_init__(self):
        if self.search < 1 or self.search % 2 == 0:
            raise ValueError(f"search window must be odd and >= 1, got {self.search}")
        if self.k_nn < 1:
            raise ValueError(f"k_nn must be >= 1, got {self.k_nn}")
        if self.b < 1:
            raise ValueError(f"patch size must be >= 1, got {self.b}")


def _as_planes(seq) -> np.ndarray:
    planes = np.asarray(seq, dtype=np.float64)
    if planes.ndim == 2:
        planes = planes[None]
    if planes.ndim != 3:
        raise ValueError(f"expected (K, H, W) luma planes, got shape {planes.shape}")
    return planes


def _check_origin(pos, h, w, b):
    x, y = pos
    if x < 0 or y < 0 or x + b > w or y + b > h:
        raise ValueError(
            f"patch exceeds image bounds: origin ({x}, {y}), size {b}, image {w}x{h}"
        )


def block_distance_3d(seq, x, y, b: int) -> float:
    """Distance between the 3D blocks at origins x and y: the sum over
    exposures of the Euclidean norm of the per-image patch difference."""
    planes = _as_planes(seq)
    _, h, w = planes.shape
    _check_origin(x, h, w, b)
    _check_origin(y, h, w, b)
    total = 0.0
    for plane in planes:
        pa = plane[x[1] : x[1] + b, x[0] : x[0] + b]
        pb = plane[y[1] : y[1] + b, y[0] : y[0] + b]
        total += float(np.sqrt(((pa - pb) ** 2).sum()))
    return total


def find_similar_blocks(seq, ref, params: MatchParams) -> np.ndarray:
    """The k_nn most similar block origins around one reference position.

    Returns an (g, 2) array of (x, y) origins, g = min(k_nn, candidates in
    the clipped window).  Row 0 is always the reference itself; the rest
    are ordered by increasing distance, ties broken by raster order.
    """
    planes = _as_planes(seq)
    _, h, w = planes.shape
    b = params.b
    _check_origin(ref, h, w, b)
    rx, ry = int(ref[0]), int(ref[1])
    half = params.search // 2
    y0, y1 = max(0, ry - half), min(h - b, ry + half)
    x0, x1 = max(0, rx - half), min(w - b, rx + half)

    dist = None
    for plane in planes:
        win = sliding_window_view(plane, (b, b))[y0 : y1 + 1, x0 : x1 + 1]
        refp = plane[ry : ry + b, rx : rx + b]
        ssd = ((win - refp) ** 2).sum(axis=(-2, -1))
        contrib = np.sqrt(ssd)
        dist = contrib if dist is None else dist + contrib

    flat = dist.ravel()  # raster order over the window
    self_idx = (ry - y0) * dist.shape[1] + (rx - x0)
    flat[self_idx] = -1.0  # force the reference to sort first
    order = np.argsort(flat, kind="stable")[: min(params.k_nn, flat.size)]
    oy, ox = np.unravel_index(order, dist.shape)
    return np.stack([ox + x0, oy + y0], axis=1)


def _box_sum(a: np.ndarray, b: int) -> np.ndarray:
    """Sums of all b x b windows of a 2D array, via a summed-area table."""
    c = np.cumsum(np.cumsum(a, axis=0), axis=1)
    c = np.pad(c, ((1, 0), (1, 0)))
    return c[b:, b:] - c[:-b, b:] - c[b:, :-b] + c[:-b, :-b]


def match_grid(seq, ref_ys, ref_xs, params: MatchParams):
    """Batched k-NN search for a rectangular grid of reference origins.

    seq: (K, H, W) luma planes; ref_ys / ref_xs: sorted origin rows / cols.
    Returns (origins, lengths): origins is (n_refs, k_nn, 2) of (x, y) with
    refs flattened row-major, lengths (n_refs,) gives the valid member
    count per reference (slots past it are filled with the reference).

    Same contract as find_similar_blocks, evaluated for all references at
    once: per displacement, patch SSDs for every origin come from a
    summed-area table over the shifted squared difference, which reuses
    overlapping sums instead of re-reading each candidate patch.  The
    distance table holds len(ref_ys) * len(ref_xs) * search^2 floats, so
    large grids should be processed in row bands.
    """
    planes = _as_planes(seq)
    _, h, w = planes.shape
    b = params.b
    half = params.search // 2
    n_disp = params.search**2
    ref_ys = np.asarray(ref_ys, dtype=np.intp)
    ref_xs = np.asarray(ref_xs, dtype=np.intp)
    oy_max, ox_max = h - b, w - b
    for axis, limit in ((ref_ys, oy_max), (ref_xs, ox_max)):
        if len(axis) and (axis.min() < 0 or axis.max() > limit):
            raise ValueError("reference origins fall outside the valid patch range")

    dist = np.full((len(ref_ys), len(ref_xs), n_disp), np.inf)
    for j in range(n_disp):
        dy = j // params.search - half
        dx = j % params.search - half
        # references whose displaced origin stays inside the image
        i0 = np.searchsorted(ref_ys, max(0, -dy))
        i1 = np.searchsorted(ref_ys, min(oy_max, oy_max - dy), side="right")
        k0 = np.searchsorted(ref_xs, max(0, -dx))
        k1 = np.searchsorted(ref_xs, min(ox_max, ox_max - dx), side="right")
        if i0 >= i1 or k0 >= k1:
            continue
        ry0, ry1 = ref_ys[i0], ref_ys[i1 - 1]
        cx0, cx1 = max(0, -dx), min(ox_max, ox_max - dx)
        acc = None
        for plane in planes:
            a = plane[ry0 : ry1 + b, cx0 : cx1 + b]
            c = plane[ry0 + dy : ry1 + b + dy, cx0 + dx : cx1 + b + dx]
            ssd = _box_sum((a - c) ** 2, b)
            part = np.sqrt(
                np.maximum(ssd[np.ix_(ref_ys[i0:i1] - ry0, ref_xs[k0:k1] - cx0)], 0.0)
            )
            acc = part if acc is None else acc + part
        dist[i0:i1, k0:k1, j] = acc

    flat = dist.reshape(-1, n_disp)
    n_refs = flat.shape[0]
    width = min(params.k_nn, n_disp)
    lengths = np.minimum((flat < np.inf).sum(axis=1), width)
    self_idx = half * params.search + half  # displacement (0, 0)
    flat[:, self_idx] = -1.0
    order = np.argsort(flat, axis=1, kind="stable")[:, :width]

    dys = order // params.search - half
    dxs = order % params.search - half
    gy, gx = np.meshgrid(ref_ys, ref_xs, indexing="ij")
    ys = gy.reshape(-1, 1) + dys
    xs = gx.reshape(-1, 1) + dxs
    # pad slots past the valid count with the reference itself
    pad = np.arange(width) >= lengths[:, None]
    ys = np.where(pad, gy.reshape(-1, 1), ys)
    xs = np.where(pad, gx.reshape(-1, 1), xs)
    origins = np.stack([xs, ys], axis=2)
    return origins.reshape(n_refs, width, 2), lengths


def collaborative_filter_group(
    group: np.ndarray, sigma: float, thresh: float, plan: Dct1Plan
) -> np.ndarray:
    """Jointly denoise a group of similar patches of one exposure.

    group: (..., g, b, b) patches already in the 2D-DCT domain, stack axis
    third from last.  For each 2D frequency the coefficient vector across
    the stack is 1D-DCT transformed, hard-thresholded at thresh*sigma, and
    transformed back; shared structure concentrates in the stack-DC terms
    and survives while independent noise is zeroed.  The single stack-DC
    coefficient of the spatial-DC vector (the group's mean level) is never
    thresholded.  Output stays in the 2D-DCT domain.
    """
    group = np.asarray(group, dtype=np.float64)
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    if group.ndim < 3:
        raise ValueError(f"expected (..., g, b, b) group, got shape {group.shape}")
    *lead, g, b1, b2 = group.shape
    if g != plan.size:
        raise ValueError(f"group size {g} does not match 1D plan length {plan.size}")

    stacks = np.swapaxes(group.reshape(*lead, g, b1 * b2), -1, -2)  # (..., b*b, g)
    t = plan.forward(stacks)
    cut = thresh * sigma
    if cut > 0:
        mask = np.abs(t) < cut
        mask[..., 0, 0] = False  # stack-DC of the spatial-DC vector
        t = np.where(mask, 0.0, t)
    out = plan.inverse(t)
    return np.swapaxes(out, -1, -2).reshape(group.shape)
