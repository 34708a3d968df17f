"""End-to-end fusion pipelines over a registered exposure sequence.

Two modes share the same skeleton: walk a sliding reference grid, fuse
co-located DCT patches across exposures, inverse-transform, and average
overlapping results back into the output raster.

fuse-only   RGB -> YUV, per grid position transform the K patches of each
            channel, fuse (exposure-aware luma rule, magnitude rule for
            chroma, optional noise thresholding), inverse transform,
            aggregate, back to RGB.

joint       additionally denoises: per reference position the most similar
            blocks are found once on luminance, each exposure's group of
            matched patches is collaboratively filtered in the 2D-DCT
            domain, and all matched positions are fused and aggregated at
            their own locations.  Denoised per-exposure images are never
            reconstructed; the filtered coefficients feed fusion directly
            and only the fused patches are inverse transformed.

Reference positions are independent work items; with threads > 1 they are
processed in fixed-size blocks, each filling a private accumulator, and the
accumulators are merged in deterministic order, so parallel output is
identical to the sequential one.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .color import LUMA_SCALE, rgb_to_yuv, yuv_to_rgb
from .fusion import FusionParams, chroma_weights, luma_weights
from .image import Accumulator, axis_positions, validate_sequence
from .matching import MatchParams, collaborative_filter_group, match_grid
from .transform import Dct1Plan, Dct2Plan

__all__ = [
    "PipelineConfig",
    "CostReport",
    "compute_exposure_context",
    "fuse_sequence",
    "denoise_and_fuse",
    "estimate_cost",
    "transform_cost_1d",
    "transform_cost_2d",
]

# rough per-work-item element budget used to size position chunks / row bands
_CHUNK_BUDGET = 6_000_000


@dataclass
class PipelineConfig:
    """Everything the two pipeline modes need.

    step: grid displacement in pixels (1 <= step <= patch size)
    mode: "fuse-only" or "joint"
    sigma_fusion: threshold level for the fusion stage in joint mode;
        defaults to fusion.sigma (residual noise after collaborative
        filtering is at most that)
    deterministic: force sequential execution
    threads: worker threads for grid processing
    """

    fusion: FusionParams = field(default_factory=FusionParams)
    match: MatchParams = field(default_factory=MatchParams)
    step: int = 2
    mode: str = "fuse-only"
    sigma_fusion: float | None = None
    deterministic: bool = False
    threads: int = 1

    def __post_init__(self):
        if self.mode not in ("fuse-only", "joint"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not 1 <= self.step <= self.fusion.b:
            raise ValueError(
                f"step must be in [1, {self.fusion.b}], got {self.step}"
            )
        if self.match.b != self.fusion.b:
            raise ValueError(
                f"match patch size {self.match.b} != fusion patch size {self.fusion.b}"
            )
        if self.mode == "joint" and self.fusion.sigma <= 0:
            raise ValueError("joint mode requires sigma > 0")
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")


def compute_exposure_context(images) -> np.ndarray:
    """Per-exposure mean brightness in [0, 1].

    For RGB inputs this is the mean of the orthonormal luminance rescaled
    by the white level, which equals the plain mean over all channels.
    """
    return np.array([im.mean() for im in validate_sequence(images)])


def _prepare(images, cfg):
    imgs = validate_sequence(images)
    h, w, c = imgs[0].shape
    b = cfg.fusion.b
    if b > w or b > h:
        raise ValueError(f"patch size {b} exceeds image dimensions {w}x{h}")
    mu = compute_exposure_context(imgs)
    if c == 3:
        work = np.stack([rgb_to_yuv(im) for im in imgs])
        scale = LUMA_SCALE
    else:
        work = np.stack(imgs)
        scale = 1.0
    return work, mu, scale, (h, w, c)


def _run_items(items, worker, cfg):
    """Run worker over items, sequentially or thread-pooled, in order."""
    if cfg.deterministic or cfg.threads == 1 or len(items) == 1:
        return [worker(it) for it in items]
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        return list(pool.map(worker, items))


def _finish(acc: Accumulator, channels: int) -> np.ndarray:
    out = acc.finalize()
    if channels == 3:
        out = yuv_to_rgb(out)
    return np.clip(out, 0.0, 1.0)


def fuse_sequence(images, cfg: PipelineConfig, return_weights: bool = False):
    """Fuse a registered exposure sequence into one image.

    Returns the fused (H, W, C) image in [0, 1].  With return_weights the
    result is (image, weights, (ys, xs)) where weights has shape
    (K, n_y, n_x, b, b): the luminance fusion weight of every exposure at
    every grid position and frequency.
    """
    work, mu, scale, (h, w, c) = _prepare(images, cfg)
    K = work.shape[0]
    b = cfg.fusion.b
    plan2 = Dct2Plan(b)
    xs = axis_positions(w, b, cfg.step)
    ys = axis_positions(h, b, cfg.step)
    gx, gy = np.meshgrid(xs, ys)
    grid = np.stack([gx.ravel(), gy.ravel()], axis=1)

    views = [
        [sliding_window_view(work[k, :, :, ci], (b, b)) for ci in range(c)]
        for k in range(K)
    ]
    weights_out = (
        np.empty((K, len(ys), len(xs), b, b)) if return_weights else None
    )

    chunk = max(1, _CHUNK_BUDGET // (K * b * b))
    starts = list(range(0, len(grid), chunk))

    def process(start):
        acc = Accumulator(h, w, c)
        part = grid[start : start + chunk]
        pys, pxs = part[:, 1], part[:, 0]
        for ci in range(c):
            patches = np.stack([views[k][ci][pys, pxs] for k in range(K)])
            dcts = plan2.forward(patches)
            if ci == 0:
                fw, z = luma_weights(dcts, mu, cfg.fusion, scale)
            else:
                fw, z = chroma_weights(dcts, cfg.fusion)
            fused = (fw * z).sum(axis=0)
            acc.add_patches(plan2.inverse(fused), part, ci)
            if ci == 0 and weights_out is not None:
                flat = weights_out.reshape(K, -1, b, b)
                flat[:, start : start + len(part)] = fw
        return acc

    accs = _run_items(starts, process, cfg)
    total = accs[0]
    for a in accs[1:]:
        total.merge(a)
    out = _finish(total, c)
    if return_weights:
        return out, weights_out, (ys, xs)
    return out


def denoise_and_fuse(images, cfg: PipelineConfig, return_weights: bool = False):
    """Jointly denoise and fuse a noisy registered exposure sequence.

    Requires cfg.fusion.sigma > 0 (noise standard deviation in [0, 1]
    units).  With return_weights, also returns the luminance fusion weights
    of each reference position's own patch, shaped (K, n_y, n_x, b, b).
    """
    if cfg.mode != "joint":
        cfg = replace(cfg, mode="joint")  # triggers the sigma validation
    work, mu, scale, (h, w, c) = _prepare(images, cfg)
    K = work.shape[0]
    b = cfg.fusion.b
    sigma = cfg.fusion.sigma
    sigma_f = cfg.sigma_fusion if cfg.sigma_fusion is not None else sigma
    fuse_params = replace(cfg.fusion, sigma=sigma_f)
    plan2 = Dct2Plan(b)
    plans1: dict[int, Dct1Plan] = {}

    xs = axis_positions(w, b, cfg.step)
    ys = axis_positions(h, b, cfg.step)
    luma = work[:, :, :, 0]
    views = [
        [sliding_window_view(work[k, :, :, ci], (b, b)) for ci in range(c)]
        for k in range(K)
    ]
    weights_out = (
        np.empty((K, len(ys), len(xs), b, b)) if return_weights else None
    )

    rows_by_groups = max(1, _CHUNK_BUDGET // (K * cfg.match.k_nn * b * b * len(xs)))
    rows_by_dist = max(1, _CHUNK_BUDGET // (cfg.match.search**2 * len(xs)))
    band = min(rows_by_groups, rows_by_dist, len(ys))
    bands = [(i, min(i + band, len(ys))) for i in range(0, len(ys), band)]

    def process(span):
        lo, hi = span
        band_ys = ys[lo:hi]
        acc = Accumulator(h, w, c)
        origins, lengths = match_grid(luma, band_ys, xs, cfg.match)
        for g in np.unique(lengths):
            sel = np.flatnonzero(lengths == g)
            members = origins[sel, :g]  # (R, g, 2) of (x, y)
            R = len(sel)
            plan1 = plans1.setdefault(int(g), Dct1Plan(int(g)))
            mx = members[:, :, 0].ravel()
            my = members[:, :, 1].ravel()
            for ci in range(c):
                groups = np.stack(
                    [views[k][ci][my, mx].reshape(R, g, b, b) for k in range(K)]
                )
                dcts = plan2.forward(groups)
                dcts = collaborative_filter_group(dcts, sigma, cfg.fusion.thresh, plan1)
                if ci == 0:
                    fw, z = luma_weights(dcts, mu, fuse_params, scale)
                else:
                    fw, z = chroma_weights(dcts, fuse_params)
                fused = (fw * z).sum(axis=0)
                acc.add_patches(
                    plan2.inverse(fused).reshape(-1, b, b), members.reshape(-1, 2), ci
                )
                if ci == 0 and weights_out is not None:
                    flat = weights_out.reshape(K, len(ys) * len(xs), b, b)
                    flat[:, lo * len(xs) + sel] = fw[:, :, 0]
        return acc

    accs = _run_items(bands, process, cfg)
    total = accs[0]
    for a in accs[1:]:
        total.merge(a)
    out = _finish(total, c)
    if return_weights:
        return out, weights_out, (ys, xs)
    return out


def transform_cost_1d(n: int) -> float:
    """Operation count of one naive length-n DCT (n^2 multiply-adds)."""
    return 2.0 * n * n


def transform_cost_2d(b: int) -> float:
    """Operation count of one naive separable b x b DCT (2b row/column
    passes of length b each)."""
    return 4.0 * b**3


@dataclass
class CostReport:
    """Per-pixel operation estimate for the joint pipeline."""

    terms: list
    per_pixel: float
    total: float
    adjusted: float
    step: int

    def lines(self):
        width = max(len(label) for label, _ in self.terms)
        out = [f"{label:<{width}} : {ops:>14,.0f} ops/px" for label, ops in self.terms]
        out.append(f"{'total per pixel':<{width}} : {self.per_pixel:>14,.0f} ops/px")
        out.append(f"{'total':<{width}} : {self.total:>14,.0f} ops")
        out.append(
            f"{'adjusted for step=' + str(self.step):<{width}} : {self.adjusted:>14,.0f} ops"
        )
        return out


def estimate_cost(cfg: PipelineConfig, dims, K: int) -> CostReport:
    """Operation-count estimate of the joint pipeline on a dims=(w, h) image.

    Six per-pixel terms, assuming exhaustive window search and naive
    transforms: forward 2D transforms of the K patches at each of the
    N_S^2 window positions, block matching over the window, the forward
    and inverse stack transforms for every frequency of every exposure,
    the fusion of the k matched stacks, the inverse 2D transforms of the
    k fused patches, and aggregation.  Processing only every step-th pixel
    in both directions divides the total by step^2; overlap aggregation
    still covers every pixel.
    """
    w, h = dims
    b = cfg.fusion.b
    ns = cfg.match.search
    k = cfg.match.k_nn
    c2 = transform_cost_2d(b)
    terms = [
        ("forward 2D transforms of window patches", K * ns**2 * c2),
        ("block matching (exhaustive window search)", 2.0 * K * b**2 * ns**2),
        ("stack 1D transforms (forward and inverse)", 2.0 * K * b**2 * transform_cost_1d(k)),
        ("fusion of matched stacks", 2.0 * K * k * b**2),
        ("inverse 2D transforms of fused patches", k * c2),
        ("aggregation", float(k * b**2)),
    ]
    per_pixel = float(sum(ops for _, ops in terms))
    total = per_pixel * w * h
    return CostReport(terms, per_pixel, total, total / cfg.step**2, cfg.step)
