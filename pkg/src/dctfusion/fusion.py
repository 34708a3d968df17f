"""Patch fusion in the DCT domain.

Detail coefficients from the K exposures are combined with weights
proportional to a power p of their magnitudes, so the best-exposed (highest
contrast) version of each frequency dominates.  The zero frequency of the
luminance channel instead uses well-exposedness weights: a Gaussian penalty
on the distance of the patch mean and of the whole-image mean from mid-gray.
Chrominance channels apply the magnitude rule to every coefficient including
the mean, which favors the most colorful version of each patch.

When sigma > 0 the magnitudes are hard-thresholded first, which folds noise
suppression into the same weighting: a frequency below T*sigma in every
exposure carries no evidence above the noise floor and fuses to exactly 0.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "FusionParams",
    "hard_threshold",
    "ac_weights",
    "dc_weights_luma",
    "luma_weights",
    "chroma_weights",
    "fuse_patch_luma",
    "fuse_patch_chroma",
]


@dataclass
class FusionParams:
    """Tunables for DCT-domain fusion.

    p: magnitude power exponent for detail weights
    thresh: threshold multiplier T; coefficients below thresh*sigma are zeroed
    sigma: noise standard deviation in [0, 1] image units; 0 disables thresholding
    sigma_l / sigma_g: widths of the local / global exposure Gaussians
    b: patch side in pixels
    """

    p: float = 7.0
    thresh: float = 2.7
    sigma: float = 0.0
    sigma_l: float = 0.2
    sigma_g: float = 0.2
    b: int = 8

    def __post_init__(self):
        if self.p <= 0:
            raise ValueError(f"p must be positive, got {self.p}")
        if self.thresh < 0:
            raise ValueError(f"thresh must be >= 0, got {self.thresh}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if self.sigma_l <= 0 or self.sigma_g <= 0:
            raise ValueError("sigma_l and sigma_g must be positive")
        if self.b < 1:
            raise ValueError(f"patch size must be >= 1, got {self.b}")


def hard_threshold(coeffs: np.ndarray, sigma: float, thresh: float = 2.7) -> np.ndarray:
    """Zero AC coefficients with magnitude below thresh*sigma.

    Operates on (..., b, b) coefficient blocks.  The DC coefficient at
    (..., 0, 0) is always kept: zeroing it would destroy patch means, and
    the threshold is motivated for detail coefficients only.
    """
    coeffs = np.asarray(coeffs, dtype=np.float64)
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    cut = thresh * sigma
    if cut <= 0:
        return coeffs.copy()
    out = np.where(np.abs(coeffs) < cut, 0.0, coeffs)
    out[..., 0, 0] = coeffs[..., 0, 0]
    return out


def ac_weights(mags: np.ndarray, p: float) -> np.ndarray:
    """Magnitude-power weights along the exposure axis (first axis).

    mags holds absolute coefficient values, already thresholded by the
    caller when noise is present.  Weights sum to 1 wherever at least one
    magnitude is nonzero; a frequency suppressed in every exposure gets the
    all-zero weight vector, so the fused coefficient becomes 0.

    Magnitudes are normalized by their per-frequency maximum before raising
    to the power p, which keeps large p well away from overflow/underflow.
    """
    mags = np.asarray(mags, dtype=np.float64)
    peak = mags.max(axis=0, keepdims=True)
    powed = (mags / np.where(peak > 0, peak, 1.0)) ** p
    total = powed.sum(axis=0, keepdims=True)
    return np.where(peak > 0, powed / np.where(total > 0, total, 1.0), 0.0)


def dc_weights_luma(
    patch_means: np.ndarray,
    image_means: np.ndarray,
    sigma_l: float = 0.2,
    sigma_g: float = 0.2,
) -> np.ndarray:
    """Well-exposedness weights for the luminance DC coefficient.

    patch_means: per-exposure patch means in [0, 1], exposure on the first axis
    image_means: per-exposure whole-image means in [0, 1]

    Each weight is exp(-(m_k - 0.5)^2 / sigma_l^2) * exp(-(mu_k - 0.5)^2 / sigma_g^2),
    normalized to sum to 1 over exposures.  All weights are strictly positive,
    so the fused DC stays inside the convex hull of the inputs.
    """
    patch_means = np.asarray(patch_means, dtype=np.float64)
    image_means = np.asarray(image_means, dtype=np.float64)
    if patch_means.shape[0] != image_means.shape[0]:
        raise ValueError(
            f"{patch_means.shape[0]} patch means but {image_means.shape[0]} image means"
        )
    shape = (-1,) + (1,) * (patch_means.ndim - 1)
    expo = (patch_means - 0.5) ** 2 / sigma_l**2
    expo = expo + ((image_means - 0.5) ** 2 / sigma_g**2).reshape(shape)
    expo -= expo.min(axis=0, keepdims=True)  # shift-invariant; avoids underflow
    w = np.exp(-expo)
    return w / w.sum(axis=0, keepdims=True)


def _check_stack(dcts, params):
    dcts = np.asarray(dcts, dtype=np.float64)
    if dcts.ndim < 3 or dcts.shape[-2:] != (params.b, params.b):
        raise ValueError(
            f"expected (K, ..., {params.b}, {params.b}) coefficient stack, "
            f"got shape {dcts.shape}"
        )
    if dcts.shape[0] < 1:
        raise ValueError("need at least one exposure")
    return dcts


def luma_weights(
    dcts: np.ndarray,
    image_means: np.ndarray,
    params: FusionParams,
    mean_scale: float = 1.0,
):
    """Per-frequency luminance fusion weights and thresholded coefficients.

    Returns (weights, thresholded), both shaped like dcts.  AC weights
    follow the magnitude-power rule on thresholded magnitudes; the DC slot
    holds the well-exposedness weights computed from the raw DC (mapped to
    a [0, 1] patch mean via DC = b * mean * mean_scale).
    """
    dcts = _check_stack(dcts, params)
    z = hard_threshold(dcts, params.sigma, params.thresh)
    w = ac_weights(np.abs(z), params.p)

    dc = dcts[..., 0, 0]
    means = dc / (params.b * mean_scale)
    w[..., 0, 0] = dc_weights_luma(means, image_means, params.sigma_l, params.sigma_g)
    return w, z


def chroma_weights(dcts: np.ndarray, params: FusionParams):
    """Per-frequency chrominance fusion weights and thresholded coefficients.

    The magnitude-power rule is applied to every coefficient including DC,
    which biases toward the larger chroma amplitude and keeps the result
    colorful.  DC is exempt from thresholding so flat regions do not
    desaturate; AC magnitudes are thresholded before weighting.
    """
    dcts = _check_stack(dcts, params)
    z = hard_threshold(dcts, params.sigma, params.thresh)
    return ac_weights(np.abs(z), params.p), z


def fuse_patch_luma(
    dcts: np.ndarray,
    image_means: np.ndarray,
    params: FusionParams,
    mean_scale: float = 1.0,
) -> np.ndarray:
    """Fuse co-located luminance DCT patches across exposures.

    dcts: (K, ..., b, b) coefficient blocks, exposure first
    image_means: (K,) whole-image luminance means in [0, 1]
    mean_scale: luminance value of white, used to map the DC coefficient
        back to a [0, 1] patch mean

    Detail coefficients are combined with magnitude-power weights, after
    hard thresholding when params.sigma > 0; the weights are computed from
    the thresholded magnitudes and applied to the thresholded signed
    coefficients.  The DC coefficient uses well-exposedness weights on the
    raw (never thresholded) values, so the fused mean stays in the convex
    hull of the input means.
    """
    w, z = luma_weights(dcts, image_means, params, mean_scale)
    return (w * z).sum(axis=0)


def fuse_patch_chroma(dcts: np.ndarray, params: FusionParams) -> np.ndarray:
    """Fuse co-located chrominance DCT patches across exposures."""
    w, z = chroma_weights(dcts, params)
    return (w * z).sum(axis=0)
