"""Multi-exposure image fusion in the DCT domain with joint collaborative
denoising.

Images are float64 numpy arrays of shape (H, W, C), C in {1, 3}, values
nominally in [0, 1].  See fuse_sequence and denoise_and_fuse for the two
end-to-end pipelines; the building blocks (transforms, color conversion,
weights, block matching) are importable from their submodules or from here.
"""

from .color import LUMA_SCALE, rgb_to_yuv, yuv_to_rgb
from .fusion import (
    FusionParams,
    ac_weights,
    dc_weights_luma,
    fuse_patch_chroma,
    fuse_patch_luma,
    hard_threshold,
)
from .image import Accumulator, extract_patch, reference_grid
from .io import add_gaussian_noise, load_png, psnr, save_png
from .matching import (
    MatchParams,
    block_distance_3d,
    collaborative_filter_group,
    find_similar_blocks,
)
from .pipeline import (
    CostReport,
    PipelineConfig,
    compute_exposure_context,
    denoise_and_fuse,
    estimate_cost,
    fuse_sequence,
)
from .transform import Dct1Plan, Dct2Plan

__version__ = "0.1.0"

__all__ = [
    "LUMA_SCALE",
    "rgb_to_yuv",
    "yuv_to_rgb",
    "FusionParams",
    "ac_weights",
    "dc_weights_luma",
    "fuse_patch_chroma",
    "fuse_patch_luma",
    "hard_threshold",
    "Accumulator",
    "extract_patch",
    "reference_grid",
    "add_gaussian_noise",
    "load_png",
    "psnr",
    "save_png",
    "MatchParams",
    "block_distance_3d",
    "collaborative_filter_group",
    "find_similar_blocks",
    "CostReport",
    "PipelineConfig",
    "compute_exposure_context",
    "denoise_and_fuse",
    "estimate_cost",
    "fuse_sequence",
    "Dct1Plan",
    "Dct2Plan",
    "__version__",
]
