"""Command-line interface.

Subcommands:
  fuse          fuse registered exposures (optionally thresholding noise)
  denoise-fuse  joint collaborative denoising + fusion, requires --sigma
  add-noise     add reproducible white Gaussian noise to an image
  psnr          peak signal-to-noise ratio between two images
  bench         print the per-pixel cost model and a measured wall-clock

All sigma flags are on the 8-bit scale (0..255) and divided by 255
internally.
"""

import argparse
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from .fusion import FusionParams
from .io import add_gaussian_noise, load_png, psnr, save_png
from .matching import MatchParams
from .pipeline import PipelineConfig, denoise_and_fuse, estimate_cost, fuse_sequence


def _add_pipeline_flags(sp, sigma_required=False):
    sp.add_argument("inputs", nargs="+", help="registered input PNGs, ordered by exposure")
    sp.add_argument("-o", "--output", required=True, help="output PNG path")
    sp.add_argument(
        "--sigma", type=float, default=0.0, required=sigma_required,
        help="noise standard deviation, 8-bit units (default: %(default)s)",
    )
    sp.add_argument(
        "--sigma-fusion", type=float, default=None,
        help="fusion-stage threshold level, 8-bit units (default: --sigma)",
    )
    sp.add_argument("--p", type=float, default=7.0, help="magnitude power exponent")
    sp.add_argument("--thresh", type=float, default=2.7, help="threshold multiplier T")
    sp.add_argument("--block", type=int, default=8, help="patch size in pixels")
    sp.add_argument("--step", type=int, default=2, help="grid displacement step")
    sp.add_argument("--knn", type=int, default=16, help="similar blocks per reference")
    sp.add_argument("--search", type=int, default=39, help="search window side (odd)")
    sp.add_argument("--sigma-l", type=float, default=0.2, help="local exposure width")
    sp.add_argument("--sigma-g", type=float, default=0.2, help="global exposure width")
    sp.add_argument("--threads", type=int, default=1, help="worker threads")
    sp.add_argument(
        "--deterministic", action="store_true", help="force sequential processing"
    )
    sp.add_argument(
        "--dump-weights", action="store_true",
        help="write per-frequency luminance weight maps as grayscale PNGs",
    )


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dctfusion",
        description="Multi-exposure fusion in the DCT domain with joint denoising.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    _add_pipeline_flags(sub.add_parser("fuse", help="fuse registered exposures"))
    _add_pipeline_flags(
        sub.add_parser("denoise-fuse", help="jointly denoise and fuse"),
        sigma_required=True,
    )

    noise = sub.add_parser("add-noise", help="add white Gaussian noise")
    noise.add_argument("inputs", nargs=1, help="input PNG")
    noise.add_argument("-o", "--output", required=True, help="output PNG path")
    noise.add_argument("--sigma", type=float, required=True, help="std, 8-bit units")
    noise.add_argument("--seed", type=int, default=0, help="RNG seed")

    ps = sub.add_parser("psnr", help="PSNR between two images")
    ps.add_argument("inputs", nargs=2, help="two PNGs of equal size")

    bench = sub.add_parser("bench", help="cost model + measured wall-clock")
    _add_pipeline_flags(bench)

    return p


def _config(args) -> PipelineConfig:
    fusion = FusionParams(
        p=args.p,
        thresh=args.thresh,
        sigma=args.sigma / 255.0,
        sigma_l=args.sigma_l,
        sigma_g=args.sigma_g,
        b=args.block,
    )
    match = MatchParams(search=args.search, k_nn=args.knn, b=args.block)
    return PipelineConfig(
        fusion=fusion,
        match=match,
        step=args.step,
        mode="joint" if args.command == "denoise-fuse" else "fuse-only",
        sigma_fusion=None if args.sigma_fusion is None else args.sigma_fusion / 255.0,
        deterministic=args.deterministic,
        threads=args.threads,
    )


def _load_sequence(paths):
    return [load_png(p) for p in paths]


def _dump_weight_maps(weights, output):
    """One grayscale PNG per exposure and frequency, next to the output."""
    outdir = Path(output).parent / (Path(output).stem + "_weights")
    outdir.mkdir(parents=True, exist_ok=True)
    K = weights.shape[0]
    b = weights.shape[-1]
    for k in range(K):
        for u in range(b):
            for v in range(b):
                save_png(weights[k, :, :, u, v], outdir / f"e{k}_u{u}_v{v}.png")
    return outdir


def _run_fuse(args) -> int:
    seq = _load_sequence(args.inputs)
    cfg = _config(args)
    run = denoise_and_fuse if args.command == "denoise-fuse" else fuse_sequence
    if args.dump_weights:
        out, weights, _ = run(seq, cfg, return_weights=True)
        where = _dump_weight_maps(weights, args.output)
        print(f"weight maps written to {where}")
    else:
        out = run(seq, cfg)
    save_png(out, args.output)
    print(f"wrote {args.output}")
    return 0


def _run_bench(args) -> int:
    seq = _load_sequence(args.inputs)
    cfg = _config(args)
    h, w = seq[0].shape[:2]
    report = estimate_cost(cfg, (w, h), len(seq))
    for line in report.lines():
        print(line)

    joint = cfg.fusion.sigma > 0
    run = denoise_and_fuse if joint else fuse_sequence
    start = time.perf_counter()
    out = run(seq, replace(cfg, mode="joint") if joint else cfg)
    elapsed = time.perf_counter() - start
    mpx = w * h / 1e6
    print(f"measured: {elapsed:.2f} s wall-clock, {mpx:.2f} Mpx, {elapsed / mpx:.2f} s/Mpx")
    save_png(out, args.output)
    print(f"wrote {args.output}")
    return 0


def run(args) -> int:
    if args.command in ("fuse", "denoise-fuse"):
        return _run_fuse(args)
    if args.command == "add-noise":
        img = load_png(args.inputs[0])
        save_png(add_gaussian_noise(img, args.sigma, args.seed), args.output)
        print(f"wrote {args.output}")
        return 0
    if args.command == "psnr":
        value = psnr(load_png(args.inputs[0]), load_png(args.inputs[1]))
        print("inf" if np.isinf(value) else f"{value:.4f}")
        return 0
    if args.command == "bench":
        return _run_bench(args)
    raise AssertionError(f"unhandled command {args.command}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
