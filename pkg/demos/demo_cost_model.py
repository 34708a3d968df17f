"""
Operation-count model and measured scaling
==========================================

Prints the per-pixel cost estimate of the joint pipeline for a few
configurations, then measures actual wall-clock across image sizes and grid
steps to show the two headline properties of the model: total work is linear
in image area, and processing every step-th pixel divides it by step^2.
"""

import time

import numpy as np

import dctfusion as df
from _scenes import make_scene

# %% The model, for the default configuration and a trimmed one.
for search, knn in ((39, 16), (13, 8)):
    cfg = df.PipelineConfig(
        fusion=df.FusionParams(sigma=10 / 255),
        match=df.MatchParams(search=search, k_nn=knn),
        mode="joint",
    )
    report = df.estimate_cost(cfg, (512, 512), K=3)
    print(f"--- search={search}, k_nn={knn}, K=3, 512x512 ---")
    for line in report.lines():
        print(" ", line)
    print()


# %% Measured wall-clock across sizes (fixed trimmed config).
def run(n, step):
    scene = make_scene(n, n, seed=37)
    bracket = [np.clip(scene * f, 0, 1) for f in (0.4, 1.8)]
    noisy = [df.add_gaussian_noise(im, 10.0, seed=i) for i, im in enumerate(bracket)]
    cfg = df.PipelineConfig(
        fusion=df.FusionParams(sigma=10 / 255),
        match=df.MatchParams(search=13, k_nn=8),
        step=step,
        mode="joint",
    )
    start = time.perf_counter()
    df.denoise_and_fuse(noisy, cfg)
    return time.perf_counter() - start


run(64, 2)  # warm-up
print("size      step=2 wall-clock   per Mpx")
for n in (128, 256, 384):
    t = run(n, 2)
    print(f"{n}x{n:<6} {t:>10.2f} s   {t / (n * n / 1e6):>8.2f} s/Mpx")

t2 = run(256, 2)
t1 = run(256, 1)
print(f"\n256x256 step=1: {t1:.2f} s, step=2: {t2:.2f} s -> factor {t1 / t2:.2f}")
