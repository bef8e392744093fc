#!/usr/bin/env python3
"""Learnable Wiener-type denoising on a seeded synthetic instance.

A band-limited field on a 30-node k-NN graph x 10-step path graph is
corrupted with white noise. The estimator filters element-wise in the
geodesic-coupled fractional spectral domain; gradient descent learns the two
fractional orders and the diagonal filter, while the coupling parameter is
fixed per run and chosen by a coarse grid search. A closed-form solve of the
convex filter subproblem provides the reference optimum at fixed orders.
"""

import numpy as np

from fracspec import (
    FilterParams,
    TrainConfig,
    TransformContext,
    add_awgn,
    closed_form_h,
    denoise,
    knn_graph,
    lambda_grid_search,
    loss,
    metrics,
    path_graph,
    random_planar_points,
    synth_signal,
    train,
)

ctx = TransformContext(knn_graph(random_planar_points(30, seed=7), 4), path_graph(10))
x = synth_signal(ctx.spatial, 10, bandwidth=0.3, seed=0)
y = add_awgn(x, sigma=0.9, seed=11)
noisy_mse = metrics(x.as_real(), y.as_real()).mse
print(f"noisy observation: mse = {noisy_mse:.4f}\n")

# single training run at a fixed coupling value (plain GD, rate 0.1,
# 200 epochs, orders initialized at 0.5, filter at identity)
params, trace = train(y, x, lam=0.4, config=TrainConfig(), ctx=ctx)
est = denoise(y, params, ctx)
m = metrics(x.as_real(), est.as_real())
print(f"trained at lam=0.4: loss {trace[0].loss:.4f} -> {loss(y, x, params, ctx):.4f}, "
      f"mse {m.mse:.4f}, learned orders ({params.alpha:.3f}, {params.beta:.3f})")

# the filter subproblem is convex; its closed form bounds what any filter
# update can achieve at these orders
h_star = closed_form_h(y, x, params, ctx)
oracle = loss(y, x, FilterParams(params.alpha, params.beta, h_star, params.lam), ctx)
print(f"closed-form filter at the learned orders: loss {oracle:.4f}")

# coarse search over the coupling parameter (kept fixed within each run)
print("\ncoupling grid search (step 0.1):")
best_lam, best_params, table = lambda_grid_search(
    y, x, [round(0.1 * i, 1) for i in range(11)], TrainConfig(), ctx)
for row in table:
    marker = " <-- best" if row.lam == best_lam else ""
    print(f"  lam={row.lam:.1f}  final loss {row.loss:.4f}{marker}")

best_est = denoise(y, best_params, ctx)
best_m = metrics(x.as_real(), best_est.as_real())
print(f"\nselected lam={best_lam:g}: mse {best_m.mse:.4f} vs noisy {noisy_mse:.4f} "
      f"({100 * (1 - best_m.mse / noisy_mse):.0f}% lower), psnr {best_m.psnr:.2f} dB, "
      f"ssim {best_m.ssim:.4f}")
