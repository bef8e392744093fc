#!/usr/bin/env python3
"""Tour of the four separable transform families and their defining
identities.

Every family acts on an n1 x n2 signal as Xhat = F_row X F_col^T with two
unitary factor operators; they differ in where the temporal (column) operator
comes from:

    gfrft2d   one shared fractional order on both graph factors
    gbfrft2d  independent fractional orders per graph factor
    jfrft     graph order spatially, DFRFT temporally
    gcgfrft   geodesic interpolation between the two temporal bases

The script verifies, on a random signal: unitarity (Parseval), order
additivity, invertibility, the degeneracy chain connecting the families, and
the vec-Kronecker identity against an explicitly materialized big operator.
"""

import numpy as np

from fracspec import (
    TimeVertexSignal,
    TransformContext,
    dfrft_matrix,
    forward,
    inverse,
    knn_graph,
    path_graph,
    random_planar_points,
)

rng = np.random.default_rng(0)
n1, n2 = 8, 6
ctx = TransformContext(knn_graph(random_planar_points(n1, seed=1), 3), path_graph(n2))
x = TimeVertexSignal(rng.standard_normal((n1, n2)))

print("family      Parseval drift   round-trip error")
for family, orders, lam in [
    ("gfrft2d", (0.6,), None),
    ("gbfrft2d", (0.6, 0.3), None),
    ("jfrft", (0.6, 0.3), None),
    ("gcgfrft", (0.6, 0.3), 0.4),
]:
    plan = ctx.plan(family, orders, lam=lam)
    xh = forward(plan, x)
    back = inverse(plan, xh)
    print(f"{family:10s}  {abs(xh.norm - x.norm):14.2e}   "
          f"{np.abs(back.data - x.data).max():.2e}")

# order additivity: applying (a1,a2) then (b1,b2) equals (a1+b1, a2+b2)
two = forward(ctx.plan("gbfrft2d", (0.5, -0.2)), forward(ctx.plan("gbfrft2d", (0.6, 0.3)), x))
one = forward(ctx.plan("gbfrft2d", (1.1, 0.1)), x)
print(f"\n2-D order additivity deviation: {np.abs(two.data - one.data).max():.2e}")

# degeneracy chain: shared order <- tied independent orders; the geodesic
# family recovers the decoupled and joint families at its endpoints
a, b = 0.7, 0.35
pairs = [
    ("gbfrft2d(a,a) == gfrft2d(a)",
     forward(ctx.plan("gbfrft2d", (a, a)), x), forward(ctx.plan("gfrft2d", (a,)), x)),
    ("gcgfrft(lam=0) == gbfrft2d",
     forward(ctx.plan("gcgfrft", (a, b), lam=0.0), x), forward(ctx.plan("gbfrft2d", (a, b)), x)),
    ("gcgfrft(lam=1) == jfrft",
     forward(ctx.plan("gcgfrft", (a, b), lam=1.0), x), forward(ctx.plan("jfrft", (a, b)), x)),
]
for label, got, want in pairs:
    print(f"{label}: {np.abs(got.data - want.data).max():.2e}")

# the separable evaluation never forms the (n1 n2) x (n1 n2) operator; the
# vec identity ties it to the explicit Kronecker product at small sizes
plan = ctx.plan("gcgfrft", (a, b), lam=0.4)
big = np.kron(plan.col_op.matrix, plan.row_op.matrix)
vec = (big @ x.data.ravel(order="F")).reshape((n1, n2), order="F")
print(f"\nvec-Kronecker identity deviation: "
      f"{np.abs(vec - forward(plan, x).data).max():.2e}")

# the DFRFT reduces to the unitary DFT at order 1
m = np.arange(n2)
dft = np.exp(-2j * np.pi * np.outer(m, m) / n2) / np.sqrt(n2)
print(f"dfrft(order=1) vs DFT: {np.abs(dfrft_matrix(n2, 1.0).matrix - dft).max():.2e}")
