"""The full construction: normalize, blocks, sigma, tangent-line blend.

construct_chebyshev computes the admissible threshold N for the function,
refuses smaller n, and otherwise returns the convex spline together with a
trace of every quantity the gluing used.
"""

import numpy as np

from convexlab import (
    NBelowThreshold,
    chebyshev_threshold,
    construct_chebyshev,
    exp_oracle,
    polygonal_baseline,
    truncpow_oracle,
    verify_convexity,
)

f = exp_oracle(1.0)
N, H = chebyshev_threshold(f, 1)
print(f"exp, r = 1: H = {H:.4f}, N_threshold = {N}")

S, trace, _ = construct_chebyshev(f, 1, 64)
xs = np.linspace(-1, 1, 4001)
print(f"n = 64: max |f - s| = {np.max(np.abs(f(xs) - S(xs))):.3e}")
print(f"  trace: M = {trace.M:.4f}, x* = {trace.x_star:.4f}, "
      f"H1 = {trace.H1:.4f}, case {trace.case}, lambda = {trace.lambda_:.9f}")
print(f"  defects: delta = {trace.delta:+.2e}, delta~ = {trace.delta_tilde:+.2e}")
print(f"  certified convex: {verify_convexity(S).convex}")

print("\nendpoint derivative interpolation (r = 1):")
for nu in (0, 1):
    print(f"  s^({nu})(-1) - f^({nu})(-1) = "
          f"{S.deriv_value(-1.0, nu, '+') - float(f.deriv(nu, -1.0)):+.2e}")

print("\nthe corner family refuses coarse partitions:")
g = truncpow_oracle(1, 0.01)
try:
    construct_chebyshev(g, 1, 32)
except NBelowThreshold as exc:
    print(f"  eps = 0.01 at n = 32: refused, N_threshold = {exc.n_threshold}")

print("\norder-2 baseline for comparison (piecewise linear, always admissible):")
P = polygonal_baseline(f, 64)
print(f"  max |f - baseline| = {np.max(np.abs(f(xs) - P(xs))):.3e} "
      f"(vs {np.max(np.abs(f(xs) - S(xs))):.3e} for the order-3 spline)")
