"""Chebyshev partitions, the pointwise weight rho_n, and moduli of smoothness.

The knots -cos(j pi / n) crowd quadratically toward the interval ends, and
their local mesh size tracks the weight rho_n(x) = sqrt(1-x^2)/n + 1/n^2.
Everything downstream rides on that comparability.
"""

import numpy as np

from convexlab import chebyshev_partition, exp_oracle, modulus, one_sided_modulus, rho

n = 16
T = chebyshev_partition(n)
print(f"Chebyshev partition, n = {n}")
print("  first three knots:", np.round(T.knots[:3], 6))
print("  end gap 1 + t_1  =", f"{T.knots[1] + 1:.6e}",
      " (= 2 sin^2(pi/2n) =", f"{2 * np.sin(np.pi / (2 * n)) ** 2:.6e})")

print("\nmesh length vs rho_n at interval midpoints (interior intervals):")
for j in (2, n // 2, n - 1):
    lo, hi = T.interval(j)
    mid = 0.5 * (lo + hi)
    print(f"  j = {j:2d}: length = {hi - lo:.4f}, rho_n(mid) = {rho(n, mid):.4f}, "
          f"ratio = {(hi - lo) / rho(n, mid):.2f}")

f = exp_oracle(1.0)
print("\nsecond-order modulus of exp on [-1, 1] (certified lower bounds):")
for t in (0.1, 0.5, 1.0):
    res = modulus(f, 2, t, (-1, 1))
    print(f"  omega_2(exp, {t:.1f}) = {res.value:.6f} at step {res.arg_u:.4f}, "
          f"center {res.arg_x:+.4f}")

print("\ncomposite one-sided modulus at interior points (order 2):")
for x in (-0.99, 0.0, 0.99):
    v = one_sided_modulus(f, 2, x, (-1, 1), "left")
    print(f"  x = {x:+.2f}: {v:.6f}")
print("the left composite modulus vanishes as x approaches the left end,")
print("which is what lets the error bounds vanish there too.")
