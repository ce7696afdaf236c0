"""Finite differences and moduli of smoothness by certified grid search.

All maximization here is done on fixed lattices followed by local
golden-section refinement, so every reported value is a certified lower
bound on the true supremum.  Ratios that divide by one of these values
therefore over-estimate conservatively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "InvalidOrder",
    "ModulusResult",
    "ModulusProfile",
    "finite_difference",
    "modulus",
    "modulus_lower_bound",
    "one_sided_modulus",
]

MAX_ORDER = 8  # binomial coefficients exact in float up to here

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class InvalidOrder(ValueError):
    """Difference order outside 1..MAX_ORDER."""


def _check_order(k: int) -> int:
    k = int(k)
    if k < 1 or k > MAX_ORDER:
        raise InvalidOrder(f"difference order must be in 1..{MAX_ORDER}, got {k}")
    return k


@dataclass(frozen=True)
class ModulusResult:
    value: float
    arg_u: float
    arg_x: float
    grid_density: int


def _weights(k: int) -> np.ndarray:
    return np.array([(-1.0) ** i * math.comb(k, i) for i in range(k + 1)])


def finite_difference(f, k: int, u: float, x: float, interval) -> float:
    """Symmetric k-th difference with step u centered at x.

    Returns 0 when x +- (k/2)u leaves the interval; evaluation points are
    clamped onto the interval to protect endpoint-singular oracles from
    rounding spill.
    """
    k = _check_order(k)
    a, b = float(interval[0]), float(interval[1])
    u = float(u)
    x = float(x)
    slack = 1e-12 * max(1.0, abs(a), abs(b))
    if x - 0.5 * k * u < a - slack or x + 0.5 * k * u > b + slack:
        return 0.0
    pts = x + (0.5 * k - np.arange(k + 1)) * u
    np.clip(pts, a, b, out=pts)
    return float(_weights(k) @ np.asarray(f(pts), dtype=float))


def _row_max(f, k, weights, u, a, b, grid, focus=()):
    """max over x of |delta^k_u| for one admissible step u.

    ``focus`` points (known kinks of f) get a dense extra window of centers:
    the difference of a corner term is supported within k*u of it, which a
    coarse global lattice can step right over.
    """
    lo = a + 0.5 * k * u
    hi = b - 0.5 * k * u
    if hi < lo:
        return 0.0, 0.5 * (a + b)
    xs = np.linspace(lo, hi, grid)
    if focus:
        extra = [np.linspace(max(lo, p - k * u), min(hi, p + k * u), 65)
                 for p in focus if lo - k * u <= p <= hi + k * u]
        if extra:
            xs = np.concatenate([xs] + extra)
    acc = np.zeros_like(xs)
    for i in range(k + 1):
        pts = xs + (0.5 * k - i) * u
        np.clip(pts, a, b, out=pts)
        acc += weights[i] * np.asarray(f(pts), dtype=float)
    j = int(np.argmax(np.abs(acc)))
    return float(abs(acc[j])), float(xs[j])


def _golden_max(fun, lo, hi, iters=32):
    """Golden-section maximization of fun on [lo, hi]; returns (best_t, best_v)."""
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc, fd = fun(c), fun(d)
    for _ in range(iters):
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = fun(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = fun(d)
    return (c, fc) if fc >= fd else (d, fd)


def modulus(f, k: int, t: float, interval, grid: int = 512) -> ModulusResult:
    """sup over steps u in (0, t] and admissible centers of |delta^k_u f|.

    Lattice search over a grid x grid (u, x) mesh, then one local
    golden-section refinement around the discrete argmax (first in u with the
    center fixed, then in the center).  The result never exceeds the true sup.
    """
    k = _check_order(k)
    if grid < 64:
        raise ValueError(f"grid must be >= 64, got {grid}")
    a, b = float(interval[0]), float(interval[1])
    t_eff = min(float(t), (b - a) / k)
    if t_eff <= 0.0 or b <= a:
        return ModulusResult(0.0, 0.0, 0.5 * (a + b), grid)

    w = _weights(k)
    best_v, best_u, best_x = 0.0, t_eff, 0.5 * (a + b)
    us = t_eff * np.arange(1, grid + 1) / grid
    for u in us:
        v, x = _row_max(f, k, w, float(u), a, b, grid)
        if v > best_v:
            best_v, best_u, best_x = v, float(u), x

    # refine u around the lattice argmax, center pinned
    du = t_eff / grid
    u_lo = max(best_u - du, t_eff / (10 * grid))
    u_hi = min(best_u + du, t_eff)

    def by_u(u):
        return abs(finite_difference(f, k, u, best_x, (a, b)))

    u_ref, v_ref = _golden_max(by_u, u_lo, u_hi)
    if v_ref > best_v:
        best_v, best_u = v_ref, u_ref

    # then refine the center at the (possibly updated) step
    lo = a + 0.5 * k * best_u
    hi = b - 0.5 * k * best_u
    if hi > lo:
        dx = (hi - lo) / max(grid - 1, 1)
        x_lo = max(best_x - dx, lo)
        x_hi = min(best_x + dx, hi)
        if x_hi > x_lo:
            def by_x(x):
                return abs(finite_difference(f, k, best_u, x, (a, b)))

            x_ref, v_ref = _golden_max(by_x, x_lo, x_hi)
            if v_ref > best_v:
                best_v, best_x = v_ref, x_ref

    return ModulusResult(best_v, best_u, best_x, grid)


def modulus_lower_bound(f, k: int, t: float, interval, grid: int = 2048,
                        columns: int = 16, focus=()) -> float:
    """Cheap single-step lower bound: max over a few step columns u = t j/cols
    of the dense-in-x row maximum.  Used for one-off denominator queries."""
    k = _check_order(k)
    a, b = float(interval[0]), float(interval[1])
    t = min(float(t), (b - a) / k)
    if t <= 0 or b <= a:
        return 0.0
    w = _weights(k)
    best = 0.0
    for j in range(1, columns + 1):
        v, _ = _row_max(f, k, w, t * j / columns, a, b, grid, focus)
        best = max(best, v)
    return best


def one_sided_modulus(f, k: int, x: float, interval, side: str, grid: int = 512) -> float:
    """Composite one-sided modulus at x: min over orders m <= k of the m-th
    modulus at the distance-scaled step (d)^(1/m) (b-a)^((m-1)/m), where d is
    the distance from x to the interval end selected by ``side``."""
    k = _check_order(k)
    a, b = float(interval[0]), float(interval[1])
    x = float(x)
    if not (a - 1e-12 <= x <= b + 1e-12):
        raise ValueError(f"x={x} outside [{a}, {b}]")
    d = (x - a) if side == "left" else (b - x)
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    d = max(d, 0.0)
    length = b - a
    best = math.inf
    for m in range(1, k + 1):
        step = d ** (1.0 / m) * length ** ((m - 1.0) / m)
        best = min(best, modulus(f, m, step, (a, b), grid).value)
    return best


class ModulusProfile:
    """Reusable modulus evaluator for many step queries against one (f, k).

    Precomputes sup_x |delta^k_u| over a ladder of steps; a query at t takes
    the cumulative max over ladder steps <= t and sharpens it with a handful
    of exact columns at fractions of t itself.  Ladder may be linear or
    log-spaced.  Values are certified lower bounds of the modulus.
    """

    def __init__(self, f, k: int, interval, t_max: float, grid: int = 2048,
                 log_spaced: bool = False, t_min: float | None = None,
                 columns: int = 16, focus=()):
        self.f = f
        self.k = _check_order(k)
        self.a, self.b = float(interval[0]), float(interval[1])
        self.grid = int(grid)
        self.columns = int(columns)
        self.focus = tuple(float(p) for p in focus)
        self._w = _weights(self.k)
        u_adm = (self.b - self.a) / self.k
        t_max = min(float(t_max), u_adm)
        if t_max <= 0:
            self.us = np.array([])
            self.cummax = np.array([])
            return
        if log_spaced:
            lo = max(t_min if t_min else t_max / grid, t_max * 1e-12)
            self.us = np.geomspace(lo, t_max, grid)
        else:
            self.us = t_max * np.arange(1, grid + 1) / grid
        sup = np.empty_like(self.us)
        for i, u in enumerate(self.us):
            sup[i], _ = _row_max(self.f, self.k, self._w, float(u),
                                 self.a, self.b, self.grid, self.focus)
        self.cummax = np.maximum.accumulate(sup)

    def value(self, t: float) -> float:
        t = min(float(t), (self.b - self.a) / self.k)
        if t <= 0 or self.us.size == 0:
            return 0.0
        idx = np.searchsorted(self.us, t, side="right") - 1
        ladder = float(self.cummax[idx]) if idx >= 0 else 0.0
        fresh = modulus_lower_bound(self.f, self.k, t, (self.a, self.b),
                                    grid=self.grid, columns=self.columns,
                                    focus=self.focus)
        return max(ladder, fresh)
