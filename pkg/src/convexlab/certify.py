"""Numerical certification: pointwise bound reports, convexity verification,
n-sweeps, and the arithmetic witnesses behind the impossibility results.

Every estimate is checked as a ratio |f - S| / bound on a fixed grid.  The
moduli in denominators are certified lower bounds, so ratios over-estimate
conservatively; points where either side sits below the float noise floor are
excluded and reported as satisfied-degenerate.
"""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass

import numpy as np

from convexlab.domain import ConvexOracle, chebyshev_partition, phi
from convexlab.glue import chebyshev_threshold, construct_chebyshev
from convexlab.piecewise import PiecewisePoly
from convexlab.smoothness import ModulusProfile, modulus_lower_bound

__all__ = [
    "BOUND_IDS",
    "MismatchedInputs",
    "BoundReport",
    "ConvexityReport",
    "CounterexampleWitness",
    "SweepTable",
    "verify_convexity",
    "pointwise_bound_report",
    "sweep",
    "counterexample_witness",
    "polynomial_counterexample",
    "threshold_growth",
]

BOUND_IDS = ("2.3", "2.4", "2.5", "2.11", "2.12", "2.13")

CERTIFICATION_DENSITY = 2048
DEFAULT_GRID_SIZE = 257
DENOM_FLOOR = 1e-300
ATOL_REL = 1e-10      # bound-zero exclusion threshold, relative to the value scale
NOISE_REL = 1e-13     # below this the error is float noise and cannot be ratioed


class MismatchedInputs(ValueError):
    """The spline was not built for the (function, r, n) being certified."""


@dataclass(frozen=True)
class BoundReport:
    bound_id: str
    grid: list            # rows (x, |f-S|(x), bound(x), ratio)
    sup_ratio: float
    excluded_points: list  # rows (x, |f-S|(x)), satisfied-degenerate

    def to_json_dict(self) -> dict:
        return {
            "bound_id": self.bound_id,
            "grid": [list(row) for row in self.grid],
            "sup_ratio": self.sup_ratio,
            "excluded_points": [list(row) for row in self.excluded_points],
        }


@dataclass(frozen=True)
class ConvexityReport:
    convex: bool
    piece_certificates: list
    slopes_ok: bool
    offending_pieces: list

    def to_json_dict(self) -> dict:
        return {
            "convex": self.convex,
            "slopes_ok": self.slopes_ok,
            "offending_pieces": list(self.offending_pieces),
            "piece_min_second_derivative": [
                c.min_second_derivative for c in self.piece_certificates],
        }


def verify_convexity(S: PiecewisePoly) -> ConvexityReport:
    """Exact per-piece certificates plus one-sided knot slope monotonicity."""
    certs = S.piece_certificates()
    offending = [i for i, c in enumerate(certs) if not c.convex]
    slope_tol = 1e-9 * S.slope_scale()
    flat = [s for pair in S.knot_slopes() for s in pair]
    slopes_ok = all(s2 >= s1 - slope_tol for s1, s2 in zip(flat, flat[1:]))
    return ConvexityReport(
        convex=not offending and slopes_ok,
        piece_certificates=certs,
        slopes_ok=slopes_ok,
        offending_pieces=offending,
    )


def _open_chebyshev(lo: float, hi: float, m: int) -> np.ndarray:
    j = np.arange(1, m + 1)
    return 0.5 * (lo + hi) - 0.5 * (hi - lo) * np.cos(np.pi * j / (m + 1))


def _strip_grid(n: int, m: int) -> np.ndarray:
    """Points in [-1, -1+n^-2] u [1-n^-2, 1], open at the exact endpoints."""
    w = 1.0 / (n * n)
    half = max(m // 2, 8)
    left = _open_chebyshev(-1.0, -1.0 + w, half)
    right = _open_chebyshev(1.0 - w, 1.0, half)
    return np.concatenate([left, right])


def _assemble_report(bound_id, xs, errs, bounds, scale) -> BoundReport:
    atol = ATOL_REL * scale
    noise = NOISE_REL * scale
    rows, excluded = [], []
    sup_ratio = 0.0
    for x, err, bnd in zip(xs, errs, bounds):
        x, err, bnd = float(x), float(err), float(bnd)
        if err <= noise or (bnd <= DENOM_FLOOR and err <= atol):
            excluded.append((x, err))
            continue
        ratio = err / max(bnd, DENOM_FLOOR)
        rows.append((x, err, bnd, ratio))
        sup_ratio = max(sup_ratio, ratio)
    return BoundReport(bound_id, rows, sup_ratio, excluded)


def pointwise_bound_report(f: ConvexOracle, S: PiecewisePoly, r: int, n: int,
                           bound_id: str, grid_size: int = DEFAULT_GRID_SIZE,
                           density: int = CERTIFICATION_DENSITY) -> BoundReport:
    """Evaluate one pointwise estimate as |f-S| / bound over its own region.

    Interior bounds use the full interval, the endpoint variants are
    restricted to the strips of width n^-2, and the per-interval forms to the
    first/last/interior intervals respectively.  Exact endpoints, where both
    sides vanish by interpolation, are excluded up front.
    """
    if bound_id not in BOUND_IDS:
        raise ValueError(f"unknown bound id {bound_id!r}; choose from {BOUND_IDS}")
    expected = chebyshev_partition(n)
    if S.knots.size != expected.knots.size or \
            not np.allclose(S.knots, expected.knots, atol=1e-12, rtol=0):
        raise MismatchedInputs(f"spline knots are not the n={n} Chebyshev partition")

    fr = f.deriv_fn(r)
    kinks = tuple(f.nonsmooth)
    knots = S.knots
    x1 = float(knots[1])
    xn1 = float(knots[-2])

    def densify(xs, lo, hi):
        # a kink interval's worst error can peak between coarse grid points;
        # add a dense window spanning a few mesh lengths around each kink
        extra = []
        for p in kinks:
            w = 3.0 * math.pi * max(phi(p), 1.0 / n) / n
            wlo, whi = max(lo, p - w), min(hi, p + w)
            if whi > wlo:
                extra.append(np.linspace(wlo, whi, 65))
        if not extra:
            return xs
        return np.sort(np.concatenate([xs] + extra))

    if bound_id == "2.3":
        xs = densify(_open_chebyshev(-1.0, 1.0, grid_size), -1.0, 1.0)
        ts = phi(xs) / n
        prof = ModulusProfile(fr, 2, (-1.0, 1.0), t_max=float(np.max(ts)),
                              grid=density, log_spaced=True, columns=6,
                              t_min=0.5 * float(np.min(ts[ts > 0])), focus=kinks)
        bounds = ts ** r * np.array([prof.value(t) for t in ts])
    elif bound_id == "2.4":
        xs = _strip_grid(n, grid_size)
        ts = phi(xs) / n
        prof = ModulusProfile(fr, 2, (-1.0, 1.0), t_max=float(np.max(ts)),
                              grid=density, log_spaced=True, columns=6,
                              t_min=0.5 * float(np.min(ts[ts > 0])), focus=kinks)
        bounds = phi(xs) ** (2 * r) * np.array([prof.value(t) for t in ts])
    elif bound_id == "2.5":
        xs = _strip_grid(n, grid_size)
        ts = phi(xs) ** 2
        prof = ModulusProfile(fr, 1, (-1.0, 1.0), t_max=float(np.max(ts)),
                              grid=density, log_spaced=True, columns=6,
                              t_min=0.5 * float(np.min(ts[ts > 0])), focus=kinks)
        bounds = phi(xs) ** (2 * r) * np.array([prof.value(t) for t in ts])
    elif bound_id in ("2.11", "2.12"):
        if bound_id == "2.11":
            lo, hi = -1.0, x1
            dist = lambda x: x - lo
        else:
            lo, hi = xn1, 1.0
            dist = lambda x: hi - x
        h = hi - lo
        xs = densify(_open_chebyshev(lo, hi, grid_size), lo, hi)
        om1 = ModulusProfile(fr, 1, (lo, hi), t_max=h, grid=density,
                             columns=6, focus=kinks)
        om2 = ModulusProfile(fr, 2, (lo, hi), t_max=h, grid=density,
                             columns=6, focus=kinks)
        bounds = np.array([
            dist(float(x)) ** r * min(om1.value(dist(float(x))),
                                      om2.value(math.sqrt(dist(float(x)) * h)))
            for x in xs])
    else:  # 2.13: interior intervals with the three-term right side
        end_left = (x1 - (-1.0)) ** r * modulus_lower_bound(
            fr, 2, x1 + 1.0, (-1.0, x1), grid=density, focus=kinks)
        end_right = (1.0 - xn1) ** r * modulus_lower_bound(
            fr, 2, 1.0 - xn1, (xn1, 1.0), grid=density, focus=kinks)
        xs = densify(_open_chebyshev(x1, xn1, grid_size), x1, xn1)
        idx = np.clip(np.searchsorted(knots, xs, side="right") - 1, 1, n - 2)
        term = {}
        bounds = np.empty_like(xs)
        for i, (x, j) in enumerate(zip(xs, idx)):
            j = int(j)
            if j not in term:
                lo, hi = float(knots[j]), float(knots[j + 1])
                term[j] = (hi - lo) ** r * modulus_lower_bound(
                    fr, 2, hi - lo, (lo, hi), grid=density, focus=kinks)
            bounds[i] = term[j] + end_left + end_right

    fx = np.asarray(f(xs), dtype=float)
    errs = np.abs(fx - S(xs))
    scale = 1.0 + float(np.max(np.abs(fx)))
    return _assemble_report(bound_id, xs, errs, bounds, scale)


@dataclass(frozen=True)
class SweepTable:
    function: str
    r: int
    n_threshold: int
    rows: list  # dicts: n, computed, sup ratios by bound id, wall_ms

    CSV_FIELDS = ("n", "N_threshold", "sup_ratio_2_3", "sup_ratio_2_4",
                  "sup_ratio_2_5", "sup_ratio_2_11", "sup_ratio_2_12",
                  "sup_ratio_2_13", "wall_ms")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.CSV_FIELDS)
        for row in self.rows:
            if row["computed"]:
                cells = [row["n"], self.n_threshold]
                cells += [repr(row["sup_ratio"][b]) for b in BOUND_IDS]
                cells.append(row["wall_ms"])
            else:
                cells = [row["n"], self.n_threshold] + [""] * len(BOUND_IDS) + [0]
            w.writerow(cells)
        return buf.getvalue()


def sweep(f: ConvexOracle, r: int, n_list, grid_size: int = DEFAULT_GRID_SIZE,
          density: int = CERTIFICATION_DENSITY, timing: bool = False,
          c0: float | None = None) -> SweepTable:
    """One row per n: construction plus all six sup-ratios.

    Rows with n below the threshold are flagged, not computed.  Timing is off
    by default so repeated runs emit byte-identical CSV.
    """
    kwargs = {} if c0 is None else {"c0": c0}
    n_threshold, _ = chebyshev_threshold(f, r, **kwargs)
    rows = []
    for n in n_list:
        n = int(n)
        if n < n_threshold:
            rows.append({"n": n, "computed": False, "sup_ratio": {}, "wall_ms": 0})
            continue
        t0 = time.perf_counter()
        S, trace, _ = construct_chebyshev(f, r, n, **kwargs)
        ratios = {b: pointwise_bound_report(f, S, r, n, b, grid_size, density).sup_ratio
                  for b in BOUND_IDS}
        wall = int(round(1e3 * (time.perf_counter() - t0))) if timing else 0
        rows.append({"n": n, "computed": True, "sup_ratio": ratios, "wall_ms": wall})
    return SweepTable(f.label(), r, n_threshold, rows)


@dataclass(frozen=True)
class CounterexampleWitness:
    """The Markov-inequality chain that rules out convex spline approximants
    with endpoint-forced interpolation when the corner is sharp enough."""

    r: int
    m: int
    x_last: float
    epsilon: float
    markov_lhs: float       # (r+1) eps^r, the forced derivative at 1
    markov_rhs: float       # 2 (m-1)^2 / (1 - x_last) * eps^(r+1), the Markov cap
    contradiction: bool
    epsilon_threshold: float

    def to_json_dict(self) -> dict:
        return {
            "r": self.r, "m": self.m, "x_last": self.x_last,
            "epsilon": self.epsilon,
            "markov_lhs": self.markov_lhs, "markov_rhs": self.markov_rhs,
            "contradiction": self.contradiction,
            "epsilon_threshold": self.epsilon_threshold,
        }


def counterexample_witness(r: int, m: int, x_last: float,
                           epsilon="auto") -> CounterexampleWitness:
    """Certify the negative result for splines of order m on [x_last, 1].

    The forced data is s(1) = eps^(r+1), s'(1) = (r+1) eps^r with
    ||s|| = eps^(r+1) on the last interval; Markov caps s'(1) by
    2 (m-1)^2 / (1 - x_last) * eps^(r+1).  The chain contradicts itself
    exactly when eps < (r+1)(1 - x_last) / (2 (m-1)^2).
    """
    r, m = int(r), int(m)
    x_last = float(x_last)
    if r < 1 or m < 1:
        raise ValueError("need r, m >= 1")
    if not -1.0 < x_last < 1.0:
        raise ValueError("x_last must lie in (-1, 1)")
    markov_factor = 2.0 * (m - 1) ** 2 / (1.0 - x_last)
    threshold = (r + 1.0) / markov_factor if markov_factor > 0 else math.inf
    eps = 0.5 * threshold if epsilon == "auto" else float(epsilon)
    lhs = (r + 1.0) * eps ** r
    rhs = markov_factor * eps ** (r + 1)
    return CounterexampleWitness(
        r=r, m=m, x_last=x_last, epsilon=eps,
        markov_lhs=lhs, markov_rhs=rhs,
        contradiction=bool(eps < threshold),
        epsilon_threshold=threshold,
    )


def polynomial_counterexample(r: int, n: int) -> dict:
    """Degree-n polynomial variant: with eps = n^-2 the forced derivative
    exceeds the Markov cap n^2 ||s|| by the factor r+1 for every n."""
    r, n = int(r), int(n)
    if r < 1 or n < 1:
        raise ValueError("need r, n >= 1")
    eps = 1.0 / (n * n)
    lhs = (r + 1.0) * eps ** r
    rhs = n * n * eps ** (r + 1)
    return {"r": r, "n": n, "epsilon": eps, "markov_lhs": lhs,
            "markov_rhs": rhs, "ratio": lhs / rhs}


def threshold_growth(r: int, eps_list, family="truncpow",
                     c0: float | None = None) -> dict:
    """N_threshold as the corner parameter sharpens; the column must be
    nondecreasing as eps decreases."""
    from convexlab.domain import truncpow_oracle

    if family != "truncpow":
        raise ValueError(f"unsupported family {family!r}")
    eps_list = [float(e) for e in eps_list]
    if any(e2 >= e1 for e1, e2 in zip(eps_list, eps_list[1:])):
        raise ValueError("eps_list must be strictly decreasing")
    kwargs = {} if c0 is None else {"c0": c0}
    rows = []
    for eps in eps_list:
        n_thr, h = chebyshev_threshold(truncpow_oracle(r, eps), r, **kwargs)
        rows.append({"eps": eps, "N_threshold": n_thr, "H": h})
    col = [row["N_threshold"] for row in rows]
    return {
        "family": family,
        "r": r,
        "rows": rows,
        "nondecreasing": all(b >= a for a, b in zip(col, col[1:])),
    }
