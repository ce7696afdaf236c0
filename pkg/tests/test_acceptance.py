"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines as they complete.  Criteria 2 and 3 share one set of constructions;
the build time of that shared fixture is charged to criterion 2's budget.
"""

import math
import time

import numpy as np
import pytest

from convexlab.certify import (
    BOUND_IDS,
    counterexample_witness,
    polynomial_counterexample,
    sweep,
    threshold_growth,
    verify_convexity,
)
from convexlab.cli import main as cli_main
from convexlab.domain import (
    cosh_oracle,
    even_power_oracle,
    exp_oracle,
    f0_oracle,
    poly_oracle,
    truncpow_oracle,
)
from convexlab.glue import chebyshev_threshold, construct_chebyshev
from convexlab.smoothness import modulus, one_sided_modulus
from helpers import (
    direct_block_ratio,
    integrated_block_ratio,
    mirrored_direct_block_ratio,
)

# criterion 2/3/4 oracle suite: (oracle, construction order r)
SUITE = [
    (exp_oracle(1.0), 1), (exp_oracle(1.0), 2),
    (cosh_oracle(1.0), 1), (cosh_oracle(1.0), 2),
    (even_power_oracle(2), 1), (even_power_oracle(2), 2),
    (f0_oracle(1), 1), (f0_oracle(2), 2),
    (truncpow_oracle(1, 0.1), 1), (truncpow_oracle(2, 0.1), 2),
    (truncpow_oracle(1, 0.01), 1), (truncpow_oracle(2, 0.01), 2),
]

# criterion 1 family: convex polynomials of degree <= r+1, shaped so the
# admissibility threshold stays below n = 8
REPRODUCTION_FAMILY = {
    1: [poly_oracle([0.0, 0.0, 1.0]), poly_oracle([0.3, 0.5, 1.0])],
    2: [poly_oracle([0.0, 0.0, 1.0, 0.1]), poly_oracle([0.2, -0.4, 1.0, 0.05])],
    3: [poly_oracle([0.0, 0.0, 1.0, 0.0, 0.1]),
        poly_oracle([0.1, 0.2, 1.0, 0.05, 0.2])],
}


def _report(criterion, ok, detail=""):
    print(f"[criterion {criterion}] {'PASS' if ok else 'FAIL'}"
          + (f" — {detail}" if detail else ""))
    assert ok, f"criterion {criterion}: {detail}"


@pytest.fixture(scope="module")
def suite_splines():
    """(oracle, r) -> list of (n, spline, trace) for n in {N, 2N, 4N}."""
    t0 = time.perf_counter()
    built = {}
    for f, r in SUITE:
        n_thr, _ = chebyshev_threshold(f, r)
        runs = []
        for mult in (1, 2, 4):
            n = max(mult * n_thr, 3)
            S, trace, _ = construct_chebyshev(f, r, n)
            runs.append((n, S, trace))
        built[(f.label(), r)] = (f, r, runs)
    return built, time.perf_counter() - t0


def test_criterion_1_reproduction():
    t0 = time.perf_counter()
    worst = 0.0
    xs = np.linspace(-1.0, 1.0, 4097)
    for r, family in REPRODUCTION_FAMILY.items():
        for f in family:
            n_thr, _ = chebyshev_threshold(f, r)
            assert n_thr <= 8, (f.label(), r, n_thr)
            fx = np.asarray(f(xs))
            scale = float(np.max(np.abs(fx)))
            for n in (8, 32, 128):
                S, _, _ = construct_chebyshev(f, r, n)
                worst = max(worst, float(np.max(np.abs(fx - S(xs)))) / scale)
    elapsed = time.perf_counter() - t0
    _report(1, worst <= 1e-9 and elapsed < 5.0,
            f"max relative error {worst:.2e}, {elapsed:.1f}s")


def test_criterion_2_shape(suite_splines):
    built, build_time = suite_splines
    t0 = time.perf_counter()
    all_ok = True
    for f, r, runs in built.values():
        for n, S, _ in runs:
            rep = verify_convexity(S)
            cont = S.is_continuous(rel_tol=1e-9)
            if not (rep.convex and cont and S.convex_certified):
                all_ok = False
    elapsed = build_time + (time.perf_counter() - t0)
    _report(2, all_ok and elapsed < 60.0,
            f"{sum(len(rs) for _, _, rs in built.values())} splines convex "
            f"and continuous, {elapsed:.1f}s")


def test_criterion_3_endpoint_matching(suite_splines):
    built, _ = suite_splines
    worst = 0.0
    for f, r, runs in built.values():
        for n, S, _ in runs:
            for x, side in ((-1.0, "+"), (1.0, "-")):
                for nu in range(r + 1):
                    want = float(f.deriv(nu, x))
                    got = S.deriv_value(x, nu, side)
                    rel = abs(got - want) / max(1.0, abs(want))
                    worst = max(worst, rel)
    _report(3, worst <= 1e-8, f"worst endpoint derivative mismatch {worst:.2e}")


_CRIT4_BUDGET = [600.0]  # shared wall budget, decremented per member


@pytest.mark.parametrize("f,r", SUITE, ids=[f"{f.label()}-r{r}" for f, r in SUITE])
def test_criterion_4_bound_boundedness(f, r, tmp_path_factory):
    t0 = time.perf_counter()
    tab = sweep(f, r, [32, 64, 128, 256])
    safe = f.label().replace(":", "_").replace(",", "_")
    (tmp_path_factory.mktemp("sweeps") / f"{safe}_r{r}.csv").write_text(tab.to_csv())
    ratios = {row["n"]: row["sup_ratio"] for row in tab.rows if row["computed"]}

    problems = []
    for n, by_bound in ratios.items():
        for b in BOUND_IDS:
            if not math.isfinite(by_bound[b]):
                problems.append(f"non-finite sup_ratio({b}) at n={n}")
    growth = None
    if 64 in ratios and 256 in ratios:
        r64, r256 = ratios[64]["2.3"], ratios[256]["2.3"]
        growth = f"2.3: ratio(256)={r256:.4f} vs 1.5*ratio(64)={1.5 * r64:.4f}"
        if not r256 <= 1.5 * r64 + 1e-9:
            # known to be phase-unstable for corner oracles; see the ledger
            problems.append("growth " + growth)
    elapsed = time.perf_counter() - t0
    _CRIT4_BUDGET[0] -= elapsed
    ok = not problems and _CRIT4_BUDGET[0] > 0.0
    _report(f"4:{f.label()},r={r}", ok,
            (growth or "growth pair below threshold; finiteness only")
            + f", {elapsed:.0f}s" if not problems else "; ".join(problems))


def test_criterion_5_block_ratios_and_moduli():
    # block-error ratios stable under h-halving
    ok = True
    for f, r in [(exp_oracle(1.0), 1), (exp_oracle(1.0), 2), (f0_oracle(1), 1),
                 (f0_oracle(2), 2), (cosh_oracle(1.5), 3)]:
        r0 = integrated_block_ratio(f, r, -1.0, 0.4)
        r1 = integrated_block_ratio(f, r, -1.0, 0.2)
        ok &= math.isfinite(r0) and r1 <= 1.5 * r0 + 1e-9
        d0 = direct_block_ratio(f, r, -1.0, 0.5)
        d1 = direct_block_ratio(f, r, -1.0, 0.25)
        ok &= math.isfinite(d0) and d1 <= 1.5 * d0 + 1e-9
        m0 = mirrored_direct_block_ratio(f, r, 1.0, 0.5)
        m1 = mirrored_direct_block_ratio(f, r, 1.0, 0.25)
        ok &= math.isfinite(m0) and m1 <= 1.5 * m0 + 1e-9

    # randomized moduli inequalities at 1.05x grid slack
    rng = np.random.default_rng(2024)
    oracles = [exp_oracle(1.0), cosh_oracle(1.3), f0_oracle(1),
               even_power_oracle(2), truncpow_oracle(1, 0.3)]
    cases = 0
    while cases < 50:
        f = oracles[int(rng.integers(len(oracles)))]
        lo = float(rng.uniform(-1.0, 0.4))
        hi = float(rng.uniform(lo + 0.3, 1.0))
        t = float(rng.uniform(0.01, hi - lo))
        k1, k2 = sorted(rng.choice([1, 2, 3], size=2, replace=False))
        w1 = modulus(f, int(k1), t, (lo, hi), grid=128).value
        w2 = modulus(f, int(k2), t, (lo, hi), grid=128).value
        ok &= w2 <= 2.0 ** (k2 - k1) * w1 * 1.05
        lam = float(rng.choice([0.5, 2.0, 5.0]))
        base = modulus(f, 2, t, (lo, hi), grid=128).value
        ok &= modulus(f, 2, lam * t, (lo, hi), grid=128).value \
            <= (lam + 1.0) ** 2 * base * 1.05
        full = modulus(f, int(k2), hi - lo, (lo, hi), grid=128).value
        one = one_sided_modulus(f, int(k2), hi, (lo, hi), "left", grid=128)
        ok &= 2.0 ** (1 - k2) * full <= one * 1.05 and one <= full * 1.05
        cases += 1
    _report(5, ok, f"block ratios stable, {cases} randomized moduli cases")


def test_criterion_6_negative_results():
    cases = 0
    exact = True
    for r in (1, 2, 3, 4):
        for m in (2, 3, 5):
            for x_last in (-0.5, 0.0, 0.5, 0.9):
                thr = counterexample_witness(r, m, x_last).epsilon_threshold
                for frac in (0.25, 0.75, 0.999, 1.0, 1.25):
                    w = counterexample_witness(r, m, x_last, epsilon=frac * thr)
                    exact &= w.contradiction == (w.epsilon < w.epsilon_threshold)
                    exact &= w.contradiction == (frac * thr < thr)
                    cases += 1
    poly_ok = all(
        polynomial_counterexample(r, n)["ratio"] == pytest.approx(r + 1.0, rel=1e-12)
        for r in (1, 2, 3) for n in range(4, 65, 6))
    _report(6, exact and poly_ok and cases >= 100,
            f"{cases} witness cases exact; polynomial variant ratio = r+1")


def test_criterion_7_threshold_depends_on_function():
    t0 = time.perf_counter()
    out = threshold_growth(1, [0.1, 0.01, 0.001])
    col = [row["N_threshold"] for row in out["rows"]]
    elapsed = time.perf_counter() - t0
    _report(7, out["nondecreasing"] and col[2] > col[0] and elapsed < 30.0,
            f"N thresholds {col}, {elapsed:.1f}s")


def test_criterion_8_determinism(tmp_path):
    """Re-run every artifact producer twice and compare bytes."""
    def produce(tag):
        d = tmp_path / tag
        d.mkdir()
        assert cli_main(["approximate", "--function", "f0:r=2", "--r", "2",
                         "--n", "32", "--out", str(d / "spline.json")]) == 0
        assert cli_main(["sweep", "--function", "exp:alpha=1", "--r", "1",
                         "--n", "16:64:x2", "--grid-size", "65",
                         "--density", "512", "--out", str(d / "sweep.csv")]) == 0
        assert cli_main(["certify", "--function", "f0:r=2", "--r", "2",
                         "--n", "32", "--spline", str(d / "spline.json"),
                         "--grid-size", "65", "--density", "512",
                         "--out", str(d / "report.json")]) == 0
        assert cli_main(["counterexample", "--r", "1", "--m", "3",
                         "--x-last", "0.9", "--out", str(d / "witness.json")]) == 0
        assert cli_main(["modulus", "--function", "cosh:beta=1", "--k", "2",
                         "--t", "0.25", "--interval", "-1,1",
                         "--out", str(d / "modulus.json")]) == 0
        names = ["spline.json", "sweep.csv", "report.json",
                 "witness.json", "modulus.json"]
        return {name: (d / name).read_bytes() for name in names}

    first = produce("run1")
    second = produce("run2")
    same = {name: first[name] == second[name] for name in first}
    _report(8, all(same.values()),
            "byte-identical artifacts: " + ", ".join(sorted(same)))
