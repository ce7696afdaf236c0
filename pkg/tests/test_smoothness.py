import math

import numpy as np
import pytest

from convexlab.smoothness import (
    InvalidOrder,
    ModulusProfile,
    finite_difference,
    modulus,
    one_sided_modulus,
)


def brute_force_modulus(f, k, t, interval, nu=400, nx=400):
    """Independent lattice oracle: plain double loop, no refinement."""
    a, b = interval
    t = min(t, (b - a) / k)
    best = 0.0
    for u in np.linspace(t / nu, t, nu):
        lo, hi = a + k * u / 2, b - k * u / 2
        if hi < lo:
            continue
        for x in np.linspace(lo, hi, nx):
            val = abs(sum((-1) ** i * math.comb(k, i) * f(x + (k / 2 - i) * u)
                          for i in range(k + 1)))
            best = max(best, val)
    return best


def test_second_difference_of_square():
    f = lambda x: np.asarray(x) ** 2
    for u, x in [(0.1, 0.0), (0.3, 0.2), (0.05, -0.8)]:
        assert finite_difference(f, 2, u, x, (-1, 1)) == pytest.approx(2 * u * u)


def test_first_difference_of_identity():
    f = lambda x: np.asarray(x)
    assert finite_difference(f, 1, 0.25, 0.0, (-1, 1)) == pytest.approx(0.25)


def test_difference_outside_interval_is_zero():
    f = lambda x: np.asarray(x) ** 2
    # x + (k/2) u beyond the right end
    assert finite_difference(f, 2, 0.5, 0.9, (-1, 1)) == 0.0


def test_difference_order_validation():
    f = lambda x: np.asarray(x)
    with pytest.raises(InvalidOrder):
        finite_difference(f, 0, 0.1, 0.0, (-1, 1))
    with pytest.raises(InvalidOrder):
        finite_difference(f, 9, 0.1, 0.0, (-1, 1))


def test_modulus_of_affine_vanishes():
    f = lambda x: 3.0 * np.asarray(x) - 1.0
    res = modulus(f, 2, 0.7, (-1, 1), grid=64)
    assert res.value == pytest.approx(0.0, abs=1e-13)


def test_modulus_square_second_order():
    f = lambda x: np.asarray(x) ** 2
    res = modulus(f, 2, 0.5, (-1, 1), grid=128)
    assert res.value == pytest.approx(0.5, rel=1e-6)
    assert res.arg_u == pytest.approx(0.5, rel=1e-3)


def test_modulus_square_first_order_unit_interval():
    f = lambda x: np.asarray(x) ** 2
    res = modulus(f, 1, 1.0, (0, 1), grid=128)
    oracle = brute_force_modulus(lambda x: x**2, 1, 1.0, (0, 1))
    assert res.value == pytest.approx(1.0, rel=1e-9)
    assert res.value >= oracle - 1e-12


def test_modulus_agrees_with_brute_force():
    f = lambda x: np.exp(np.asarray(x))
    got = modulus(f, 2, 0.4, (-1, 1), grid=256).value
    oracle = brute_force_modulus(math.exp, 2, 0.4, (-1, 1))
    assert got == pytest.approx(oracle, rel=5e-3)
    # certified lower bound of the true sup, so it may only undershoot, and
    # the finer search should not lose to the coarse oracle by more than slack
    assert got >= oracle * 0.999


def test_modulus_zero_step():
    f = lambda x: np.exp(np.asarray(x))
    assert modulus(f, 2, 0.0, (-1, 1), grid=64).value == 0.0


def test_modulus_invalid_order_and_grid():
    f = lambda x: np.asarray(x)
    with pytest.raises(InvalidOrder):
        modulus(f, 0, 0.5, (-1, 1))
    with pytest.raises(ValueError):
        modulus(f, 2, 0.5, (-1, 1), grid=32)


def test_modulus_monotone_in_step_and_interval():
    f = lambda x: np.cosh(np.asarray(x))
    vals = [modulus(f, 2, t, (-1, 1), grid=128).value for t in (0.1, 0.3, 0.8, 1.5)]
    for small, large in zip(vals, vals[1:]):
        assert large >= small * (1 - 5e-3)  # grid slack only
    inner = modulus(f, 2, 0.4, (-0.5, 0.5), grid=128).value
    outer = modulus(f, 2, 0.4, (-1, 1), grid=128).value
    assert outer >= inner * (1 - 5e-3)


def test_order_comparison_inequality():
    # omega_{k2}(f, t) <= 2^(k2-k1) omega_{k1}(f, t) within grid slack
    f = lambda x: np.exp(np.asarray(x))
    for k1, k2 in [(1, 2), (2, 3), (1, 3)]:
        for t in (0.2, 0.6):
            w1 = modulus(f, k1, t, (-1, 1), grid=128).value
            w2 = modulus(f, k2, t, (-1, 1), grid=128).value
            assert w2 <= 2.0 ** (k2 - k1) * w1 * 1.05


def test_lambda_scaling_inequality():
    f = lambda x: np.abs(np.asarray(x)) ** 1.5
    k, t = 2, 0.15
    base = modulus(f, k, t, (-1, 1), grid=256).value
    for lam in (0.5, 2.0, 5.0):
        scaled = modulus(f, k, lam * t, (-1, 1), grid=256).value
        assert scaled <= (lam + 1.0) ** k * base * 1.05


def test_one_sided_zero_at_near_end():
    f = lambda x: np.exp(np.asarray(x))
    assert one_sided_modulus(f, 2, -1.0, (-1, 1), "left", grid=64) == 0.0
    assert one_sided_modulus(f, 2, 1.0, (-1, 1), "right", grid=64) == 0.0


def test_one_sided_affine_vanishes():
    f = lambda x: 2.0 * np.asarray(x) + 5.0
    assert one_sided_modulus(f, 2, 0.3, (-1, 1), "left", grid=64) == pytest.approx(0.0, abs=1e-12)


def test_one_sided_sandwich_at_far_end():
    # at x = b the left composite modulus is squeezed between
    # 2^(1-k) omega_k(f, b-a) and omega_k(f, b-a)
    f = lambda x: np.exp(np.asarray(x))
    for k in (2, 3):
        full = modulus(f, k, 2.0, (-1, 1), grid=128).value
        one = one_sided_modulus(f, k, 1.0, (-1, 1), "left", grid=128)
        assert 2.0 ** (1 - k) * full <= one * 1.05
        assert one <= full * 1.05


def test_one_sided_side_validation():
    f = lambda x: np.asarray(x)
    with pytest.raises(ValueError):
        one_sided_modulus(f, 2, 0.0, (-1, 1), "up")


def test_sqrt_singularity_band():
    # omega_k of a function with an endpoint square-root cusp behaves like
    # min(1, sqrt(t)); the normalized values must stay in a fixed band
    g = lambda x: 1.5 * np.sqrt(np.clip(1.0 + np.asarray(x), 0.0, None))
    ts = np.geomspace(1e-4, 2.0, 9)
    vals = []
    for t in ts:
        v = modulus(g, 2, float(t), (-1, 1), grid=256).value
        vals.append(v / min(1.0, math.sqrt(t)))
    assert max(vals) / min(vals) <= 10.0


def test_profile_matches_modulus_queries():
    f = lambda x: np.exp(np.asarray(x))
    prof = ModulusProfile(f, 2, (-1, 1), t_max=0.5, grid=256)
    for t in (0.05, 0.2, 0.5):
        direct = modulus(f, 2, t, (-1, 1), grid=256).value
        table = prof.value(t)
        assert table == pytest.approx(direct, rel=1e-3)
        assert table <= direct * 1.001


def test_profile_log_spaced_small_steps():
    f = lambda x: np.exp(np.asarray(x))
    prof = ModulusProfile(f, 2, (-1, 1), t_max=0.5, grid=256,
                          log_spaced=True, t_min=1e-6)
    # near-zero queries are dominated by the exact columns; compare with the
    # second-difference magnitude ~ max|f''| t^2
    v = prof.value(1e-5)
    assert 0.5 * math.exp(-1) * 1e-10 < v < math.e * 1e-10 * 1.01


def test_modulus_argmax_admissible():
    f = lambda x: np.exp(np.asarray(x))
    for k, t, interval in [(2, 0.5, (-1.0, 1.0)), (1, 2.0, (0.0, 1.0)), (3, 0.3, (-0.5, 0.75))]:
        res = modulus(f, k, t, interval, grid=64)
        a, b = interval
        assert res.value >= 0.0
        assert a - 1e-12 <= res.arg_x - k * res.arg_u / 2
        assert res.arg_x + k * res.arg_u / 2 <= b + 1e-12
