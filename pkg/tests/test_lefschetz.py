import math

import numpy as np
import pytest

from sphereval.bodies import Ball, cube, is_support_function
from sphereval.lefschetz import (apply_power, fourier_op, l_constant, l_iterate_meansection,
                                 l_op, l_op_berg, lambda_op, lambda_steiner_oracle,
                                 mean_section_step_constant)
from sphereval.mval import ValuationRep, builtin, convert, evaluate, to_klain
from sphereval.profiles import GrassProfile, ZonalProfile, expand_zonal


def _random_generating(n, i, K, rng):
    c = np.zeros(K + 1)
    c[0::2] = rng.standard_normal(K // 2 + 1) / (1 + np.arange(K // 2 + 1)) ** 2
    return ValuationRep(n, i, "generating", ZonalProfile(n, c))


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_lambda_powers_of_top_projection_operator(n):
    top = builtin("Pi", n, n - 1, 16)
    for i in range(1, n):
        got = apply_power(lambda_op, top, n - 1 - i).profile.coeffs
        want = builtin("Pi", n, i, 16).profile.coeffs * math.factorial(n - 1) / math.factorial(i)
        assert np.allclose(got, want, rtol=1e-14, atol=1e-16)


def test_lambda_pi2_is_abs():
    got = lambda_op(builtin("Pi", 3, 2, 16)).profile.coeffs
    want = expand_zonal(3, np.abs, 16, warn=False).coeffs
    assert np.allclose(got, want, atol=1e-14)


def test_lambda_zero_and_range():
    zero = ValuationRep(3, 2, "generating", ZonalProfile(3, np.zeros(5)))
    assert not lambda_op(zero).profile.coeffs.any()
    with pytest.raises(ValueError):
        lambda_op(builtin("Pi", 3, 1))


def test_finite_difference_on_cube():
    u = np.array([1.0, 0.0, 0.0])
    fd = lambda_steiner_oracle(builtin("Pi", 3, 2), cube(3), u, 1e-3)
    assert fd == pytest.approx(2 * evaluate(builtin("Pi", 3, 1), cube(3), u), abs=1e-5)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_finite_difference_on_ball_is_exact(n, rng):
    for i in range(2, n):
        v = builtin("Pi", n, i, 16)
        u = rng.standard_normal(n)
        u /= np.linalg.norm(u)
        fd = lambda_steiner_oracle(v, Ball(n), u, 1e-3)
        # Steiner polynomial in t of degree i; central difference exact up to h^2 f'''/6
        assert fd == pytest.approx(evaluate(lambda_op(v), Ball(n), u), rel=1e-6)
    zero = ValuationRep(n, 2, "generating", ZonalProfile(n, [0.0]))
    assert lambda_steiner_oracle(zero, Ball(n), np.eye(n)[0]) == 0.0


@pytest.mark.parametrize("kind", ["crofton", "klain"])
def test_lambda_commutes_with_conversion(kind, rng):
    v = _random_generating(5, 3, 12, rng)
    a = convert(lambda_op(v), kind).profile.coeffs
    b = lambda_op(convert(v, kind)).profile.coeffs
    assert np.allclose(a, b, atol=1e-9)


def test_l_constant_values():
    assert l_constant(3, 1, "crofton") == pytest.approx(math.pi / 2)


@pytest.mark.parametrize("kind", ["crofton", "klain"])
def test_l_commutes_with_conversion(kind, rng):
    v = _random_generating(5, 2, 12, rng)
    a = convert(l_op(v), kind).profile.coeffs
    b = l_op(convert(v, kind)).profile.coeffs
    assert np.allclose(a, b, atol=1e-9)


def test_l_of_pi1_klain_body_is_convex():
    h = l_op(to_klain(builtin("Pi", 3, 1, 32))).profile
    assert h.i == 2 and is_support_function(h)[0]


def test_l_zero():
    zero = ValuationRep(4, 1, "generating", ZonalProfile(4, np.zeros(7)))
    assert not l_op(zero).profile.coeffs.any()
    assert not l_op_berg(zero).profile.coeffs.any()


@pytest.mark.parametrize("i", [1, 2])
def test_two_l_pipelines_agree(i, rng):
    for v in [builtin("Pi", 4, i, 16), _random_generating(4, i, 16, rng)]:
        a = l_op(v).profile.coeffs
        b = l_op_berg(v).profile.coeffs
        assert np.max(np.abs(a - b)) <= 1e-5 * np.max(np.abs(a))


def test_berg_pipeline_accepts_odd_and_drops_linear_part():
    v = ValuationRep(4, 1, "generating", ZonalProfile(4, [0.5, 0.7, 0.2, 0.1]), even=False)
    out = l_op_berg(v)
    assert out.i == 2 and out.profile.coeffs[1] == 0
    assert "degree-1" in out.history[-1].note
    with pytest.raises(ValueError):
        l_op(v)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_mean_section_recursion(n):
    for i in range(1, n - 1):
        got = l_op_berg(builtin("MeanSection", n, n + 1 - i, 16, even=False)).profile.coeffs
        want = builtin("MeanSection", n, n - i, 16, even=False).profile.coeffs
        mask = np.arange(17) != 1
        assert np.allclose(got[mask], mean_section_step_constant(n, i) * want[mask], rtol=1e-10)


def test_l_iterate_constants():
    for n in (3, 4, 5):
        assert l_iterate_meansection(n, 0) == pytest.approx(1.0)
    assert l_iterate_meansection(3, 1) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        l_iterate_meansection(3, 2)


def test_l_iterate_matches_pipeline():
    J = builtin("SteinerJ", 4, 1, 16)
    got = l_op_berg(J).profile.coeffs
    want = builtin("MeanSection", 4, 3, 16, even=False).profile.coeffs
    mask = np.arange(17) != 1
    assert np.allclose(got[mask], l_iterate_meansection(4, 1) * want[mask], rtol=1e-5)


def test_fourier_involution_and_constants(rng):
    v = to_klain(_random_generating(5, 2, 12, rng))
    twice = fourier_op(fourier_op(v))
    assert twice.i == 2
    assert np.allclose(twice.profile.coeffs, v.profile.coeffs, atol=1e-9)
    c = ValuationRep(5, 2, "klain", GrassProfile(5, 2, [1.3], "sphere"))
    out = fourier_op(c)
    assert out.i == 3 and np.allclose(out.profile.coeffs, [1.3])


@pytest.mark.parametrize("n,i", [(4, 2), (5, 2), (5, 3)])
def test_fourier_lambda_link(n, i, rng):
    for g in [builtin("Pi", n, i, 16), _random_generating(n, i, 16, rng)]:
        v = to_klain(g)
        a = fourier_op(lambda_op(v)).profile.coeffs
        b = 2 * l_op(fourier_op(v)).profile.coeffs
        assert np.allclose(a, b, atol=1e-6)


def test_fourier_requires_klain_even():
    with pytest.raises(ValueError):
        fourier_op(builtin("Pi", 4, 2))
