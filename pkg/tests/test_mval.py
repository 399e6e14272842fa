import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sphereval.bodies import Ball, Polytope, ZonalSmooth, cube, is_support_function
from sphereval.mval import (ValuationRep, builtin, convert, evaluate, klain_body_direct,
                            mean_section_constant, to_crofton, to_generating, to_klain)
from sphereval.profiles import GrassProfile, ZonalProfile, expand_zonal
from sphereval.specfun import kappa, omega
from sphereval.transforms import ConditioningError, box_multiplier, lines_to_zonal
from sphereval.verification import disk_profile_coeffs

even_coeffs = st.lists(st.floats(-2, 2, allow_nan=False), min_size=1, max_size=6)


def _even_zonal(n, vals):
    c = np.zeros(2 * len(vals) - 1)
    c[0::2] = vals
    return ZonalProfile(n, c)


def _dirs(n, count, rng):
    U = rng.standard_normal((count, n))
    return U / np.linalg.norm(U, axis=1)[:, None]


def test_pi_generating_coefficients():
    g = builtin("Pi", 3, 1, 16).profile
    assert g.coeffs[0] == pytest.approx(0.25, abs=1e-13)
    assert g.coeffs[2] == pytest.approx(5 / 16, abs=1e-13)


def test_mean_section_constant_value():
    assert mean_section_constant(4, 3) == pytest.approx(2 / math.pi, rel=1e-14)
    assert mean_section_constant(5, 5) == pytest.approx(1.0, rel=1e-14)
    with pytest.raises(ValueError):
        mean_section_constant(4, 1)


def test_builtin_validation():
    with pytest.raises(ValueError):
        builtin("Pi", 3, 3)
    with pytest.raises(ValueError):
        builtin("Nope", 3, 1)


def test_steiner_point_map_removes_translation():
    # h = 1 + 0.3 t is the unit ball moved by 0.3 e_3; J recentres it
    K = ZonalSmooth(ZonalProfile(3, [1.0, 0.3]))
    J = builtin("SteinerJ", 3, 1, 32)
    for u in np.eye(3):
        assert evaluate(J, K, u) == pytest.approx(1.0, abs=1e-12)
    assert builtin("SteinerJ", 4, 1, 16).profile.coeffs[1] == 0


def test_steiner_point_map_on_cube():
    J = builtin("SteinerJ", 3, 1, 32)
    Q = cube(3)
    for u in (np.array([1.0, 0, 0]), np.array([0.6, 0.0, 0.8])):
        assert evaluate(J, Q, u) == pytest.approx(np.abs(u).sum() / 2, abs=1e-6)


def test_pi2_on_cube():
    u = np.ones(3) / math.sqrt(3)
    assert evaluate(builtin("Pi", 3, 2), cube(3), u) == pytest.approx(math.sqrt(3), abs=1e-12)


@pytest.mark.parametrize("n", [3, 4])
def test_pi_on_ball_is_constant(n, rng):
    for i in range(1, n):
        v = builtin("Pi", n, i, 16)
        vals = [evaluate(v, Ball(n), u) for u in _dirs(n, 5, rng)]
        assert np.ptp(vals) < 1e-10


def test_even_valuation_on_reflected_body(rng):
    P = Polytope(rng.standard_normal((12, 3)))
    Pm = Polytope(-P.vertices)
    v = ValuationRep(3, 2, "generating", _even_zonal(3, [0.5, -0.2, 0.1]))
    for u in _dirs(3, 5, rng):
        assert evaluate(v, P, u) == pytest.approx(evaluate(v, Pm, u), abs=1e-12)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_klain_body_of_pi_is_a_disk(n):
    for i in range(1, n):
        h = to_klain(builtin("Pi", n, i, 24)).profile.coeffs
        d = disk_profile_coeffs(n, i, 24)
        rho = h @ d / (d @ d)
        assert np.max(np.abs(h - rho * d)) < 1e-6 * abs(rho)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_klain_body_of_top_degree_is_twice_the_body(n):
    # generating h(L, .) with L = R B + segment [-a e_n, a e_n]: Klain body 2L
    R, a = 0.3, 0.5
    g = expand_zonal(n, lambda t: R + a * np.abs(t), 24, warn=False)
    h = to_klain(ValuationRep(n, n - 1, "generating", g)).profile
    want = np.zeros(13)
    want[0] = 2 * R
    want += 2 * a * disk_profile_coeffs(n, n - 1, 24)
    assert np.allclose(h.coeffs, want, atol=1e-9)


def test_zero_maps_to_zero():
    zero = ValuationRep(4, 2, "generating", ZonalProfile(4, np.zeros(9)))
    assert not to_klain(zero).profile.coeffs.any()
    assert not to_crofton(zero).profile.coeffs.any()
    assert not to_generating(to_crofton(zero)).profile.coeffs.any()
    assert not klain_body_direct(zero).coeffs.any()


@given(even_coeffs, st.integers(3, 5), st.data())
@settings(max_examples=30, deadline=None)
def test_crofton_round_trip(vals, n, data):
    i = data.draw(st.integers(1, n - 1))
    v = ValuationRep(n, i, "generating", _even_zonal(n, vals))
    back = to_generating(to_crofton(v)).profile.coeffs
    assert np.allclose(back, v.profile.coeffs, atol=1e-7 * max(1, max(map(abs, vals))))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_constant_crofton_profile_gives_half_abs(n):
    # a constant density 1 on hyperplanes is (1/2) int |u.v| dS_{n-1}: mean width type
    g = to_generating(ValuationRep(n, n - 1, "crofton", GrassProfile(n, n - 1, [1.0])))
    abs_t = expand_zonal(n, np.abs, 4, warn=False)
    assert g.profile.coeffs[0] == pytest.approx(abs_t.coeffs[0] / 2, rel=1e-12)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_degree_one_crofton_density_is_box_of_generating(n, rng):
    # h(Phi_1 K) = h(K) * f with box_n g = f; f against the line probability measure
    c = np.zeros(11)
    c[0::2] = rng.standard_normal(6)
    v = ValuationRep(n, 1, "generating", ZonalProfile(n, c))
    f = lines_to_zonal(to_crofton(v).profile).coeffs
    box = np.array([box_multiplier(n, k) for k in range(11)])
    assert np.allclose(f, omega(n - 1) / 2 * box * c, atol=1e-10)


@pytest.mark.parametrize("n", [3, 4])
def test_direct_klain_route(n):
    for i in range(1, n):
        v = builtin("Pi", n, i, 16)
        a = to_klain(v).profile.coeffs
        b = klain_body_direct(v).coeffs
        assert np.max(np.abs(a - b)) < 1e-6


@pytest.mark.parametrize("n,i", [(3, 1), (4, 2), (5, 3)])
def test_direct_klain_of_constant(n, i):
    c = 0.7
    v = ValuationRep(n, i, "generating", ZonalProfile(n, [c]))
    want = c * n * kappa(n - i) / math.comb(n, i)
    assert np.allclose(klain_body_direct(v).coeffs, [want])


def test_klain_profile_is_support_function():
    h = to_klain(builtin("Pi", 3, 2, 32)).profile
    assert is_support_function(h)[0]


def test_convert_all_directions(rng):
    v = ValuationRep(4, 2, "generating", _even_zonal(4, rng.standard_normal(5)))
    k = convert(v, "klain")
    for kind in ("generating", "crofton", "klain"):
        w = convert(convert(k, kind), "generating")
        assert np.allclose(w.profile.coeffs, v.profile.coeffs, atol=1e-8)


def test_generating_must_be_even_for_conversion():
    v = ValuationRep(3, 1, "generating", ZonalProfile(3, [1.0, 0.5]), even=False)
    with pytest.raises(ValueError):
        to_crofton(v)


def test_conditioning_guard():
    # cosine multipliers decay like k^(-(n+1)/2): n = 8, K = 256 exceeds 1e10
    v = ValuationRep(8, 2, "generating", ZonalProfile(8, np.eye(257)[0]))
    with pytest.raises(ConditioningError):
        to_crofton(v)


def test_rep_validation():
    with pytest.raises(ValueError):
        ValuationRep(3, 0, "generating", ZonalProfile(3, [1.0]))
    with pytest.raises(ValueError):
        ValuationRep(3, 1, "sideways", ZonalProfile(3, [1.0]))
    with pytest.raises(TypeError):
        ValuationRep(3, 1, "crofton", ZonalProfile(3, [1.0]))
    with pytest.raises(ValueError):
        ValuationRep(3, 1, "klain", GrassProfile(3, 2, [1.0]))
