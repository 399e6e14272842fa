import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad
from scipy.special import eval_gegenbauer

from sphereval.specfun import (QuadratureError, funk_hecke, funk_hecke_table, gauss_jacobi,
                               half_rule, harmonic_dim, kappa, legendre_nd, legendre_norm_sq,
                               legendre_table, omega)


def test_kappa_values():
    assert kappa(0) == pytest.approx(1.0, abs=1e-15)
    assert kappa(1) == pytest.approx(2.0, abs=1e-15)
    assert kappa(2) == pytest.approx(math.pi, rel=1e-15)
    assert kappa(3) == pytest.approx(4 * math.pi / 3, rel=1e-15)
    assert kappa(-1) == pytest.approx(1 / math.pi, rel=1e-15)


def test_kappa_rejects_below_minus_one():
    with pytest.raises(ValueError):
        kappa(-2)


def test_omega_is_sphere_area():
    assert omega(1) == pytest.approx(2 * math.pi)
    assert omega(2) == pytest.approx(4 * math.pi)


@pytest.mark.parametrize("n,k,dim", [(3, 0, 1), (3, 2, 5), (4, 1, 4), (4, 2, 9), (5, 3, 30)])
def test_harmonic_dim(n, k, dim):
    assert harmonic_dim(n, k) == dim


def test_legendre_examples():
    assert legendre_nd(3, 0, 0.37) == 1.0
    t = np.linspace(-1, 1, 11)
    assert np.allclose(legendre_nd(3, 2, t), (3 * t * t - 1) / 2, atol=1e-15)
    assert legendre_nd(3, 2, 1.0) == pytest.approx(1.0)
    assert legendre_nd(4, 1, 0.5) == pytest.approx(0.5)


def test_legendre_rejects_small_dimension():
    with pytest.raises(ValueError):
        legendre_nd(2, 1, 0.3)


@given(n=st.integers(3, 9), k=st.integers(0, 20), t=st.floats(-1, 1))
@settings(max_examples=60, deadline=None)
def test_legendre_matches_gegenbauer(n, k, t):
    lam = (n - 2) / 2
    ref = eval_gegenbauer(k, lam, t) / eval_gegenbauer(k, lam, 1.0)
    assert legendre_nd(n, k, t) == pytest.approx(ref, abs=1e-11)


def test_circle_legendre_is_chebyshev():
    t = np.linspace(-1, 1, 9)
    assert np.allclose(legendre_table(2, 6, t)[6], np.cos(6 * np.arccos(t)), atol=1e-13)


@pytest.mark.parametrize("n,k", [(3, 2), (4, 3), (5, 4)])
def test_legendre_norm(n, k):
    w = lambda t: legendre_nd(n, k, t) ** 2 * (1 - t * t) ** ((n - 3) / 2)
    val = quad(w, -1, 1)[0] * omega(n - 2) / omega(n - 1)
    assert val == pytest.approx(legendre_norm_sq(n, k), rel=1e-10)
    assert legendre_norm_sq(n, k) == pytest.approx(1 / harmonic_dim(n, k))


def test_gauss_legendre_two_points():
    r = gauss_jacobi(0.0, 2)
    assert np.allclose(np.sort(r.nodes), [-1 / math.sqrt(3), 1 / math.sqrt(3)])
    assert np.allclose(r.weights, [1, 1])


@pytest.mark.parametrize("m", [1, 5, 40])
def test_gauss_weights_sum(m):
    assert gauss_jacobi(0.0, m).weights.sum() == pytest.approx(2.0)


def test_chebyshev_weight_total():
    assert gauss_jacobi(-0.5, 200).weights.sum() == pytest.approx(math.pi, rel=1e-12)


def test_gauss_rule_is_read_only_and_validated():
    r = gauss_jacobi(0.5, 4)
    with pytest.raises(ValueError):
        r.nodes[0] = 0
    with pytest.raises(ValueError):
        gauss_jacobi(-1.0, 4)
    with pytest.raises(ValueError):
        gauss_jacobi(0.0, 0)


def test_half_rule_integrates_kink():
    nodes, weights = half_rule(0.0, 20)
    assert np.dot(weights, nodes) == pytest.approx(0.5, abs=1e-14)
    nodes, weights = half_rule(0.5, 20)
    ref = quad(lambda t: t * math.sqrt(1 - t * t), 0, 1)[0]
    assert np.dot(weights, nodes) == pytest.approx(ref, abs=1e-13)


def test_funk_hecke_examples():
    assert funk_hecke(3, 0, lambda t: np.ones_like(t)) == pytest.approx(1.0)
    assert funk_hecke(3, 1, lambda t: t * t) == pytest.approx(0.0, abs=1e-15)
    assert funk_hecke(3, 2, np.abs) == pytest.approx(0.125, abs=1e-12)


@given(n=st.integers(3, 6), k=st.integers(0, 10))
@settings(max_examples=25, deadline=None)
def test_funk_hecke_against_adaptive_quadrature(n, k):
    kern = lambda t: np.exp(t) * np.abs(t)
    f = lambda t: kern(t) * legendre_nd(n, k, t) * (1 - t * t) ** ((n - 3) / 2)
    ref = (quad(f, -1, 0, epsabs=1e-14)[0] + quad(f, 0, 1, epsabs=1e-14)[0]) * omega(n - 2) / omega(n - 1)
    assert funk_hecke(n, k, kern) == pytest.approx(ref, abs=1e-11)


def test_funk_hecke_detects_non_convergence():
    rough = lambda t: np.sign(np.sin(400 * t))
    with pytest.raises(QuadratureError):
        funk_hecke_table(3, 4, rough, m=8, tol=1e-12)
