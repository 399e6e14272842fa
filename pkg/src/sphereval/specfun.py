"""Ball volumes, dimension-n Legendre polynomials and Gauss-Jacobi quadrature.

Everything downstream reduces to one-dimensional integrals against the
weight (1 - t^2)^alpha, which is what these helpers provide.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import gammaln, roots_jacobi

DEFAULT_K = 32
DEFAULT_POINTS = 128


class QuadratureError(ArithmeticError):
    """Successive quadrature refinements disagree beyond tolerance."""


class QuadratureWarning(RuntimeWarning):
    """Quadrature refinements disagree; result returned anyway."""


def kappa(i: float) -> float:
    """Volume of the i-dimensional unit ball, pi^(i/2) / Gamma(i/2 + 1).

    Integer i >= 0 is the geometric case. i = -1 is accepted through the
    Gamma continuation (kappa(-1) = 1/pi) because a few integral-geometric
    constants reach one step below zero.
    """
    if i < -1:
        raise ValueError(f"kappa needs i >= -1, got {i}")
    return math.exp(0.5 * i * math.log(math.pi) - math.lgamma(0.5 * i + 1.0))


def omega(j: int) -> float:
    """Surface area of the unit sphere S^j, computed as (j+1) * kappa(j+1)."""
    return (j + 1) * kappa(j + 1)


def sphere_ratio(n: int) -> float:
    """omega(n-2)/omega(n-1): normalizes the (1-t^2)^((n-3)/2) weight to a probability."""
    return omega(n - 2) / omega(n - 1)


def harmonic_dim(n: int, k: int) -> int:
    """Dimension of the space of degree-k spherical harmonics on S^(n-1)."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    if k == 0:
        return 1
    if k == 1:
        return n
    return math.comb(n + k - 1, n - 1) - math.comb(n + k - 3, n - 1)


def _legendre_table(n: int, K: int, t) -> np.ndarray:
    # normalized three-term recurrence, P_k(1) = 1 at every step
    t = np.asarray(t, dtype=float)
    out = np.empty((K + 1,) + t.shape)
    out[0] = 1.0
    if K >= 1:
        out[1] = t
    for k in range(2, K + 1):
        if n == 2:
            out[k] = 2.0 * t * out[k - 1] - out[k - 2]
        else:
            out[k] = ((2 * k + n - 4) * t * out[k - 1] - (k - 1) * out[k - 2]) / (k + n - 3)
    return out


def legendre_table(n: int, K: int, t) -> np.ndarray:
    """Rows P_0^n(t), ..., P_K^n(t); shape (K+1,) + shape(t). Allows n >= 2."""
    if n < 2:
        raise ValueError("dimension must be >= 2")
    return _legendre_table(n, K, t)


def legendre_nd(n: int, k: int, t):
    """Dimension-n Legendre polynomial P_k^n(t), normalized so P_k^n(1) = 1."""
    if n < 3:
        raise ValueError(f"legendre_nd needs ambient dimension n >= 3, got {n}")
    if k < 0:
        raise ValueError("degree must be nonnegative")
    val = _legendre_table(n, k, t)[k]
    return float(val) if np.ndim(val) == 0 else val


def legendre_norm_sq(n: int, k: int) -> float:
    """Probability-weighted norm (omega(n-2)/omega(n-1)) * int P_k^2 (1-t^2)^((n-3)/2) dt = 1/N(n,k)."""
    return 1.0 / harmonic_dim(n, k)


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    alpha: float

    def __len__(self):
        return len(self.nodes)

    def integrate(self, f: Callable) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


def weight_integral(alpha: float) -> float:
    """int_{-1}^{1} (1-t^2)^alpha dt = B(1/2, alpha+1)."""
    return math.exp(gammaln(0.5) + gammaln(alpha + 1) - gammaln(alpha + 1.5))


@lru_cache(maxsize=256)
def _jacobi(alpha: float, m: int):
    x, w = roots_jacobi(m, alpha, alpha)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_jacobi(alpha: float, m: int) -> QuadratureRule:
    """m-point Gauss rule for the weight (1-t^2)^alpha on [-1, 1]."""
    if alpha <= -1:
        raise ValueError(f"weight exponent must exceed -1, got {alpha}")
    if m < 1:
        raise ValueError("need at least one node")
    x, w = _jacobi(float(alpha), int(m))
    return QuadratureRule(x, w, float(alpha))


@lru_cache(maxsize=256)
def _half(alpha: float, m: int):
    # Gauss-Jacobi(alpha, 0) mapped to [0,1]; (1+t)^alpha moved into the weights
    x, w = roots_jacobi(m, alpha, 0.0)
    t = 0.5 * (1.0 + x)
    w = w * 0.5 ** (alpha + 1) * (1.0 + t) ** alpha
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


def half_rule(alpha: float, m: int):
    """Nodes/weights on (0,1) for int_0^1 f(t) (1-t^2)^alpha dt.

    Applied to f(t) and f(-t) this integrates over [-1,1] with the split at 0,
    so kernels with a kink at the origin (|t|) keep spectral accuracy.
    """
    if alpha <= -1:
        raise ValueError(f"weight exponent must exceed -1, got {alpha}")
    return _half(float(alpha), int(m))


def _fh_table(n: int, K: int, kernel: Callable, m: int) -> np.ndarray:
    t, w = half_rule((n - 3) / 2, m)
    fp = np.asarray(kernel(t), dtype=float) * w
    fm = np.asarray(kernel(-t), dtype=float) * w
    P = _legendre_table(n, K, t)
    sign = (-1.0) ** np.arange(K + 1)
    return sphere_ratio(n) * (P @ fp + sign * (P @ fm))


def funk_hecke_table(n: int, K: int, kernel: Callable, m: int = DEFAULT_POINTS,
                     tol: float = 1e-10, check: bool = True, strict: bool = True) -> np.ndarray:
    """Funk-Hecke multipliers m_0..m_K of a zonal kernel on S^(n-1).

    Compares m against 2m points; raises QuadratureError if they disagree by
    more than tol relative to the kernel's mean absolute value (or only
    warns when strict is False).
    """
    if n < 2:
        raise ValueError("dimension must be >= 2")
    m = max(m, K + 2)
    fine = _fh_table(n, K, kernel, 2 * m)
    if check:
        coarse = _fh_table(n, K, kernel, m)
        scale = max(abs(_fh_table(n, 0, lambda s: np.abs(kernel(s)), 2 * m)[0]), 1e-300)
        err = np.max(np.abs(fine - coarse)) / scale
        if err > tol:
            msg = (f"Funk-Hecke quadrature not converged (relative change {err:.2e} between "
                   f"{m} and {2 * m} points); kernel too rough for this rule")
            if strict:
                raise QuadratureError(msg)
            warnings.warn(msg, QuadratureWarning, stacklevel=3)
    return fine


def funk_hecke(n: int, k: int, kernel: Callable, m: int = DEFAULT_POINTS,
               tol: float = 1e-10) -> float:
    """m_k = (omega(n-2)/omega(n-1)) int kernel(t) P_k^n(t) (1-t^2)^((n-3)/2) dt."""
    return float(funk_hecke_table(n, k, kernel, m, tol)[k])
