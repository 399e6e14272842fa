"""One-variable profiles of invariant functions on the sphere and on Grassmannians.

A ZonalProfile is a function of t = u.e on S^(n-1), stored in the basis P_k^n.
A GrassProfile is an SO(n-1)-invariant function on Gr_{i,n}, a function of
s = |P_E e|, stored in the basis q^(i)_{2k} = R_{1,i} P_{2k}^n. Upward Radon
transforms are then the identity on coefficients.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable, Optional

import numpy as np
from scipy.special import betaln, roots_jacobi

from .specfun import (DEFAULT_POINTS, _legendre_table, funk_hecke_table, gauss_jacobi,
                      harmonic_dim)

TAIL_TOL = 1e-6


class BandLimitWarning(UserWarning):
    """The highest retained coefficients are not negligible."""


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float).ravel()
    a.setflags(write=False)
    return a


def _detect_parity(c: np.ndarray) -> str:
    scale = max(np.max(np.abs(c)), 1e-300) if c.size else 1.0
    odd = np.max(np.abs(c[1::2]), initial=0.0) <= 1e-14 * scale
    even = np.max(np.abs(c[0::2]), initial=0.0) <= 1e-14 * scale
    if odd:
        return "even"
    if even:
        return "odd"
    return "mixed"


@dataclass(frozen=True, eq=False)
class ZonalProfile:
    """Zonal function sum_k a_k P_k^n(t) on [-1, 1].

    `kernel` optionally holds the exact (not band-limited) function the
    coefficients were taken from; pairings against discrete measures use it.
    `truncation` is a rough sup-norm estimate of the discarded tail.
    """
    n: int
    coeffs: np.ndarray
    parity: str = "auto"
    kernel: Optional[Callable] = field(default=None, repr=False)
    truncation: float = 0.0

    def __post_init__(self):
        c = _frozen(self.coeffs)
        object.__setattr__(self, "coeffs", c)
        found = _detect_parity(c)
        if self.parity == "auto":
            object.__setattr__(self, "parity", found)
        elif self.parity not in ("even", "odd", "mixed"):
            raise ValueError(f"unknown parity {self.parity!r}")
        elif self.parity != "mixed" and found != self.parity and c.any():
            raise ValueError(f"coefficients violate declared parity {self.parity!r}")

    @property
    def K(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t):
        return eval_zonal(self, t)

    def exact(self, t):
        """The exact kernel if known, else the band-limited evaluation."""
        if self.kernel is not None:
            return np.asarray(self.kernel(np.asarray(t, dtype=float)), dtype=float)
        return eval_zonal(self, t)

    def multipliers(self) -> np.ndarray:
        """Funk-Hecke multipliers m_k = a_k / N(n, k)."""
        return self.coeffs / np.array([harmonic_dim(self.n, k) for k in range(self.K + 1)])

    def with_coeffs(self, c, kernel=None, truncation=None) -> "ZonalProfile":
        return ZonalProfile(self.n, c, "auto", kernel,
                            self.truncation if truncation is None else truncation)

    def scaled(self, a: float) -> "ZonalProfile":
        ker = None if self.kernel is None else _scaled_kernel(self.kernel, a)
        return ZonalProfile(self.n, a * self.coeffs, "auto", ker, abs(a) * self.truncation)

    def padded(self, K: int) -> "ZonalProfile":
        c = np.zeros(K + 1)
        m = min(K, self.K) + 1
        c[:m] = self.coeffs[:m]
        return ZonalProfile(self.n, c, "auto", self.kernel, self.truncation)

    def even_part(self) -> "ZonalProfile":
        c = self.coeffs.copy()
        c[1::2] = 0.0
        ker = None
        if self.kernel is not None:
            f = self.kernel
            ker = lambda t: 0.5 * (f(t) + f(-t))
        return ZonalProfile(self.n, c, "auto", ker, self.truncation)

    def __add__(self, other: "ZonalProfile") -> "ZonalProfile":
        if not isinstance(other, ZonalProfile):
            return NotImplemented
        if other.n != self.n:
            raise ValueError(f"cannot add profiles on S^{self.n - 1} and S^{other.n - 1}")
        K = max(self.K, other.K)
        a, b = self.padded(K), other.padded(K)
        ker = None
        if self.kernel is not None and other.kernel is not None:
            f, g = self.kernel, other.kernel
            ker = lambda t: f(t) + g(t)
        return ZonalProfile(self.n, a.coeffs + b.coeffs, "auto", ker,
                            self.truncation + other.truncation)

    def __sub__(self, other):
        return self + other.scaled(-1.0)

    def __neg__(self):
        return self.scaled(-1.0)

    def __mul__(self, a):
        return self.scaled(float(a))

    __rmul__ = __mul__


def _scaled_kernel(f, a):
    return lambda t: a * f(t)


def eval_zonal(p: ZonalProfile, t):
    """sum_k a_k P_k^n(t)."""
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1 + 1e-12):
        raise ValueError("zonal profiles live on [-1, 1]")
    val = np.tensordot(p.coeffs, _legendre_table(p.n, p.K, np.clip(t, -1, 1)), axes=1)
    return float(val) if val.ndim == 0 else val


def tail_ratio(c: np.ndarray) -> float:
    c = np.abs(np.asarray(c, dtype=float))
    top = c.max(initial=0.0)
    if top == 0 or c.size < 2:
        return 0.0
    return float(max(c[-1], c[-2]) / top)


def expand_zonal(n: int, f: Callable, K: int, m: int = DEFAULT_POINTS, keep_kernel: bool = False,
                 warn: bool = True) -> ZonalProfile:
    """Project f onto P_0^n .. P_K^n under the weight (1-t^2)^((n-3)/2).

    a_k = N(n,k) * m_k(f) where m_k is the Funk-Hecke multiplier. With
    keep_kernel the exact f is retained for pointwise pairings.
    """
    mk = funk_hecke_table(n, K, f, m=max(m, 2 * K), strict=False)
    a = mk * np.array([harmonic_dim(n, k) for k in range(K + 1)])
    a[np.abs(a) < 1e-15 * max(np.abs(a).max(), 1e-300)] = 0.0
    ratio = tail_ratio(a)
    if warn and ratio > TAIL_TOL:
        warnings.warn(f"band limit K={K} too small: tail ratio {ratio:.1e}", BandLimitWarning,
                      stacklevel=2)
    trunc = float(np.abs(a[-2:]).sum()) if ratio > TAIL_TOL else 0.0
    return ZonalProfile(n, a, "auto", f if keep_kernel else None, trunc)


# --- Grassmannian side ---------------------------------------------------

@lru_cache(maxsize=512)
def _grass_q_nodes(i: int, kmax: int):
    rule = gauss_jacobi((i - 3) / 2, kmax + 4)
    return rule.nodes, rule.weights / rule.weights.sum()


def grass_q_table(n: int, i: int, kmax: int, s) -> np.ndarray:
    """Rows q^(i)_{2k}(s) for k = 0..kmax.

    q^(i)_{2k}(s) is the average of P_{2k}^n(s*tau) over tau on S^(i-1),
    integrated exactly by Gauss-Jacobi with weight (1-tau^2)^((i-3)/2).
    """
    _check_grass(n, i)
    s = np.asarray(s, dtype=float)
    if i == 1:
        return _legendre_table(n, 2 * kmax, s)[0::2]
    tau, w = _grass_q_nodes(i, kmax)
    P = _legendre_table(n, 2 * kmax, s[..., None] * tau)[0::2]
    return P @ w


def grass_basis_q(n: int, i: int, k: int) -> Callable:
    """The profile q^(i)_{2k} on [0, 1] as a vectorized callable."""
    _check_grass(n, i)

    def q(s):
        val = grass_q_table(n, i, k, s)[k]
        return float(val) if np.ndim(val) == 0 else val
    return q


def _check_grass(n, i):
    if n < 2 or not 1 <= i <= n - 1:
        raise ValueError(f"subspace dimension must satisfy 1 <= i <= n-1, got n={n}, i={i}")


@lru_cache(maxsize=512)
def _beta_rule(n: int, i: int, m: int, shift: float):
    a = (n - i) / 2 - 1 + shift
    b = i / 2 - 1
    t, w = roots_jacobi(m, a, b)
    x = 0.5 * (1 + t)
    w = w / 2 ** (a + b + 1) / math.exp(betaln(i / 2, (n - i) / 2))
    s = np.sqrt(x)
    s.setflags(write=False)
    w.setflags(write=False)
    return s, w


def grass_rule(n: int, i: int, m: int, shift: float = 0.0):
    """Nodes s and weights w with sum w*phi(s) = E[phi(s) (1-s^2)^shift].

    s = |P_E e| for Haar-random E in Gr_{i,n}, i.e. s^2 ~ Beta(i/2, (n-i)/2).
    Gauss in x = s^2, so exact for phi polynomial in s^2 of degree < 2m.
    """
    _check_grass(n, i)
    return _beta_rule(n, i, int(m), float(shift))


@lru_cache(maxsize=512)
def _grass_norms(n: int, i: int, kmax: int) -> np.ndarray:
    s, w = grass_rule(n, i, kmax + 4)
    q = grass_q_table(n, i, kmax, s)
    out = (q * q) @ w
    out.setflags(write=False)
    return out


def grass_norms(n: int, i: int, kmax: int) -> np.ndarray:
    """||q^(i)_{2k}||^2 for k = 0..kmax under the invariant probability measure."""
    _check_grass(n, i)
    return _grass_norms(n, i, kmax)


def grass_norm_sq(n: int, i: int, k: int) -> float:
    return float(grass_norms(n, i, k)[k])


@dataclass(frozen=True, eq=False)
class GrassProfile:
    """Invariant profile sum_k b_k q^(i)_{2k}(s) on Gr_{i,n}.

    side = "sphere" marks the hat-dual reading as an S(O(i) x O(n-i))
    invariant function of r = |P_e u| on the sphere.
    """
    n: int
    i: int
    coeffs: np.ndarray
    side: str = "grassmannian"

    def __post_init__(self):
        _check_grass(self.n, self.i)
        object.__setattr__(self, "coeffs", _frozen(self.coeffs))
        if self.side not in ("grassmannian", "sphere"):
            raise ValueError(f"unknown side {self.side!r}")

    @property
    def kmax(self) -> int:
        return len(self.coeffs) - 1

    @property
    def K(self) -> int:
        return 2 * self.kmax

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        val = np.tensordot(self.coeffs, grass_q_table(self.n, self.i, self.kmax, s), axes=1)
        return float(val) if val.ndim == 0 else val

    def with_coeffs(self, c, i=None) -> "GrassProfile":
        return GrassProfile(self.n, self.i if i is None else i, c, self.side)

    def scaled(self, a: float) -> "GrassProfile":
        return self.with_coeffs(a * self.coeffs)

    def padded(self, kmax: int) -> "GrassProfile":
        c = np.zeros(kmax + 1)
        m = min(kmax, self.kmax) + 1
        c[:m] = self.coeffs[:m]
        return self.with_coeffs(c)

    def __add__(self, other):
        if not isinstance(other, GrassProfile):
            return NotImplemented
        if (other.n, other.i) != (self.n, self.i):
            raise ValueError(f"cannot add profiles on Gr_{self.i},{self.n} and Gr_{other.i},{other.n}")
        k = max(self.kmax, other.kmax)
        return self.with_coeffs(self.padded(k).coeffs + other.padded(k).coeffs)

    def __sub__(self, other):
        return self + other.scaled(-1.0)

    def __neg__(self):
        return self.scaled(-1.0)

    def __mul__(self, a):
        return self.scaled(float(a))

    __rmul__ = __mul__


def expand_grass(n: int, i: int, f: Callable, K: int, m: int = DEFAULT_POINTS,
                 shift: float = 0.0, warn: bool = True) -> GrassProfile:
    """Project a function of s onto q^(i)_{2k}, 2k <= K.

    shift moves a factor (1-s^2)^shift of f into the quadrature weight, which
    keeps Gauss accuracy for f = (1-s^2)^shift * polynomial(s^2).
    """
    kmax = K // 2
    s, w = grass_rule(n, i, max(m, kmax + 4), shift)
    vals = np.asarray(f(s), dtype=float) / (1 - s * s) ** shift
    q = grass_q_table(n, i, kmax, s)
    b = (q @ (w * vals)) / grass_norms(n, i, kmax)
    ratio = abs(b[-1]) / max(np.abs(b).max(), 1e-300)
    if warn and kmax >= 1 and ratio > TAIL_TOL:
        warnings.warn(f"band limit K={K} too small on Gr_{i},{n}: tail ratio {ratio:.1e}",
                      BandLimitWarning, stacklevel=2)
    return GrassProfile(n, i, b)


def grass_inner(p: GrassProfile, q: GrassProfile) -> float:
    """L^2 inner product under the invariant probability measure (diagonal basis)."""
    k = min(p.kmax, q.kmax)
    return float(np.sum(p.coeffs[:k + 1] * q.coeffs[:k + 1] * grass_norms(p.n, p.i, k)))


def hat_dual(p: GrassProfile) -> GrassProfile:
    """Reinterpret the same one-variable function on the other side (involution)."""
    other = "sphere" if p.side == "grassmannian" else "grassmannian"
    return GrassProfile(p.n, p.i, p.coeffs, other)


def _p_even_at_zero(n: int, kmax: int) -> np.ndarray:
    return _legendre_table(n, 2 * kmax, np.array(0.0))[0::2]


def zonal_to_grass(g: ZonalProfile) -> GrassProfile:
    """Even zonal g(t) as the hyperplane profile s -> g(sqrt(1-s^2)) on Gr_{n-1,n}.

    Uses q^(n-1)_{2k}(s) = P_{2k}(0) P_{2k}(sqrt(1-s^2)).
    """
    if g.parity == "odd" or g.parity == "mixed":
        raise ValueError("only even zonal functions correspond to hyperplane profiles")
    kmax = g.K // 2
    return GrassProfile(g.n, g.n - 1, g.coeffs[0::2][:kmax + 1] / _p_even_at_zero(g.n, kmax))


def grass_to_zonal(p: GrassProfile) -> ZonalProfile:
    """Inverse of zonal_to_grass."""
    if p.i != p.n - 1:
        raise ValueError("only hyperplane profiles correspond to zonal functions")
    c = np.zeros(2 * p.kmax + 1)
    c[0::2] = p.coeffs * _p_even_at_zero(p.n, p.kmax)
    return ZonalProfile(p.n, c)


# --- JSON ---------------------------------------------------------------

def profile_to_dict(p) -> dict:
    if isinstance(p, ZonalProfile):
        return {"n": p.n, "i": None, "space": "sphere", "parity": p.parity,
                "coeffs": [float(c) for c in p.coeffs]}
    if isinstance(p, GrassProfile):
        return {"n": p.n, "i": p.i, "space": p.side, "parity": "even",
                "coeffs": [float(c) for c in p.coeffs]}
    raise TypeError(f"not a profile: {type(p).__name__}")


def profile_from_dict(d: dict):
    for key in ("n", "space", "coeffs"):
        if key not in d:
            raise ValueError(f"profile JSON missing field {key!r}")
    if d.get("i") is None:
        if d["space"] != "sphere":
            raise ValueError("zonal profiles must have space 'sphere'")
        return ZonalProfile(int(d["n"]), d["coeffs"], d.get("parity", "auto"))
    if d["space"] not in ("sphere", "grassmannian"):
        raise ValueError(f"unknown space {d['space']!r}")
    return GrassProfile(int(d["n"]), int(d["i"]), d["coeffs"], d["space"])


def save_profile(p, path) -> None:
    Path(path).write_text(json.dumps(profile_to_dict(p), indent=2))


def load_profile(path):
    return profile_from_dict(json.loads(Path(path).read_text()))
