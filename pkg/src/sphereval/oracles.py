"""Independent reference computations used only for verification.

Monte Carlo over Haar-random subspaces, a direct ODE solver and closed
forms for the Berg functions, the explicit boundary decomposition of a
parallel body of the cube, and closed-form intrinsic volumes.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.integrate import quad, tanhsinh
from scipy.special import beta as beta_fn, betainc

from .specfun import kappa, legendre_table, omega


# --- Haar subspaces ---------------------------------------------------------

def haar_frames(n: int, i: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Orthonormal bases (size, n, i) of Haar-random i-subspaces of R^n."""
    G = rng.standard_normal((size, n, i))
    Q, R = np.linalg.qr(G)
    return Q * np.sign(np.diagonal(R, axis1=1, axis2=2))[:, None, :]


def haar_s_samples(n: int, i: int, size: int, seed: int = 0, batch: int = 200_000) -> np.ndarray:
    """s = |P_E e_n| for Haar-random E in Gr_{i,n}."""
    rng = np.random.default_rng(seed)
    out = []
    left = size
    while left > 0:
        b = min(batch, left)
        F = haar_frames(n, i, b, rng)
        out.append(np.linalg.norm(F[:, -1, :], axis=1))
        left -= b
    return np.concatenate(out)


def mc_mean(values: np.ndarray):
    """(mean, standard error)."""
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(len(values)))


def mc_line_average(n: int, k: int, s: float, size: int, seed: int = 0):
    """Average of P_{2k}^n(e.v) over uniformly random unit v in a plane E with |P_E e| = s."""
    rng = np.random.default_rng(seed)
    phi = rng.uniform(0, 2 * np.pi, size)
    t = s * np.cos(phi)
    return mc_mean(legendre_table(n, 2 * k, t)[2 * k])


def mc_radon_up(n: int, F_dim: int, E_dim: int, f, s: float, size: int, seed: int = 0):
    """MC of (R_{E_dim, F_dim} f)(F) for |P_F e| = s: average of f(|P_E e|) over E in F."""
    rng = np.random.default_rng(seed)
    # inside F, e projects to a vector of length s; E is Haar in Gr_{E_dim}(F)
    frames = haar_frames(F_dim, E_dim, size, rng)
    vals = f(s * np.linalg.norm(frames[:, 0, :], axis=1))
    return mc_mean(np.asarray(vals, dtype=float))


def mc_sphere_radon(n: int, g, s_dir: np.ndarray, size: int, seed: int = 0):
    """MC of the great-subsphere average of g(e.v) over v in S(w^perp), w a unit vector."""
    rng = np.random.default_rng(seed)
    w = s_dir / np.linalg.norm(s_dir)
    V = rng.standard_normal((size, n))
    V -= np.outer(V @ w, w)
    V /= np.linalg.norm(V, axis=1)[:, None]
    return mc_mean(np.asarray(g(V[:, -1]), dtype=float))


# --- Berg functions -----------------------------------------------------

def zeta2_closed(t):
    """Berg function on the circle: [(pi - arccos t) sqrt(1-t^2) - t/2] / (2 pi)."""
    t = np.asarray(t, dtype=float)
    return ((np.pi - np.arccos(t)) * np.sqrt(1 - t * t) - t / 2) / (2 * np.pi)


def zeta3_closed(t):
    """Berg function on S^2: [1 + t log(1-t) + (4/3 - log 2) t] / (2 pi)."""
    t = np.asarray(t, dtype=float)
    return (1 + t * np.log1p(-t) + (4 / 3 - math.log(2)) * t) / (2 * np.pi)


class BergODE:
    """zeta_j from the Christoffel ODE, without any spherical-harmonic expansion.

    Off the pole, box_j zeta = -c t (the delta with its linear part removed),
    i.e. (1-t^2) y'' - (j-1) t y' + (j-1) y = -(j-1) c t. Reduction of order
    around the homogeneous solution y = t gives the solution regular at
    t = -1 with the right jump at the pole,
    y0(t) = -(j-1) c [-G0 + t int_0^t H], c = j / omega(j-1),
    G(t) = int_{-1}^t s^2 (1-s^2)^(p-1) ds, p = (j-1)/2, and
    H(s) = (G(s)(1-s^2)^(-p) - G0) / s^2. A multiple of t is then added to
    make y orthogonal to linear functions. Integrals use tanh-sinh
    quadrature, which tolerates the endpoint singularities.
    """

    def __init__(self, j: int):
        if j < 2:
            raise ValueError("needs j >= 2")
        self.j = j
        self.p = (j - 1) / 2
        self.c = j / omega(j - 1)
        self.G0 = 0.5 * beta_fn(1.5, self.p)
        w = (j - 3) / 2
        self.a = 0.0
        num = _ts(lambda t: self(t) * t * (1 - t * t) ** w, -1, 1)
        den = _ts(lambda t: t * t * (1 - t * t) ** w, -1, 1)
        self.a = -num / den

    def _H(self, s):
        s = np.asarray(s, dtype=float)
        G = self.G0 + np.sign(s) * self.G0 * betainc(1.5, self.p, s * s)
        small = np.abs(s) < 1e-4
        safe = np.where(small, 1.0, s)
        val = (G * (1 - s * s) ** (-self.p) - self.G0) / (safe * safe)
        return np.where(small, self.G0 * self.p + s / 3, val)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        inner = tanhsinh(self._H, np.zeros_like(t), t, atol=1e-14, rtol=1e-12, maxlevel=7).integral
        y = -(self.j - 1) * self.c * (-self.G0 + t * inner) + self.a * t
        return float(y) if y.ndim == 0 else y


def _ts(f, lo, hi):
    # split at 0 so each piece has its singular behaviour at an endpoint only
    opts = dict(atol=1e-14, rtol=1e-11, maxlevel=8)
    return float(tanhsinh(f, lo, 0.0, **opts).integral + tanhsinh(f, 0.0, hi, **opts).integral)


@lru_cache(maxsize=16)
def berg_ode(j: int) -> BergODE:
    return BergODE(j)


def berg_conv_multipliers_by_kernel(n: int, j: int, K: int) -> np.ndarray:
    """omega(n-1) m_k(zeta_j) on S^(n-1) by direct quadrature of the ODE solution."""
    z = berg_ode(j)
    a = (n - 3) / 2
    out = np.empty(K + 1)
    for k in range(K + 1):
        f = lambda t: z(t) * legendre_table(n, k, t)[k] * (1 - t * t) ** a
        out[k] = omega(n - 2) * _ts(f, -1.0, 1.0)
    return out


# --- cube parallel body -------------------------------------------------

def _arc_integral(f, a, b, u):
    # int over the quarter arc from a to b (orthonormal) of f(u.v)
    A, B = a @ u, b @ u
    g = lambda th: f(A * math.cos(th) + B * math.sin(th))
    pts = []
    if A * A + B * B > 0:
        th0 = math.atan2(B, A) + math.pi / 2
        pts = [c for c in (th0 - math.pi, th0, th0 + math.pi) if 0 < c < math.pi / 2]
    return quad(g, 0, math.pi / 2, points=pts or None, limit=200, epsabs=1e-13, epsrel=1e-12)[0]


def sausage_pairing(f, u, t: float) -> float:
    """int f(u.v) dS_2(Q + tB, v) for the unit cube Q in R^3, from its boundary pieces.

    Six unit facets, twelve quarter-cylinders of radius t and length 1, and
    eight spherical octants of radius t that together tile the sphere.
    """
    u = np.asarray(u, dtype=float)
    E = np.eye(3)
    total = sum(f(s * u[k]) for k in range(3) for s in (1.0, -1.0))
    for k in range(3):
        others = [m for m in range(3) if m != k]
        for s1 in (1.0, -1.0):
            for s2 in (1.0, -1.0):
                total += t * _arc_integral(f, s1 * E[others[0]], s2 * E[others[1]], u)
    sphere = quad(lambda x: f(x), -1, 1, points=[0.0], epsabs=1e-13, epsrel=1e-12)[0] * 2 * np.pi
    total += t * t * sphere
    return float(total)


def cube_width_average(normal: np.ndarray, points: int = 64) -> float:
    """Mean over unit w in the plane normal^perp of the cube width sum_j |w_j|."""
    nrm = np.asarray(normal, dtype=float)
    nrm = nrm / np.linalg.norm(nrm)
    a = np.linalg.svd(nrm[None, :])[2][1:]
    g = lambda th: float(np.sum(np.abs(math.cos(th) * a[0] + math.sin(th) * a[1])))
    cuts = {0.0, 2 * math.pi}
    for j in range(3):
        phi = math.atan2(a[1][j], a[0][j]) + math.pi / 2
        for m in range(-2, 3):
            c = phi + m * math.pi
            if 0 < c < 2 * math.pi:
                cuts.add(c)
    cuts = sorted(cuts)
    x, w = np.polynomial.legendre.leggauss(points)
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        th = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
        total += 0.5 * (hi - lo) * sum(wi * g(ti) for wi, ti in zip(w, th))
    return total / (2 * math.pi)


# --- intrinsic volumes -------------------------------------------------------

def cube_intrinsic_volume(n: int, i: int, side: float = 1.0) -> float:
    return math.comb(n, i) * side ** i


def ball_intrinsic_volume(n: int, i: int, r: float = 1.0) -> float:
    return math.comb(n, i) * kappa(n) / kappa(n - i) * r ** i


def parallel_intrinsic_volume(n: int, i: int, V, t: float) -> float:
    """V_i(K + tB) from V_j(K) (callable j -> V_j) by the Steiner formula."""
    return sum(math.comb(n - j, i - j) * kappa(n - j) / kappa(n - i) * t ** (i - j) * V(j)
               for j in range(i + 1))


def area_measure_mass(n: int, i: int, Vi: float) -> float:
    """S_i(K, S^{n-1}) = n binom(n,i)^{-1} kappa_{n-i} V_i(K)."""
    return n * kappa(n - i) * Vi / math.comb(n, i)
