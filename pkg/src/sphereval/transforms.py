"""Rotation-intertwining transforms as diagonal multipliers or 1-D kernels.

Cosine, Radon (up/down), the spherical operator box_j = Delta/(j-1) + 1,
convolution with the Berg functions zeta_j, and the orthogonal-complement
map on Grassmannian profiles.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .profiles import (GrassProfile, ZonalProfile, expand_grass, grass_norms, zonal_to_grass)
from .specfun import (_legendre_table, funk_hecke_table, gauss_jacobi, harmonic_dim, kappa,
                      omega)

COND_LIMIT = 1e10
ABEL_R = 0.995


class SingularOperatorError(ArithmeticError):
    """An inverse transform was applied where its multiplier vanishes."""


class ConditioningError(ArithmeticError):
    """An inverse transform is too ill-conditioned at the requested band limit."""


class BergTruncationError(ArithmeticError):
    """A band-limited Berg profile misses its pointwise truncation tolerance."""


@dataclass(frozen=True)
class TransformTag:
    kind: str
    i: Optional[int] = None
    j: Optional[int] = None
    inner: Optional["TransformTag"] = None

    KINDS = ("cosine", "radon_up", "radon_down", "box", "berg", "perp", "inverse", "identity")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown transform {self.kind!r}")
        if self.kind == "inverse" and self.inner is None:
            raise ValueError("inverse needs an inner transform")

    @classmethod
    def cosine(cls, i):
        return cls("cosine", i=i)

    @classmethod
    def radon_up(cls, i, j):
        return cls("radon_up", i=i, j=j)

    @classmethod
    def radon_down(cls, j, i):
        return cls("radon_down", i=i, j=j)

    @classmethod
    def box(cls, j):
        return cls("box", j=j)

    @classmethod
    def berg(cls, j):
        return cls("berg", j=j)

    @classmethod
    def perp(cls):
        return cls("perp")

    @classmethod
    def identity(cls):
        return cls("identity")

    @classmethod
    def inverse(cls, tag: "TransformTag", n: Optional[int] = None, K: Optional[int] = None):
        """InverseOf(tag); with (n, K) given, its even multipliers are checked nonzero now."""
        inv = cls("inverse", inner=tag)
        if n is not None and K is not None:
            multiplier_seq(inv, n, K)
        return inv

    def __str__(self):
        if self.kind == "inverse":
            return f"inverse({self.inner})"
        args = [str(a) for a in (self.i, self.j) if a is not None]
        if self.kind == "radon_down":
            args = [str(self.j), str(self.i)]
        return f"{self.kind}({','.join(args)})" if args else self.kind


@dataclass(frozen=True, eq=False)
class MultiplierSeq:
    """Diagonal operator: degree k -> values[k]. `singular` flags degrees with no inverse."""
    name: str
    n: int
    values: np.ndarray
    singular: Optional[np.ndarray] = None
    condition: float = 1.0

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.singular is None:
            object.__setattr__(self, "singular", np.zeros(len(v), dtype=bool))

    @property
    def K(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, k):
        return self.values[k]


def identity_seq(n: int, K: int) -> MultiplierSeq:
    return MultiplierSeq("identity", n, np.ones(K + 1))


# --- multipliers -----------------------------------------------------------

@lru_cache(maxsize=128)
def _cosine1(n: int, K: int) -> np.ndarray:
    vals = funk_hecke_table(n, K, np.abs)
    vals[1::2] = 0.0
    vals.setflags(write=False)
    return vals


def cosine_scale(n: int, i: int) -> float:
    """c^i / c^1 = (n kappa_i kappa_{n-i} / 2 kappa_{n-1}) / binom(n, i)."""
    return n * kappa(i) * kappa(n - i) / (2 * kappa(n - 1)) / math.comb(n, i)


def cosine_multiplier(n: int, i: int, k: int) -> float:
    """Multiplier of the cosine transform C_i on the degree-k tower."""
    _check_i(n, i)
    if k % 2:
        raise ValueError("cosine multipliers are defined on even degrees")
    return float(cosine_scale(n, i) * _cosine1(n, _round_up(k))[k])


def cosine_multipliers(n: int, i: int, K: int) -> np.ndarray:
    _check_i(n, i)
    return cosine_scale(n, i) * _cosine1(n, _round_up(K))[:K + 1]


def box_multiplier(j: int, k: int) -> float:
    """Eigenvalue 1 - k(k+j-2)/(j-1) of Delta/(j-1) + 1 on S^(j-1)."""
    if j < 2:
        raise ValueError("box needs j >= 2")
    return 1.0 - k * (k + j - 2) / (j - 1)


def _round_up(K: int, step: int = 32) -> int:
    return max(step, -(-K // step) * step)


def _check_i(n, i):
    if not 1 <= i <= n - 1:
        raise ValueError(f"subspace dimension i must lie in 1..{n - 1}, got {i}")


def berg_coeffs(j: int, L: int) -> np.ndarray:
    """S^(j-1) Legendre coefficients a_l of zeta_j, l = 0..L (a_1 = 0).

    Normalized so that int zeta_j(u.v) dS_1(K, v) = h(JK, u) with the plain
    surface measure: omega(j-1) * m_l(zeta_j) = 1 / box(j, l).
    """
    a = np.zeros(L + 1)
    for l in range(L + 1):
        if l != 1:
            a[l] = harmonic_dim(j, l) / (omega(j - 1) * box_multiplier(j, l))
    return a


@lru_cache(maxsize=64)
def _berg_table(n: int, j: int, K: int) -> np.ndarray:
    # omega(n-1) * m_k^(n)(zeta_j) from the exact S^(j-1) coefficients of zeta_j
    # and Gauss-exact integrals of P_k^n P_l^j against (1-t^2)^((n-3)/2)
    if j == n:
        vals = np.array([0.0 if k == 1 else 1.0 / box_multiplier(n, k) for k in range(K + 1)])
    else:
        L = K + 2 * n + 8 if (n - j) % 2 == 0 else 4096
        rule = gauss_jacobi((n - 3) / 2, L // 2 + K + 4)
        t, w = rule.nodes, rule.weights
        Pn = _legendre_table(n, K, t)
        Pj = _legendre_table(j, L, t)
        vals = omega(n - 2) * ((Pn * w) @ (Pj.T @ berg_coeffs(j, L)))
    vals.setflags(write=False)
    return vals


def berg_multipliers(n: int, j: int, K: int) -> np.ndarray:
    """Multipliers of F_zeta_j f(u) = int f(v) zeta_j(u.v) dv on S^(n-1), degrees 0..K."""
    if not 2 <= j <= n:
        raise ValueError(f"Berg index must satisfy 2 <= j <= n, got j={j}, n={n}")
    return _berg_table(n, j, _round_up(K))[:K + 1]


@lru_cache(maxsize=32)
def _abel_coeffs(j: int, r: float, L: int) -> np.ndarray:
    a = berg_coeffs(j, L) * r ** np.arange(L + 1)
    a.setflags(write=False)
    return a


def berg_pointwise(j: int, t, r: float = ABEL_R, L: Optional[int] = None):
    """Abel-summed value sum_l r^l a_l P_l^j(t) of zeta_j (t kept away from +1)."""
    if L is None:
        L = int(math.ceil(math.log(1e-13) / math.log(r))) if r < 1 else 4096
    t = np.asarray(t, dtype=float)
    P = _legendre_table(j, L, t)
    val = np.tensordot(_abel_coeffs(j, r, L), P, axes=1)
    return float(val) if val.ndim == 0 else val


def berg_closed(j: int, t):
    """Classical closed forms of zeta_2 and zeta_3.

    zeta_3 has a log singularity at t = 1; arguments are kept one ulp below it.
    """
    t = np.minimum(np.asarray(t, dtype=float), np.nextafter(1.0, 0.0))
    if j == 2:
        val = ((np.pi - np.arccos(t)) * np.sqrt(1 - t * t) - t / 2) / (2 * np.pi)
    elif j == 3:
        val = (1 + t * np.log1p(-t) + (4 / 3 - math.log(2)) * t) / (2 * np.pi)
    else:
        raise ValueError(f"closed form known for j = 2, 3 only, got {j}")
    return float(val) if val.ndim == 0 else val


def berg_kernel(j: int, r: float = ABEL_R) -> Callable:
    """Pointwise evaluator of zeta_j: closed form for j <= 3, Abel sum otherwise."""
    if j <= 3:
        return lambda t: berg_closed(j, t)
    return lambda t: berg_pointwise(j, t, r)


def berg_truncation(j: int, K: int, r: float = ABEL_R) -> float:
    """Sup over interior points of |Abel sum - its K-term truncation|."""
    t = np.linspace(-0.9, 0.9, 181)
    L = int(math.ceil(math.log(1e-13) / math.log(r)))
    P = _legendre_table(j, L, t)
    a = _abel_coeffs(j, r, L)
    return float(np.max(np.abs(a[K + 1:] @ P[K + 1:])))


def berg_zeta(j: int, K: int, r: float = ABEL_R, tol: Optional[float] = None) -> ZonalProfile:
    """Berg function zeta_j as a zonal profile on S^(j-1).

    Coefficients are exact up to degree K (degree 1 vanishes); the attached
    kernel is the pointwise evaluator (closed form for j <= 3, Abel sum above).
    `truncation` estimates the interior sup-norm error of the K-term profile;
    BergTruncationError if it exceeds tol.
    """
    if j < 2:
        raise ValueError("Berg functions need j >= 2")
    trunc = berg_truncation(j, K, r)
    if tol is not None and trunc > tol:
        raise BergTruncationError(
            f"zeta_{j} truncated at K={K} has interior error ~{trunc:.2e} > {tol:.1e}")
    return ZonalProfile(j, berg_coeffs(j, K), "mixed", berg_kernel(j, r), trunc)


def berg_profile(n: int, j: int, K: int, r: float = ABEL_R) -> ZonalProfile:
    """zeta_j read as a zonal function on S^(n-1), truncated at degree K."""
    beta = berg_multipliers(n, j, K)
    c = beta / omega(n - 1) * np.array([harmonic_dim(n, k) for k in range(K + 1)])
    return ZonalProfile(n, c, "mixed", berg_kernel(j, r),
                        berg_truncation(j, K, r) if j == n else 0.0)


# --- sequences for tags ------------------------------------------------------

def multiplier_seq(tag: TransformTag, n: int, K: int) -> MultiplierSeq:
    """Materialize a transform tag as its multipliers on degrees 0..K of S^(n-1)."""
    kind = tag.kind
    even = np.arange(K + 1) % 2 == 0
    if kind == "identity":
        return identity_seq(n, K)
    if kind == "cosine":
        return MultiplierSeq(str(tag), n, cosine_multipliers(n, tag.i, K))
    if kind in ("radon_up", "radon_down"):
        lo, hi = tag.i, tag.j
        _check_i(n, lo)
        _check_i(n, hi)
        if not lo < hi:
            raise ValueError(f"Radon transform needs i < j, got i={lo}, j={hi}")
        v = np.zeros(K + 1)
        if kind == "radon_up":
            v[even] = 1.0
        else:
            v[even] = grass_norms(n, hi, K // 2) / grass_norms(n, lo, K // 2)
        return MultiplierSeq(str(tag), n, v)
    if kind == "box":
        if tag.j == n:
            v = np.array([box_multiplier(n, k) for k in range(K + 1)])
        else:
            beta = berg_multipliers(n, tag.j, K)
            v = np.zeros(K + 1)
            nz = np.arange(K + 1) != 1
            v[nz] = 1.0 / beta[nz]
        return MultiplierSeq(str(tag), n, v)
    if kind == "berg":
        return MultiplierSeq(str(tag), n, berg_multipliers(n, tag.j, K))
    if kind == "perp":
        raise ValueError("perp changes the Grassmannian index and is not a multiplier")
    if kind == "inverse":
        base = multiplier_seq(tag.inner, n, K)
        v = base.values
        scale = np.max(np.abs(v[even]))
        zero = np.abs(v) <= 1e-14 * scale
        if np.any(zero & even):
            k = int(np.flatnonzero(zero & even)[0])
            raise SingularOperatorError(
                f"{tag.inner} has a vanishing multiplier at even degree {k}; no inverse")
        inv = np.where(zero, 0.0, 1.0 / np.where(zero, 1.0, v))
        cond = float(scale / np.min(np.abs(v[even])))
        if cond > COND_LIMIT:
            warnings.warn(f"{tag} has condition number {cond:.1e} at K={K}", RuntimeWarning,
                          stacklevel=2)
        return MultiplierSeq(str(tag), n, inv, singular=zero | base.singular, condition=cond)
    raise ValueError(f"unsupported transform {tag}")


def apply_multiplier(p, m: MultiplierSeq):
    """Coefficient-wise product with a multiplier sequence (exactly linear)."""
    if p.n != m.n:
        raise ValueError(f"dimension mismatch: profile n={p.n}, multipliers n={m.n}")
    if isinstance(p, ZonalProfile):
        if m.K < p.K:
            raise ValueError(f"multipliers cover degree {m.K} < profile band limit {p.K}")
        vals, sing = m.values[:p.K + 1], m.singular[:p.K + 1]
        c = p.coeffs
    elif isinstance(p, GrassProfile):
        if m.K < p.K:
            raise ValueError(f"multipliers cover degree {m.K} < profile band limit {p.K}")
        vals, sing = m.values[0:p.K + 1:2], m.singular[0:p.K + 1:2]
        c = p.coeffs
    else:
        raise TypeError(f"not a profile: {type(p).__name__}")
    bad = sing & (c != 0)
    if np.any(bad):
        k = int(np.flatnonzero(bad)[0]) * (2 if isinstance(p, GrassProfile) else 1)
        raise SingularOperatorError(f"{m.name} is singular on degree {k} present in the input")
    return p.with_coeffs(c * vals)


def apply_transform(p, tag: TransformTag):
    """Apply a tag to a profile; Radon tags also move GrassProfiles between indices."""
    if tag.kind == "perp":
        return perp(p)
    if tag.kind == "radon_up" and isinstance(p, GrassProfile):
        if p.i != tag.i:
            raise ValueError(f"profile lives on Gr_{p.i}, transform starts at {tag.i}")
        return radon_up(p, tag.j)
    if tag.kind == "radon_down" and isinstance(p, GrassProfile):
        if p.i != tag.j:
            raise ValueError(f"profile lives on Gr_{p.i}, transform starts at {tag.j}")
        return radon_down(p, tag.i)
    return apply_multiplier(p, multiplier_seq(tag, p.n, p.K))


# --- Grassmannian transforms ---------------------------------------------

def radon_up(p: GrassProfile, j: int) -> GrassProfile:
    """R_{i,j}, i < j: identity on coefficients in the q-basis."""
    if not p.i < j <= p.n - 1:
        raise ValueError(f"radon_up needs i < j <= n-1, got i={p.i}, j={j}")
    return GrassProfile(p.n, j, p.coeffs, p.side)


def radon_down_multipliers(n: int, j: int, i: int, kmax: int) -> np.ndarray:
    return grass_norms(n, j, kmax) / grass_norms(n, i, kmax)


def radon_down(p: GrassProfile, i: int) -> GrassProfile:
    """R_{j,i}, i < j: the adjoint of radon_up, diagonal with norm ratios."""
    if not 1 <= i < p.i:
        raise ValueError(f"radon_down needs 1 <= i < j, got j={p.i}, i={i}")
    return GrassProfile(p.n, i, p.coeffs * radon_down_multipliers(p.n, p.i, i, p.kmax), p.side)


def radon_transform(p: GrassProfile, j: int) -> GrassProfile:
    if j == p.i:
        return p
    return radon_up(p, j) if j > p.i else radon_down(p, j)


def zonal_to_lines(g: ZonalProfile) -> GrassProfile:
    """Even zonal function read on Gr_{1,n} (lines <-> +-unit vectors)."""
    if g.parity not in ("even",) and g.coeffs[1::2].any():
        raise ValueError("only even zonal functions live on lines")
    return GrassProfile(g.n, 1, g.coeffs[0::2])


def lines_to_zonal(p: GrassProfile) -> ZonalProfile:
    if p.i != 1:
        raise ValueError("profile must live on Gr_1")
    c = np.zeros(p.K + 1)
    c[0::2] = p.coeffs
    return ZonalProfile(p.n, c)


def radon_sphere_kernel(n: int, i: int, g: ZonalProfile) -> GrassProfile:
    """R_{n-1,i} of an even zonal function through its explicit kernel.

    (R g)(s) = average of g(sqrt(1-s^2) tau) over tau in S^(n-i-1), for
    i = n-1 simply g(sqrt(1-s^2)). The result is re-expanded in q^(i);
    polynomial in s^2, so Gauss quadrature is exact.
    """
    _check_i(n, i)
    if g.n != n:
        raise ValueError("dimension mismatch")
    if g.coeffs[1::2].any():
        raise ValueError("the hyperplane Radon transform acts on even profiles")
    d = n - i
    kmax = g.K // 2
    if d == 1:
        return zonal_to_grass(g)
    rule = gauss_jacobi((d - 3) / 2, kmax + 4)
    tau, w = rule.nodes, rule.weights / rule.weights.sum()

    def avg(s):
        rho = np.sqrt(np.clip(1 - s * s, 0, None))
        return g(rho[:, None] * tau) @ w
    return expand_grass(n, i, avg, g.K, m=kmax + 8, warn=False)


def commutation_defect(n: int, i: int, j: int, p: GrassProfile, grid: int = 101) -> float:
    """Sup-norm of R_{i,j} C_i p - const * C_j R_{i,j} p on a grid in s."""
    if p.i != i or p.n != n:
        raise ValueError("profile does not live on Gr_{i,n}")
    const = (math.factorial(i) * math.factorial(n - i) * kappa(i) * kappa(n - i)
             / (math.factorial(j) * math.factorial(n - j) * kappa(j) * kappa(n - j)))
    lhs = radon_transform(apply_multiplier(p, multiplier_seq(TransformTag.cosine(i), n, p.K)), j)
    rhs = apply_multiplier(radon_transform(p, j), multiplier_seq(TransformTag.cosine(j), n, p.K))
    s = np.linspace(0, 1, grid)
    return float(np.max(np.abs(lhs(s) - const * rhs(s))))


def perp(p: GrassProfile) -> GrassProfile:
    """E -> E^perp: s -> p(sqrt(1-s^2)) re-expanded on Gr_{n-i,n}."""
    f = lambda s: p(np.sqrt(np.clip(1 - s * s, 0, None)))
    out = expand_grass(p.n, p.n - p.i, f, p.K, m=p.kmax + 8, warn=False)
    return GrassProfile(p.n, p.n - p.i, out.coeffs, p.side)
