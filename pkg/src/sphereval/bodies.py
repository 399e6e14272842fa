"""Convex bodies, support and projection functions, and area measures.

Area measures are kept symbolic (atoms, uniform measures on great
subspheres, zonal densities, edge arcs) so that pairing them with a zonal
kernel g(u.v) is a finite sum or a one-dimensional quadrature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import legendre as npleg
from scipy.spatial import ConvexHull

from .profiles import ZonalProfile, expand_zonal, GrassProfile
from .specfun import DEFAULT_POINTS, funk_hecke_table, half_rule, harmonic_dim, kappa, omega
from .transforms import box_multiplier

MERGE_TOL = 1e-9


class CapabilityError(NotImplementedError):
    """The requested (body, order) area measure is outside what is implemented."""


def _unit(u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if abs(np.linalg.norm(u) - 1) > 1e-12:
        raise ValueError("direction must be a unit vector (|u| = 1 within 1e-12)")
    return u


def _kernel(g) -> Callable:
    if isinstance(g, ZonalProfile):
        return g.exact
    return lambda t: np.asarray(g(np.asarray(t, dtype=float)), dtype=float)


def axis(n: int) -> np.ndarray:
    """The pole e_n used for zonal bodies and profiles."""
    e = np.zeros(n)
    e[-1] = 1.0
    return e


# --- area measures -----------------------------------------------------

class AreaMeasure:
    n: int

    def pair(self, g, u) -> float:
        """int g(u.v) dS(v) for a zonal kernel g (ZonalProfile or callable)."""
        raise NotImplementedError

    def total_mass(self) -> float:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class Atomic(AreaMeasure):
    normals: np.ndarray
    masses: np.ndarray

    @property
    def n(self):
        return self.normals.shape[1]

    def pair(self, g, u):
        u = _unit(u)
        if len(self.masses) == 0:
            return 0.0
        return float(np.dot(self.masses, _kernel(g)(np.clip(self.normals @ u, -1, 1))))

    def total_mass(self):
        return float(np.sum(self.masses))

    def centroid(self) -> np.ndarray:
        return self.masses @ self.normals if len(self.masses) else np.zeros(self.n)


@lru_cache(maxsize=8)
def _graded_rule(m: int):
    # Gauss-Legendre on [0,1] through s -> s^2 / (s^2 + (1-s)^2): nodes cluster
    # at both ends, so integrable endpoint singularities converge quickly
    x, w = np.polynomial.legendre.leggauss(m)
    s = 0.5 * (x + 1)
    d = s * s + (1 - s) ** 2
    phi = s * s / d
    dphi = 2 * s * (1 - s) / (d * d)
    return phi, 0.5 * w * dphi


@dataclass(frozen=True, eq=False)
class Arcs(AreaMeasure):
    """sum_e w_e * (arc length measure on the short great-circle arc a_e -> b_e)."""
    starts: np.ndarray
    ends: np.ndarray
    weights: np.ndarray
    points: int = 48

    @property
    def n(self):
        return self.starts.shape[1]

    def _frames(self):
        a, b = self.starts, self.ends
        cos = np.clip(np.sum(a * b, axis=1), -1, 1)
        perp = b - cos[:, None] * a
        perp /= np.linalg.norm(perp, axis=1)[:, None]
        return a, perp, np.arccos(cos)

    def pair(self, g, u):
        u = _unit(u)
        f = _kernel(g)
        a, p, phi = self._frames()
        x, w = _graded_rule(self.points)
        total = 0.0
        for e in range(len(self.weights)):
            # u.v(theta) = A cos(theta) + B sin(theta); split where it vanishes
            # (kinks of |t|) and where it is extremal (kernel singular at t = +-1)
            A, B = a[e] @ u, p[e] @ u
            cuts = [0.0, phi[e]]
            if A * A + B * B > 0:
                th0 = math.atan2(B, A)
                for m in range(-4, 4):
                    c = th0 + m * math.pi / 2
                    if 1e-14 < c < phi[e] - 1e-14:
                        cuts.append(c)
            cuts = np.sort(cuts)
            for lo, hi in zip(cuts[:-1], cuts[1:]):
                th = lo + (hi - lo) * x
                vals = f(np.clip(A * np.cos(th) + B * np.sin(th), -1, 1))
                total += self.weights[e] * (hi - lo) * np.dot(w, vals)
        return float(total)

    def total_mass(self):
        return float(np.dot(self.weights, self._frames()[2]))


@dataclass(frozen=True, eq=False)
class UniformSphere(AreaMeasure):
    n: int
    mass: float
    points: int = DEFAULT_POINTS

    def pair(self, g, u):
        _unit(u)
        if isinstance(g, ZonalProfile):
            # only the degree-0 coefficient pairs with a uniform measure
            return self.mass * float(g.coeffs[0])
        return self.mass * float(funk_hecke_table(self.n, 0, _kernel(g), self.points,
                                                  check=False)[0])

    def total_mass(self):
        return self.mass


@dataclass(frozen=True, eq=False)
class UniformSubsphere(AreaMeasure):
    """Uniform measure of the given mass on the unit sphere of span(basis rows)."""
    basis: np.ndarray
    mass: float
    points: int = DEFAULT_POINTS

    @property
    def n(self):
        return self.basis.shape[1]

    @property
    def dim(self):
        return self.basis.shape[0]

    def pair(self, g, u):
        u = _unit(u)
        f = _kernel(g)
        rho = float(np.linalg.norm(self.basis @ u))
        d = self.dim
        if d == 1:
            return self.mass * 0.5 * float(f(np.array(rho)) + f(np.array(-rho)))
        t, w = half_rule((d - 3) / 2, self.points)
        avg = np.dot(w, f(rho * t) + f(-rho * t)) / (2 * w.sum())
        return self.mass * float(avg)

    def total_mass(self):
        return self.mass


@dataclass(frozen=True, eq=False)
class ZonalDensity(AreaMeasure):
    """Density sum_k c_k P_k(v.axis) against the plain surface measure."""
    density: ZonalProfile
    pole: np.ndarray = None

    def __post_init__(self):
        if self.pole is None:
            object.__setattr__(self, "pole", axis(self.density.n))

    @property
    def n(self):
        return self.density.n

    def pair(self, g, u):
        u = _unit(u)
        K = self.density.K
        n = self.n
        if isinstance(g, ZonalProfile) and (g.kernel is None or g.K >= K):
            m = g.padded(max(K, g.K)).multipliers()[:K + 1]
        else:
            m = funk_hecke_table(n, K, _kernel(g), check=False)
        zp = ZonalProfile(n, m * self.density.coeffs)
        return omega(n - 1) * float(zp(np.clip(u @ self.pole, -1, 1)))

    def total_mass(self):
        return omega(self.n - 1) * float(self.density.coeffs[0])


@dataclass(frozen=True, eq=False)
class SteinerCombo(AreaMeasure):
    terms: tuple

    @property
    def n(self):
        return self.terms[0][1].n

    def pair(self, g, u):
        return float(sum(c * m.pair(g, u) for c, m in self.terms if c != 0))

    def total_mass(self):
        return float(sum(c * m.total_mass() for c, m in self.terms))


def zero_measure(n: int) -> Atomic:
    return Atomic(np.zeros((0, n)), np.zeros(0))


# --- bodies --------------------------------------------------------------

class ConvexBody:
    n: int

    def support(self, u) -> float:
        raise NotImplementedError

    def area_measure(self, i: int) -> AreaMeasure:
        raise NotImplementedError

    def _check_order(self, i):
        if not 0 <= i <= self.n - 1:
            raise ValueError(f"area measure order must lie in 0..{self.n - 1}, got {i}")
        if i == 0:
            return UniformSphere(self.n, omega(self.n - 1))
        return None


def _orth_complement(A: np.ndarray, n: int) -> np.ndarray:
    """Orthonormal rows spanning the complement of the row space of A."""
    if A.size == 0:
        return np.eye(n)
    _, sv, vt = np.linalg.svd(A, full_matrices=True)
    r = int(np.sum(sv > MERGE_TOL * max(1.0, sv[0])))
    return vt[r:]


class Polytope(ConvexBody):
    """Convex hull of a finite vertex list (possibly lower dimensional)."""

    def __init__(self, vertices: Sequence[Sequence[float]]):
        V = np.array(vertices, dtype=float)
        if V.ndim != 2 or len(V) == 0:
            raise ValueError("polytope needs a nonempty list of vertices")
        self.vertices = V
        self.n = V.shape[1]

    @cached_property
    def _affine(self):
        c = self.vertices - self.vertices.mean(axis=0)
        if len(c) == 1:
            return 0, np.zeros((0, self.n))
        _, sv, vt = np.linalg.svd(c, full_matrices=False)
        d = int(np.sum(sv > MERGE_TOL * max(1.0, sv[0])))
        return d, vt[:d]

    @property
    def dim(self) -> int:
        return self._affine[0]

    def support(self, u):
        return float(np.max(self.vertices @ _unit(u)))

    def volume_in_hull(self) -> float:
        """d-dimensional volume inside the affine hull."""
        d, span = self._affine
        if d == 0:
            return 1.0
        coords = (self.vertices - self.vertices.mean(axis=0)) @ span.T
        if d == 1:
            return float(np.ptp(coords[:, 0]))
        return float(ConvexHull(coords).volume)

    @cached_property
    def facets(self):
        """(normals, areas, vertex index sets) with coplanar hull simplices merged."""
        if self.dim < self.n:
            raise CapabilityError("facets need a full-dimensional polytope")
        hull = ConvexHull(self.vertices)
        normals, offsets, areas, verts = [], [], [], []
        for simplex, eq in zip(hull.simplices, hull.equations):
            nrm, off = eq[:-1], eq[-1]
            P = self.vertices[simplex]
            E = P[1:] - P[0]
            area = math.sqrt(max(np.linalg.det(E @ E.T), 0.0)) / math.factorial(self.n - 1)
            for f in range(len(normals)):
                if np.linalg.norm(normals[f] - nrm) < MERGE_TOL and abs(offsets[f] - off) < MERGE_TOL:
                    areas[f] += area
                    verts[f] |= set(simplex.tolist())
                    break
            else:
                normals.append(nrm)
                offsets.append(off)
                areas.append(area)
                verts.append(set(simplex.tolist()))
        return np.array(normals), np.array(areas), verts

    def edges(self):
        """(length, normal_a, normal_b) for each edge of a 3-polytope."""
        if self.n != 3:
            raise CapabilityError("edge enumeration is implemented for n = 3")
        normals, _, verts = self.facets
        out = []
        for a in range(len(normals)):
            for b in range(a + 1, len(normals)):
                shared = sorted(verts[a] & verts[b])
                if len(shared) >= 2:
                    P = self.vertices[shared]
                    length = max(np.linalg.norm(p - q) for p in P for q in P)
                    if length > MERGE_TOL:
                        out.append((length, normals[a], normals[b]))
        return out

    def area_measure(self, i: int) -> AreaMeasure:
        base = self._check_order(i)
        if base is not None:
            return base
        n, d = self.n, self.dim
        if d < n:
            if i > d:
                return zero_measure(n)
            if i == d:
                comp = _orth_complement(self._affine[1], n)
                mass = n * kappa(n - d) * self.volume_in_hull() / math.comb(n, d)
                return UniformSubsphere(comp, mass)
            raise CapabilityError(
                f"area measure of order {i} for a {d}-dimensional polytope in R^{n}")
        if i == n - 1:
            normals, areas, _ = self.facets
            return Atomic(normals, areas)
        if i == 1 and n == 3:
            E = self.edges()
            return Arcs(np.array([e[1] for e in E]), np.array([e[2] for e in E]),
                        0.5 * np.array([e[0] for e in E]))
        raise CapabilityError(
            f"polytope area measure S_{i} in dimension {n} (only S_{n - 1}, and S_1 for n=3)")

    def projection_volume(self, u) -> float:
        """vol_{n-1}(K | u^perp) = (1/2) sum_facets area |u.n_f|."""
        u = _unit(u)
        normals, areas, _ = self.facets
        return 0.5 * float(np.dot(areas, np.abs(normals @ u)))


class SubspaceCube(Polytope):
    """Unit i-cube [0,1]^i inside span(e_1..e_i)."""

    def __init__(self, n: int, i: int):
        if not 1 <= i <= n - 1:
            raise ValueError(f"cube dimension must lie in 1..{n - 1}")
        grid = np.array(np.meshgrid(*[[0.0, 1.0]] * i, indexing="ij")).reshape(i, -1).T
        V = np.zeros((len(grid), n))
        V[:, :i] = grid
        super().__init__(V)
        self.i = i


def cube(n: int, side: float = 1.0) -> Polytope:
    grid = np.array(np.meshgrid(*[[0.0, side]] * n, indexing="ij")).reshape(n, -1).T
    return Polytope(grid)


@dataclass(frozen=True, eq=False)
class Ball(ConvexBody):
    n: int
    radius: float = 1.0

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")

    def support(self, u):
        _unit(u)
        return float(self.radius)

    def area_measure(self, i):
        self._check_order(i)
        return UniformSphere(self.n, self.radius ** i * self.n * kappa(self.n))


@dataclass(frozen=True, eq=False)
class ZonalSmooth(ConvexBody):
    """Body of revolution about e_n with support function h(u) = p(u.e_n)."""
    profile: ZonalProfile
    check: bool = True

    def __post_init__(self):
        if self.check and self.profile.n == 3:
            ok, margin = is_support_function(self.profile)
            if not ok:
                raise ValueError(f"profile is not a support function (margin {margin:.2e})")

    @property
    def n(self):
        return self.profile.n

    def support(self, u):
        return float(self.profile(np.clip(_unit(u) @ axis(self.n), -1, 1)))

    def area_measure(self, i):
        base = self._check_order(i)
        if base is not None:
            return base
        if i != 1:
            raise CapabilityError(f"zonal smooth bodies support order 1 only, got {i}")
        p = self.profile
        box = np.array([box_multiplier(self.n, k) for k in range(p.K + 1)])
        return ZonalDensity(ZonalProfile(self.n, p.coeffs * box))


@dataclass(frozen=True, eq=False)
class BallSum(ConvexBody):
    """K + tB; area measures via S_i(K+tB) = sum_j binom(i,j) t^(i-j) S_j(K)."""
    base: ConvexBody
    t: float

    def __post_init__(self):
        if self.t < 0:
            raise ValueError("BallSum needs t >= 0; use steiner_measure for formal t")

    @property
    def n(self):
        return self.base.n

    def support(self, u):
        return self.base.support(u) + self.t

    def area_measure(self, i):
        self._check_order(i)
        return steiner_measure(self.base, i, self.t)


def steiner_measure(K: ConvexBody, i: int, t: float) -> SteinerCombo:
    """Steiner polynomial sum_j binom(i,j) t^(i-j) S_j(K), any real t."""
    return SteinerCombo(tuple((math.comb(i, j) * t ** (i - j), K.area_measure(j))
                              for j in range(i + 1)))


# --- support-function test ------------------------------------------------

SMOOTH_MIN_DEGREE = 8


def smoothing_multipliers(n: int, K: int, M: int) -> np.ndarray:
    """m_k / m_0 of the positive kernel (1+t)^M, k = 0..K."""
    m = funk_hecke_table(n, K, lambda t: (1 + t) ** M, m=max(DEFAULT_POINTS, M + K), check=False)
    return m / m[0]


def sphere_zonal(p) -> ZonalProfile:
    """Zonal profile on S^2 of a support profile (ZonalProfile or sphere-side GrassProfile).

    For GrassProfiles in n = 3 the distinguished subspace is the e_n axis (i=1)
    or its orthogonal plane (i=2), giving p(|t|) or p(sqrt(1-t^2)).
    """
    if isinstance(p, ZonalProfile):
        return p
    if not isinstance(p, GrassProfile):
        raise TypeError("expected a profile")
    if p.i == 1:
        f = lambda t: p(np.abs(t))
    elif p.i == p.n - 1:
        f = lambda t: p(np.sqrt(np.clip(1 - t * t, 0, None)))
    else:
        raise CapabilityError("support test needs i = 1 or i = n-1")
    return expand_zonal(p.n, f, p.K, warn=False)


def is_support_function(p, n: int = 3, tol: float = 1e-8, grid: int = 721):
    """Convexity test for a body of revolution in R^3.

    The profile is first averaged with the positive kernel (1+t)^M,
    M = max(K, 8): a positive average of rotated copies of a support
    function is again one, and for M <= K this equals the average of the
    untruncated function, so band-limit ripple does not produce false
    negatives. Then both principal radii h + h'' and h + cot(theta) h' are
    sampled along the meridian. Returns (passed, margin).
    """
    z = sphere_zonal(p)
    if z.n != 3 or n != 3:
        raise CapabilityError("support-function test implemented for n = 3")
    K = z.K
    M = max(K, SMOOTH_MIN_DEGREE)
    c = z.coeffs * smoothing_multipliers(3, K, M)
    theta = np.linspace(0, np.pi, grid)
    x, s = np.cos(theta), np.sin(theta)
    d1 = npleg.legder(c, 1) if K >= 1 else np.zeros(1)
    d2 = npleg.legder(c, 2) if K >= 2 else np.zeros(1)
    h = npleg.legval(x, c)
    hp = npleg.legval(x, d1)
    hpp = npleg.legval(x, d2)
    r1 = h + s * s * hpp - x * hp          # h + h''
    r2 = h - x * hp                        # h + cot(theta) h'
    margin = float(min(r1.min(), r2.min()))
    return margin >= -tol, margin
