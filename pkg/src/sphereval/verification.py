"""The acceptance checks, shared by `sphereval verify` and the test suite.

Each check returns CheckResult(check, status, residual, tolerance). Reference
values come from closed forms, Monte Carlo (seeded) or the independent
routines in `oracles`, never from the code path being checked alone.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Iterable

import numpy as np
from scipy.integrate import quad

from . import oracles
from .bodies import Ball, BallSum, Polytope, SubspaceCube, ZonalSmooth, cube, steiner_measure
from .lefschetz import (apply_power, fourier_op, l_iterate_meansection, l_op, l_op_berg,
                        lambda_op, lambda_steiner_oracle, mean_section_step_constant)
from .mval import (ValuationRep, builtin, convert, evaluate, klain_body_direct,
                   mean_section_constant, to_crofton, to_generating, to_klain)
from .profiles import (GrassProfile, ZonalProfile, expand_grass, grass_norm_sq, zonal_to_grass)
from .specfun import kappa
from .transforms import (TransformTag, apply_multiplier, berg_multipliers, berg_zeta,
                         box_multiplier, commutation_defect, cosine_multiplier, multiplier_seq,
                         radon_down, radon_sphere_kernel)


@dataclass
class CheckResult:
    check: str
    status: str
    residual: float
    tolerance: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def as_dict(self):
        return asdict(self)


def _result(name, residual, tol, detail="") -> CheckResult:
    residual = float(residual)
    ok = np.isfinite(residual) and residual <= tol
    return CheckResult(name, "pass" if ok else "fail", residual, tol, detail)


def _rel(x, y) -> float:
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return float(np.max(np.abs(x - y)) / max(np.max(np.abs(y)), 1e-300))


def random_even_generating(n: int, K: int, rng) -> ZonalProfile:
    a = np.zeros(K + 1)
    a[0::2] = rng.standard_normal(K // 2 + 1) / (1.0 + np.arange(K // 2 + 1)) ** 2
    return ZonalProfile(n, a)


def random_grass(n: int, i: int, K: int, rng) -> GrassProfile:
    return GrassProfile(n, i, rng.standard_normal(K // 2 + 1) / (1.0 + np.arange(K // 2 + 1)))


def _sphere_dirs(n, count, rng):
    U = rng.standard_normal((count, n))
    return U / np.linalg.norm(U, axis=1)[:, None]


# --- 1 multipliers ---------------------------------------------------------

def check_multipliers(ns=(3, 4, 5), kmax: int = 16) -> list:
    out = [_result("cosine_3_1_0", abs(cosine_multiplier(3, 1, 0) - 0.5), 1e-10),
           _result("cosine_3_1_2", abs(cosine_multiplier(3, 1, 2) - 0.125), 1e-10)]
    worst = 0.0
    for n in ns:
        for k in range(0, kmax + 1, 2):
            # independent c^1 by adaptive quadrature, constant through Gamma
            f = lambda t: abs(t) * _legendre_scalar(n, k, t) * (1 - t * t) ** ((n - 3) / 2)
            ratio = math.gamma(n / 2) / (math.sqrt(math.pi) * math.gamma((n - 1) / 2))
            c1 = ratio * (quad(f, -1, 0, epsabs=1e-14, epsrel=1e-13, limit=200)[0]
                          + quad(f, 0, 1, epsabs=1e-14, epsrel=1e-13, limit=200)[0])
            for i in range(1, n):
                ball = lambda d: math.pi ** (d / 2) / math.gamma(d / 2 + 1)
                const = n * ball(i) * ball(n - i) / (2 * ball(n - 1)) / math.comb(n, i)
                worst = max(worst, abs(cosine_multiplier(n, i, k) - const * c1))
            worst = max(worst, abs(cosine_multiplier(n, n - 1, k) - cosine_multiplier(n, 1, k)))
    out.append(_result("cosine_scaling_all_i", worst, 1e-10, f"n in {list(ns)}, k <= {kmax}"))
    return out


def _legendre_scalar(n, k, t):
    from .specfun import legendre_nd
    return legendre_nd(n, k, t)


# --- 2 commutation -------------------------------------------------------

def check_commutation(cases=((4, 1, 2), (4, 1, 3), (5, 2, 3)), count: int = 20, K: int = 16,
                      seed: int = 0) -> list:
    rng = np.random.default_rng(seed)
    out = []
    for n, i, j in cases:
        worst = max(commutation_defect(n, i, j, random_grass(n, i, K, rng)) for _ in range(count))
        out.append(_result(f"commutation_{n}_{i}_{j}", worst, 1e-8))
    return out


# --- 3 Radon consistency and Beta law ----------------------------------------

def check_radon(ns=(4, 5), K: int = 16, seed: int = 0, samples: int = 1_000_000) -> list:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in ns:
        for i in range(1, n - 1):
            for _ in range(3):
                g = random_even_generating(n, K, rng)
                a = radon_sphere_kernel(n, i, g).coeffs
                b = radon_down(zonal_to_grass(g), i).coeffs
                worst = max(worst, float(np.max(np.abs(a - b))))
    out = [_result("radon_kernel_vs_norm_ratio", worst, 1e-6, f"n in {list(ns)}")]
    from .profiles import grass_basis_q
    zmax = 0.0
    for n, i, k in ((3, 1, 1), (4, 1, 1), (4, 2, 1), (4, 2, 2), (5, 2, 1), (5, 3, 2)):
        s = oracles.haar_s_samples(n, i, samples, seed + 7 * n + i)
        mean, se = oracles.mc_mean(grass_basis_q(n, i, k)(s) ** 2)
        zmax = max(zmax, abs(mean - grass_norm_sq(n, i, k)) / se)
    out.append(_result("beta_pushforward_mc", zmax, 3.0,
                       f"max |exact - MC| in standard errors, {samples} Haar samples"))
    return out


# --- 4 representation triangle ---------------------------------------------

def check_triangle(ns=(3, 4, 5), K: int = 16, count: int = 10, seed: int = 0) -> list:
    rng = np.random.default_rng(seed)
    vals = [builtin("Pi", n, i, K) for n in ns for i in range(1, n)]
    for _ in range(count):
        n = int(rng.choice(ns))
        i = int(rng.integers(1, n))
        vals.append(ValuationRep(n, i, "generating", random_even_generating(n, K, rng)))
    tri, rt = 0.0, 0.0
    for v in vals:
        tri = max(tri, float(np.max(np.abs(to_klain(to_crofton(v)).profile.coeffs
                                           - klain_body_direct(v).coeffs))))
        back = to_generating(to_crofton(v)).profile.coeffs
        rt = max(rt, float(np.max(np.abs(back - v.profile.coeffs[:len(back)]))))
    return [_result("klain_triangle", tri, 1e-6, f"{len(vals)} valuations"),
            _result("crofton_roundtrip", rt, 1e-7)]


# --- 5 projection bodies ------------------------------------------------------

def disk_profile_coeffs(n: int, i: int, K: int) -> np.ndarray:
    """q^(i) coefficients of r -> sqrt(1 - r^2), the support of the unit ball of e^perp."""
    return expand_grass(n, i, lambda s: np.sqrt(np.clip(1 - s * s, 0, None)), K, shift=0.5,
                        warn=False).coeffs


def check_projection_bodies(count: int = 100, seed: int = 0, K: int = 32) -> list:
    rng = np.random.default_rng(seed)
    Q = cube(3)
    v = builtin("Pi", 3, 2, K)
    err = max(abs(evaluate(v, Q, u) - Q.projection_volume(u)) for u in _sphere_dirs(3, count, rng))
    out = [_result("pi2_cube_projection", err, 1e-12, f"{count} directions")]
    worst = 0.0
    for n in (3, 4):
        for i in range(1, n):
            h = to_klain(builtin("Pi", n, i, K)).profile.coeffs
            d = disk_profile_coeffs(n, i, K)
            rho = float(h @ d / (d @ d))
            worst = max(worst, float(np.max(np.abs(h - rho * d))) / abs(rho))
    out.append(_result("pi_klain_sphericity", worst, 1e-6))
    return out


# --- 6 Lambda ---------------------------------------------------------------

def check_lambda(ns=(3, 4, 5), K: int = 16, seed: int = 0) -> list:
    exact = 0.0
    for n in ns:
        top = builtin("Pi", n, n - 1, K)
        for i in range(1, n):
            lhs = apply_power(lambda_op, top, n - 1 - i).profile.coeffs
            rhs = builtin("Pi", n, i, K).profile.coeffs * math.factorial(n - 1) / math.factorial(i)
            exact = max(exact, _rel(lhs, rhs))
    rng = np.random.default_rng(seed)
    comm = 0.0
    for n in ns:
        for i in range(2, n):
            for g in (builtin("Pi", n, i, K), ValuationRep(n, i, "generating",
                                                           random_even_generating(n, K, rng))):
                for kind in ("crofton", "klain"):
                    a = convert(lambda_op(g), kind).profile.coeffs
                    b = lambda_op(convert(g, kind)).profile.coeffs
                    comm = max(comm, float(np.max(np.abs(a - b))))
    return [_result("lambda_power_pi", exact, 1e-12, "relative, coefficient level"),
            _result("lambda_branch_commutation", comm, 1e-6)]


# --- 7 finite differences --------------------------------------------------

def check_finite_difference(h: float = 1e-3, seed: int = 0, K: int = 32) -> list:
    rng = np.random.default_rng(seed)
    worst = 0.0
    cases = [(cube(3), builtin("Pi", 3, 2, K))]
    cases += [(Ball(n, 1.3), builtin("Pi", n, i, K)) for n in (3, 4) for i in range(2, n)]
    cases += [(cube(3), ValuationRep(3, 2, "generating", random_even_generating(3, K, rng)))]
    for body, v in cases:
        lam = lambda_op(v)
        for u in _sphere_dirs(body.n, 5, rng):
            fd = lambda_steiner_oracle(v, body, u, h)
            worst = max(worst, abs(fd - evaluate(lam, body, u)))
    return [_result("lambda_finite_difference", worst, 1e-5, f"h = {h}")]


# --- 8 two L pipelines ------------------------------------------------------

def check_l_pipelines(n: int = 4, K: int = 16, count: int = 5, seed: int = 0) -> list:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in (1, 2):
        inputs = [builtin("Pi", n, i, K)] + [
            ValuationRep(n, i, "generating", random_even_generating(n, K, rng))
            for _ in range(count)]
        for v in inputs:
            worst = max(worst, _rel(l_op_berg(v).profile.coeffs, l_op(v).profile.coeffs))
    out = [_result("l_radon_vs_berg", worst, 1e-5, f"n = {n}, K = {K}")]
    rec = 0.0
    for i in range(1, n - 1):
        src = builtin("MeanSection", n, n + 1 - i, K, even=False)
        got = np.delete(l_op_berg(src).profile.coeffs, 1)
        want = np.delete(builtin("MeanSection", n, n - i, K, even=False).profile.coeffs, 1)
        rec = max(rec, _rel(got, mean_section_step_constant(n, i) * want))
    out.append(_result("mean_section_recursion", rec, 1e-5))
    it = 0.0
    J = builtin("SteinerJ", n, 1, K)
    for i in range(1, n - 1):
        got = np.delete(apply_power(l_op_berg, J, i).profile.coeffs, 1)
        want = np.delete(builtin("MeanSection", n, n - i, K, even=False).profile.coeffs, 1)
        it = max(it, _rel(got, l_iterate_meansection(n, i) * want))
    out.append(_result("l_iterate_steiner_point", it, 1e-5))
    return out


# --- 9 Fourier -----------------------------------------------------------------

def check_fourier(n: int = 4, i: int = 2, K: int = 16, count: int = 5, seed: int = 0) -> list:
    rng = np.random.default_rng(seed)
    vals = [builtin("Pi", n, i, K)] + [
        ValuationRep(n, i, "generating", random_even_generating(n, K, rng)) for _ in range(count)]
    link, inv = 0.0, 0.0
    for g in vals:
        v = to_klain(g)
        a = fourier_op(lambda_op(v)).profile.coeffs
        b = 2 * l_op(fourier_op(v)).profile.coeffs
        link = max(link, float(np.max(np.abs(a - b))))
        inv = max(inv, float(np.max(np.abs(fourier_op(fourier_op(v)).profile.coeffs
                                           - v.profile.coeffs))))
    return [_result("fourier_lambda_link", link, 1e-6, f"n = {n}, i = {i}"),
            _result("fourier_involution", inv, 1e-9)]


# --- 10 Berg / box -------------------------------------------------------------

def check_berg(ns=(3, 4), K: int = 16, seed: int = 0) -> list:
    rng = np.random.default_rng(seed)
    out = []
    ks = np.array([k for k in range(K + 1) if k != 1])
    for n in ns:
        # j = n: ODE-quadrature convolution against the closed-form eigenvalue
        conv = oracles.berg_conv_multipliers_by_kernel(n, n, K)
        box = np.array([box_multiplier(n, k) for k in range(K + 1)])
        out.append(_result(f"berg_inverse_j{n}_n{n}", np.max(np.abs(conv[ks] * box[ks] - 1)), 1e-6))
        # library round trip on a zero-degree-1 profile
        c = rng.standard_normal(K + 1)
        c[1] = 0.0
        p = ZonalProfile(n, c)
        q = apply_multiplier(apply_multiplier(p, multiplier_seq(TransformTag.box(n), n, K)),
                             multiplier_seq(TransformTag.berg(n), n, K))
        out.append(_result(f"berg_after_box_n{n}", np.max(np.abs(q.coeffs - c)), 1e-6))
        for j in range(2, n):
            conv = oracles.berg_conv_multipliers_by_kernel(n, j, K)
            box_j = multiplier_seq(TransformTag.box(j), n, K).values
            out.append(_result(f"berg_inverse_j{j}_n{n}", np.max(np.abs(conv[ks] * box_j[ks] - 1)),
                               1e-4))
    k1 = max(abs(multiplier_seq(TransformTag.box(j), n, 4).values[1])
             for n in ns for j in range(2, n + 1))
    out.append(_result("box_degree1_zero", k1, 0.0))
    return out


def check_berg_band_limit(n: int, K: int, tol: float = 0.2) -> list:
    """Pointwise error of the K-term Abel-summed zeta_n against the ODE solution on |t| <= 1/2."""
    t = np.linspace(-0.5, 0.5, 21)
    ref = oracles.berg_ode(n)(t)
    err = float(np.max(np.abs(berg_zeta(n, K)(t) - ref)) / np.max(np.abs(ref)))
    return [_result(f"berg_band_limit_n{n}_K{K}", err, tol,
                    "relative interior error of the truncated profile")]


# --- 11 area measures ----------------------------------------------------------

def check_area_measures(seed: int = 0) -> list:
    rng = np.random.default_rng(seed)
    mass = 0.0

    def law(measure, n, i, Vi):
        return abs(measure.total_mass() - oracles.area_measure_mass(n, i, Vi)) / max(1.0, Vi)

    for n in (3, 4):
        Q = cube(n)
        for i in (1, n - 1) if n == 3 else (n - 1,):
            mass = max(mass, law(Q.area_measure(i), n, i, oracles.cube_intrinsic_volume(n, i)))
    for n in (3, 4, 5):
        for i in range(1, n):
            mass = max(mass, law(Ball(n, 2.0).area_measure(i), n, i,
                                 oracles.ball_intrinsic_volume(n, i, 2.0)))
            mass = max(mass, law(SubspaceCube(n, i).area_measure(i), n, i, 1.0))
    mass = max(mass, law(Polytope([[0, 0, 0], [2.5, 0, 0]]).area_measure(1), 3, 1, 2.5))
    for t in (0.1, 0.5, 1.0):
        for i in (1, 2):
            V = oracles.parallel_intrinsic_volume(3, i, lambda j: oracles.cube_intrinsic_volume(3, j), t)
            mass = max(mass, law(BallSum(cube(3), t).area_measure(i), 3, i, V))
    ball_prof = ZonalProfile(3, [1.5])
    mass = max(mass, law(ZonalSmooth(ball_prof).area_measure(1), 3, 1,
                         oracles.ball_intrinsic_volume(3, 1, 1.5)))
    centroid = float(np.max(np.abs(cube(3).area_measure(2).centroid())))
    out = [_result("total_mass_law", mass, 1e-10), _result("facet_centroid", centroid, 1e-10)]

    worst = 0.0
    Q = cube(3)
    for _ in range(20):
        a = np.zeros(9)
        a[0::2] = rng.standard_normal(5)
        g = ZonalProfile(3, a)
        u = _sphere_dirs(3, 1, rng)[0]
        for t in (0.1, 0.5, 1.0):
            combo = BallSum(Q, t).area_measure(2).pair(g, u)
            worst = max(worst, abs(combo - oracles.sausage_pairing(lambda x: g(x), u, t)))
    out.append(_result("steiner_vs_sausage", worst, 1e-8, "cube + tB, 20 kernels"))

    ck = 0.0
    S1 = Q.area_measure(1)
    for nH in _sphere_dirs(3, 10, rng):
        lhs = oracles.cube_width_average(nH)
        rhs = kappa(1) / (4 * kappa(2)) * 2 * S1.pair(np.abs, nH)
        ck = max(ck, abs(lhs - rhs))
    out.append(_result("cauchy_kubota_cube", ck, 1e-6, "n = 3, i = 1"))
    return out


# --- driver ---------------------------------------------------------------

CRITERIA: dict = {
    1: ("multiplier ground truth", lambda cfg: check_multipliers()),
    2: ("cosine/Radon commutation", lambda cfg: check_commutation(seed=cfg["seed"])),
    3: ("Radon consistency and Beta law",
        lambda cfg: check_radon(seed=cfg["seed"], samples=cfg["samples"])),
    4: ("representation triangle", lambda cfg: check_triangle(seed=cfg["seed"])),
    5: ("projection-body identities", lambda cfg: check_projection_bodies(seed=cfg["seed"])),
    6: ("Lambda on generating/Crofton/Klain", lambda cfg: check_lambda(seed=cfg["seed"])),
    7: ("finite-difference Lambda", lambda cfg: check_finite_difference(seed=cfg["seed"])),
    8: ("two L pipelines and mean sections", lambda cfg: check_l_pipelines(seed=cfg["seed"])),
    9: ("Fourier transform and Lambda", lambda cfg: check_fourier(seed=cfg["seed"])),
    10: ("Berg functions and box", lambda cfg: check_berg(seed=cfg["seed"])),
    11: ("area-measure laws", lambda cfg: check_area_measures(seed=cfg["seed"])),
}


def run_all(n: int = 3, K: int = 32, seed: int = 0, samples: int = 1_000_000,
            only: Iterable[int] | None = None) -> list:
    """All acceptance checks plus the band-limit diagnostic for the configured (n, K)."""
    cfg = {"n": n, "K": K, "seed": seed, "samples": samples}
    results = []
    for key in sorted(CRITERIA):
        if only is not None and key not in only:
            continue
        results.extend(CRITERIA[key][1](cfg))
    if only is None:
        results.extend(check_berg_band_limit(n, K))
    return results
