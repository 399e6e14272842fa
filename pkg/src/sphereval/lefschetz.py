"""Hard Lefschetz derivation and integration, and the Fourier-type transform.

Lambda lowers the degree by one (derivative of Phi(K + tB) at t = 0),
L raises it by one (hyperplane-section integral), F maps degree i to n-i
on Klain profiles via E -> E^perp. Every operator acts diagonally on the
profile coefficients up to a kappa constant.
"""
from __future__ import annotations

import math

import numpy as np

from .bodies import ConvexBody, steiner_measure
from .mval import OperatorReport, ValuationRep, hyperplane_radon_diagonal
from .profiles import ZonalProfile
from .specfun import kappa
from .transforms import berg_multipliers, perp, radon_down, radon_up


def _check(v: ValuationRep, degree_to: int, op: str):
    if not 1 <= degree_to <= v.n - 1:
        raise ValueError(f"{op} maps degree {v.i} to {degree_to}, outside 1..{v.n - 1}")


def lambda_constant(n: int, i: int, kind: str) -> float:
    if kind == "generating":
        return float(i)
    if kind == "crofton":
        return i * kappa(i) / kappa(i - 1)
    return (n - i + 1) * kappa(n - i + 1) / kappa(n - i)


def lambda_op(v: ValuationRep) -> ValuationRep:
    """Derivation: degree i -> i-1 in any representation."""
    _check(v, v.i - 1, "Lambda")
    n, i = v.n, v.i
    c = lambda_constant(n, i, v.kind)
    if v.kind == "generating":
        out = v.profile.scaled(c)
    else:
        out = radon_down(v.profile, i - 1).scaled(c)
    rep = OperatorReport("lambda", v.kind, v.kind, i, i - 1, (("scale", c),))
    return v.with_profile(out, i=i - 1, report=rep)


def l_constant(n: int, i: int, kind: str) -> float:
    if kind == "generating":
        return (n - i) * kappa(i + 1) * kappa(n - i) / (2 * kappa(i) * kappa(n - i - 1))
    if kind == "crofton":
        return (n - i) * kappa(n - i) / (2 * kappa(n - i - 1))
    return (i + 1) * kappa(i + 1) / (2 * kappa(i))


def l_op(v: ValuationRep) -> ValuationRep:
    """Integration: degree i -> i+1.

    Crofton and Klain profiles move up by R_{i,i+1}; a generating function
    goes through R_{n-1,i+1}^{-1} R_{i,i+1} R_{n-1,i}, all diagonal.
    """
    _check(v, v.i + 1, "L")
    n, i = v.n, v.i
    c = l_constant(n, i, v.kind)
    cond = 1.0
    if v.kind == "generating":
        g = v.profile
        if g.coeffs[1::2].any():
            raise ValueError("the Radon pipeline for L needs an even generating function")
        K = g.K - g.K % 2
        kmax = K // 2
        lo = hyperplane_radon_diagonal(n, i, kmax)
        hi = hyperplane_radon_diagonal(n, i + 1, kmax)
        cond = float(np.max(np.abs(hi)) / np.min(np.abs(hi)))
        a = np.zeros(K + 1)
        a[0::2] = c * g.coeffs[0:K + 1:2] * lo / hi
        out = ZonalProfile(n, a)
    else:
        out = radon_up(v.profile, i + 1).scaled(c)
    rep = OperatorReport("L", v.kind, v.kind, i, i + 1, (("scale", c),), cond)
    return v.with_profile(out, i=i + 1, report=rep)


def berg_l_constant(n: int, i: int) -> float:
    """c_{n,i} = i(n-i-1)(n-i+1) k_{n-i-2}^2 k_{n-i+1} k_i / (2(n-i)(i+1) k_{n-i-3} k_{n-i}^2 k_{i-1})."""
    return (i * (n - i - 1) * (n - i + 1) * kappa(n - i - 2) ** 2 * kappa(n - i + 1) * kappa(i)
            / (2 * (n - i) * (i + 1) * kappa(n - i - 3) * kappa(n - i) ** 2 * kappa(i - 1)))


def l_op_berg(v: ValuationRep) -> ValuationRep:
    """Integration through Berg functions: f = c_{n,i} box_{n-i+1} g * zeta_{n-i}.

    Works for non-even generating functions. The degree-1 part of g is
    dropped first: linear functions pair to zero with every area measure,
    and box_{n-i+1} is only defined on their orthogonal complement.
    """
    if v.kind != "generating":
        raise ValueError("the Berg pipeline acts on generating functions")
    _check(v, v.i + 1, "L")
    n, i = v.n, v.i
    g = v.profile
    K = g.K
    c = berg_l_constant(n, i)
    lo = berg_multipliers(n, n - i, K)
    hi = berg_multipliers(n, n - i + 1, K)
    m = np.zeros(K + 1)
    nz = np.arange(K + 1) != 1
    m[nz] = c * lo[nz] / hi[nz]
    note = "degree-1 component removed" if K >= 1 and g.coeffs[1] != 0 else ""
    out = ZonalProfile(n, g.coeffs * m)
    rep = OperatorReport("L_berg", "generating", "generating", i, i + 1, (("c_ni", c),),
                         note=note)
    return ValuationRep(n, i + 1, "generating", out, v.even and out.parity == "even",
                        v.history + (rep,))


def fourier_op(v: ValuationRep) -> ValuationRep:
    """Klain profile of degree i -> its orthogonal complement profile of degree n-i."""
    if v.kind != "klain":
        raise ValueError("the Fourier transform acts on Klain profiles")
    if not v.even:
        raise ValueError("the Fourier transform is defined for even valuations only")
    out = perp(v.profile)
    rep = OperatorReport("fourier", "klain", "klain", v.i, v.n - v.i)
    return v.with_profile(out, i=v.n - v.i, report=rep)


def apply_power(op, v: ValuationRep, power: int = 1) -> ValuationRep:
    for _ in range(power):
        v = op(v)
    return v


def steiner_value(v: ValuationRep, K: ConvexBody, u, t: float) -> float:
    """h(Phi(K + tB), u) through the Steiner polynomial (formal for t < 0)."""
    if v.kind != "generating":
        raise ValueError("needs the generating representation")
    return steiner_measure(K, v.i, t).pair(v.profile, u)


def lambda_steiner_oracle(v: ValuationRep, K: ConvexBody, u, h_step: float = 1e-3) -> float:
    """Central difference of t -> h(Phi(K + tB), u) at t = 0."""
    return (steiner_value(v, K, u, h_step) - steiner_value(v, K, u, -h_step)) / (2 * h_step)


def l_iterate_meansection(n: int, i: int) -> float:
    """Constant in L^i J = n! k_n / (2^i (n-i)! k_{n-i}) M_{n-i}."""
    if not 0 <= i <= n - 2:
        raise ValueError(f"needs 0 <= i <= {n - 2}, got {i}")
    return math.factorial(n) * kappa(n) / (2 ** i * math.factorial(n - i) * kappa(n - i))


def mean_section_step_constant(n: int, i: int) -> float:
    """(n-i+1) k_{n-i+1} / (2 k_{n-i}), the factor in L M_{n+1-i} = const * M_{n-i}."""
    return (n - i + 1) * kappa(n - i + 1) / (2 * kappa(n - i))
