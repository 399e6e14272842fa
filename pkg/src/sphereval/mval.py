"""Minkowski valuation representations and conversions between them.

A degree-i valuation in R^n is held as one of
  generating  zonal g:  h(Phi K, u) = int g(u.v) dS_i(K, v)
  crofton     Gr_i profile of mu-hat (density against the invariant probability)
  klain       profile of h(M, .) for the Klain body M = Phi(K_e), e = span(e_1..e_i)
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from .bodies import ConvexBody, SubspaceCube
from .profiles import (GrassProfile, ZonalProfile, expand_zonal, grass_norms, grass_q_table,
                       grass_rule)
from .specfun import DEFAULT_K, DEFAULT_POINTS, kappa
from .transforms import (COND_LIMIT, ConditioningError, berg_profile, cosine_multipliers,
                         radon_sphere_kernel)

KINDS = ("generating", "crofton", "klain")


@dataclass(frozen=True)
class OperatorReport:
    op: str
    input_kind: str
    output_kind: str
    degree_from: int
    degree_to: int
    constants: tuple = ()
    condition: float = 1.0
    note: str = ""


@dataclass(frozen=True, eq=False)
class ValuationRep:
    n: int
    i: int
    kind: str
    profile: object
    even: bool = True
    history: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"representation must be one of {KINDS}, got {self.kind!r}")
        if not 1 <= self.i <= self.n - 1:
            raise ValueError(f"valuation degree must lie in 1..{self.n - 1}, got {self.i}")
        p = self.profile
        if p.n != self.n:
            raise ValueError(f"profile dimension {p.n} != valuation dimension {self.n}")
        if self.kind == "generating":
            if not isinstance(p, ZonalProfile):
                raise TypeError("generating functions are zonal profiles")
            if self.even and p.coeffs[1::2].any():
                raise ValueError("even valuation needs an even generating function")
        else:
            if not isinstance(p, GrassProfile):
                raise TypeError(f"{self.kind} representations are Grassmannian profiles")
            if p.i != self.i:
                raise ValueError(f"{self.kind} profile lives on Gr_{p.i}, degree is {self.i}")

    def with_profile(self, profile, i=None, kind=None, report=None) -> "ValuationRep":
        hist = self.history + ((report,) if report is not None else ())
        return ValuationRep(self.n, self.i if i is None else i, kind or self.kind, profile,
                            self.even, hist)

    def scaled(self, a: float) -> "ValuationRep":
        return replace(self, profile=self.profile.scaled(a))

    def __add__(self, other: "ValuationRep") -> "ValuationRep":
        if (other.n, other.i, other.kind) != (self.n, self.i, self.kind):
            raise ValueError("cannot add valuations of different dimension, degree or kind")
        return ValuationRep(self.n, self.i, self.kind, self.profile + other.profile,
                            self.even and other.even)


# --- constants and builtins ---------------------------------------------

def mean_section_constant(n: int, i: int) -> float:
    """q_{n,i} = (i-1)/(2 pi (n+1-i)) * k_{i-1} k_{i-2} k_{n-i} / (k_{i-3} k_{n-2})."""
    if not 2 <= i <= n:
        raise ValueError(f"mean section index must lie in 2..{n}, got {i}")
    return ((i - 1) / (2 * math.pi * (n + 1 - i)) * kappa(i - 1) * kappa(i - 2) * kappa(n - i)
            / (kappa(i - 3) * kappa(n - 2)))


def builtin(name: str, n: int, i: int = 1, K: int = DEFAULT_K, even: bool = True,
            m: int = DEFAULT_POINTS) -> ValuationRep:
    """Built-in valuations in generating form.

    Pi       projection body operator of degree i, g = |t|/2
    MeanSection  mean section operator M_i (2 <= i <= n), degree n+1-i,
             g = q_{n,i} zeta_i (its even part unless even=False)
    SteinerJ Steiner-point-centred body map, degree 1, g = zeta_n
    """
    key = name.lower().replace("_", "")
    if key in ("pi", "projection"):
        if not 1 <= i <= n - 1:
            raise ValueError(f"Pi_i needs 1 <= i <= {n - 1}, got {i}")
        half_abs = lambda t: 0.5 * np.abs(t)
        return ValuationRep(n, i, "generating", expand_zonal(n, half_abs, K, m=m, keep_kernel=True,
                                                             warn=False))
    if key in ("meansection", "meansectioneven", "m"):
        if not 2 <= i <= n:
            raise ValueError(f"mean section index must lie in 2..{n}, got {i}")
        g = berg_profile(n, i, K).scaled(mean_section_constant(n, i))
        if even:
            g = g.even_part()
        return ValuationRep(n, n + 1 - i, "generating", g, even=even)
    if key in ("steinerj", "j"):
        return ValuationRep(n, 1, "generating", berg_profile(n, n, K), even=False)
    raise ValueError(f"unknown builtin {name!r}; expected Pi, MeanSection or SteinerJ")


def evaluate(v: ValuationRep, K: ConvexBody, u) -> float:
    """h(Phi K, u) = int g(u.v) dS_i(K, v)."""
    if v.kind != "generating":
        raise ValueError("evaluation needs the generating representation")
    if K.n != v.n:
        raise ValueError("body and valuation dimensions differ")
    return K.area_measure(v.i).pair(v.profile, u)


# --- conversions -----------------------------------------------------------

def _check_cond(c1: np.ndarray) -> float:
    even = c1[0::2]
    cond = float(np.max(np.abs(even)) / np.min(np.abs(even)))
    if cond > COND_LIMIT:
        raise ConditioningError(f"inverse cosine transform condition {cond:.1e} exceeds "
                                f"{COND_LIMIT:.0e}; lower the band limit")
    return cond


@lru_cache(maxsize=128)
def hyperplane_radon_diagonal(n: int, i: int, kmax: int) -> np.ndarray:
    """Diagonal of the explicit-kernel R_{n-1,i}: zonal a_{2k} -> q^(i) coefficient."""
    out = np.empty(kmax + 1)
    for k in range(kmax + 1):
        c = np.zeros(2 * k + 1)
        c[-1] = 1.0
        out[k] = radon_sphere_kernel(n, i, ZonalProfile(n, c)).coeffs[k]
    out.setflags(write=False)
    return out


def _generating_coeffs(v: ValuationRep) -> np.ndarray:
    g = v.profile
    if g.coeffs[1::2].any():
        raise ValueError("conversion needs an even generating function")
    K = g.K - g.K % 2
    return g.coeffs[:K + 1]


def to_crofton(v: ValuationRep) -> ValuationRep:
    """mu-hat = (2 k_{n-1} / k_i) R_{n-1,i} C_{n-1}^{-1} g."""
    if v.kind == "crofton":
        return v
    if v.kind != "generating":
        raise ValueError("only generating functions convert to Crofton profiles")
    n, i = v.n, v.i
    a = _generating_coeffs(v)
    K = len(a) - 1
    c1 = cosine_multipliers(n, n - 1, K)
    cond = _check_cond(c1)
    b = np.zeros(K + 1)
    b[0::2] = a[0::2] / c1[0::2]
    mu = radon_sphere_kernel(n, i, ZonalProfile(n, b)).scaled(2 * kappa(n - 1) / kappa(i))
    rep = OperatorReport("to_crofton", "generating", "crofton", i, i,
                         (("2k_{n-1}/k_i", 2 * kappa(n - 1) / kappa(i)),), cond)
    return v.with_profile(mu, kind="crofton", report=rep)


def to_generating(v: ValuationRep) -> ValuationRep:
    """Inverse of to_crofton: g = (k_i / 2 k_{n-1}) C_{n-1} R_{n-1,i}^{-1} mu-hat."""
    if v.kind == "generating":
        return v
    if v.kind != "crofton":
        raise ValueError("only Crofton profiles convert to generating functions")
    n, i = v.n, v.i
    mu = v.profile
    diag = hyperplane_radon_diagonal(n, i, mu.kmax)
    cond = float(np.max(np.abs(diag)) / np.min(np.abs(diag)))
    if cond > COND_LIMIT:
        raise ConditioningError(f"inverse Radon transform condition {cond:.1e}")
    K = mu.K
    a = np.zeros(K + 1)
    a[0::2] = mu.coeffs / diag * cosine_multipliers(n, n - 1, K)[0::2]
    g = ZonalProfile(n, a * kappa(i) / (2 * kappa(n - 1)))
    rep = OperatorReport("to_generating", "crofton", "generating", i, i,
                         (("k_i/2k_{n-1}", kappa(i) / (2 * kappa(n - 1))),), cond)
    return v.with_profile(g, kind="generating", report=rep)


def to_klain(v: ValuationRep) -> ValuationRep:
    """Klain profile h(M, .) = c^i * mu-hat (cosine transform of the Crofton profile)."""
    if v.kind == "klain":
        return v
    if v.kind == "generating":
        v = to_crofton(v)
    mu = v.profile
    ci = cosine_multipliers(v.n, v.i, mu.K)[0::2]
    h = GrassProfile(v.n, v.i, mu.coeffs * ci, "sphere")
    rep = OperatorReport("to_klain", "crofton", "klain", v.i, v.i)
    return v.with_profile(h, kind="klain", report=rep)


def klain_direct_points(n: int, i: int, r) -> np.ndarray:
    """Unit vectors u with |P_e u| = r, e = span(e_1..e_i)."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    U = np.zeros((len(r), n))
    U[:, 0] = r
    U[:, -1] = np.sqrt(np.clip(1 - r * r, 0, None))
    return U


def klain_body_direct(v: ValuationRep, m: int = 64) -> GrassProfile:
    """Klain profile evaluated as h(Phi K_e, u) for the unit cube K_e in e.

    Pairs the generating function with S_i(K_e), the uniform measure on
    S(e^perp) of mass n k_{n-i} / binom(n, i), at directions parameterized
    by r = |P_e u|, then projects onto the q^(i) basis.
    """
    if v.kind != "generating":
        raise ValueError("the direct route starts from a generating function")
    n, i = v.n, v.i
    g = v.profile
    if g.coeffs[1::2].any():
        raise ValueError("Klain bodies are defined for even valuations")
    band = ZonalProfile(n, g.coeffs)
    S = SubspaceCube(n, i).area_measure(i)
    kmax = g.K // 2
    s_nodes, w = grass_rule(n, i, max(m, kmax + 8))
    vals = np.array([S.pair(band, u) for u in klain_direct_points(n, i, s_nodes)])
    b = grass_q_table(n, i, kmax, s_nodes) @ (w * vals) / grass_norms(n, i, kmax)
    return GrassProfile(n, i, b, "sphere")


def klain_to_crofton(v: ValuationRep) -> ValuationRep:
    """mu-hat = h(M, .) / c^i, degree by degree."""
    if v.kind != "klain":
        raise ValueError("expected a Klain profile")
    h = v.profile
    ci = cosine_multipliers(v.n, v.i, h.K)
    cond = _check_cond(ci)
    mu = GrassProfile(v.n, v.i, h.coeffs / ci[0::2])
    rep = OperatorReport("klain_to_crofton", "klain", "crofton", v.i, v.i, (), cond)
    return v.with_profile(mu, kind="crofton", report=rep)


def convert(v: ValuationRep, kind: str) -> ValuationRep:
    """Move a valuation to the requested representation."""
    if kind not in KINDS:
        raise ValueError(f"representation must be one of {KINDS}")
    if kind == v.kind:
        return v
    if kind == "klain":
        return to_klain(v)
    if v.kind == "klain":
        v = klain_to_crofton(v)
    return v if kind == "crofton" else to_generating(v)
