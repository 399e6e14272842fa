"""Harmonic analysis of rotation-equivariant even Minkowski valuations.

Generating functions, Crofton profiles and Klain profiles, the cosine and
Radon transforms on Grassmannians, Berg functions, and the Lefschetz
operators, all reduced to one-dimensional quadrature and multipliers.
"""
from .bodies import Ball, BallSum, Polytope, SubspaceCube, ZonalSmooth, cube, is_support_function
from .lefschetz import apply_power, fourier_op, l_op, l_op_berg, lambda_op
from .mval import ValuationRep, builtin, convert, evaluate, to_crofton, to_generating, to_klain
from .profiles import GrassProfile, ZonalProfile, expand_grass, expand_zonal, load_profile, save_profile
from .specfun import funk_hecke, harmonic_dim, kappa, legendre_nd, omega
from .transforms import (TransformTag, apply_transform, berg_multipliers, box_multiplier,
                         cosine_multiplier, multiplier_seq, radon_down, radon_up)

__version__ = "0.1.0"

__all__ = [
    "Ball", "BallSum", "GrassProfile", "Polytope", "SubspaceCube", "TransformTag", "ValuationRep",
    "ZonalProfile", "ZonalSmooth", "apply_power", "apply_transform", "berg_multipliers",
    "box_multiplier", "builtin", "convert", "cosine_multiplier", "cube", "evaluate",
    "expand_grass", "expand_zonal", "fourier_op", "funk_hecke", "harmonic_dim",
    "is_support_function", "kappa", "l_op", "l_op_berg", "lambda_op", "legendre_nd",
    "load_profile", "multiplier_seq", "omega", "radon_down", "radon_up", "save_profile",
    "to_crofton", "to_generating", "to_klain",
]
