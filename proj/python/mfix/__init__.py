"""Coupled fixed-point iteration for partially monotone systems."""

from ._core import (
    ConfigError,
    MfixError,
    NumericalError,
    StructuralError,
    ValidationError,
    affine_signature,
    classify,
    count_reducible,
    green_kernel,
    normalize_config,
    run,
    solve_affine,
    solve_pbvs,
    solve_tripled,
    verify_affine,
)

__all__ = [
    "ConfigError",
    "MfixError",
    "NumericalError",
    "StructuralError",
    "ValidationError",
    "affine_signature",
    "classify",
    "count_reducible",
    "green_kernel",
    "normalize_config",
    "run",
    "solve_affine",
    "solve_pbvs",
    "solve_tripled",
    "verify_affine",
]
