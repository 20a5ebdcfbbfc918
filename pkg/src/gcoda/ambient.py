"""Componentwise group and vector-space operations on strictly positive vectors.

The open positive orthant under componentwise multiplication is an Abelian
group with neutral element (1, ..., 1); componentwise powers extend it to a
real vector space, and the componentwise exp/log pair identifies it with
ordinary coordinate space.  Every function accepts either a single vector or
a row-matrix of vectors and returns the matching shape.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, NonPositiveValue, NumericalOverflow

__all__ = ["as_positive", "as_free", "oplus", "odot", "amb_exp", "amb_log"]


def as_positive(x) -> np.ndarray:
    """Validate ``x`` as one strictly positive vector or a row-matrix of them."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim not in (1, 2) or arr.shape[-1] < 2:
        raise DimensionMismatch(f"expected a vector of >= 2 components, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise NonPositiveValue("components must be finite")
    if not (arr > 0).all():
        raise NonPositiveValue("components must be strictly positive")
    return arr


def as_free(v) -> np.ndarray:
    """Validate ``v`` as an unconstrained coordinate vector (or row-matrix)."""
    arr = np.asarray(v, dtype=float)
    if arr.ndim not in (1, 2) or arr.shape[-1] < 2:
        raise DimensionMismatch(f"expected a vector of >= 2 components, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise NonPositiveValue("components must be finite")
    return arr


def _check_same_width(x: np.ndarray, y: np.ndarray) -> None:
    # Component count must match exactly; no silent padding or truncation.
    if x.shape[-1] != y.shape[-1]:
        raise DimensionMismatch(f"component counts differ: {x.shape[-1]} vs {y.shape[-1]}")


def oplus(x, y) -> np.ndarray:
    """Componentwise product, the group operation of the positive orthant."""
    xa, ya = as_positive(x), as_positive(y)
    _check_same_width(xa, ya)
    return xa * ya


def odot(c: float, x) -> np.ndarray:
    """Scalar multiplication: raise every component to the power ``c``."""
    xa = as_positive(x)
    out = np.exp(c * np.log(xa))
    if not np.isfinite(out).all():
        raise NumericalOverflow("componentwise power overflowed")
    return out


def amb_exp(v) -> np.ndarray:
    """Componentwise exponential, mapping coordinates onto the positive orthant."""
    va = as_free(v)
    with np.errstate(over="ignore"):
        out = np.exp(va)
    if not np.isfinite(out).all():
        raise NumericalOverflow("componentwise exponential overflowed")
    return out


def amb_log(x) -> np.ndarray:
    """Componentwise natural logarithm, inverse of :func:`amb_exp`."""
    return np.log(as_positive(x))
