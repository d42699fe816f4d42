"""Benchmark objectives, primarily the block-extended Powell singular function."""

from __future__ import annotations

import numpy as np

from .core import Domain

# Benchmark box containing both the standard start and the origin with margin.
PSF_DEFAULT_BOUNDS = (-4.0, 5.0)


def powell_singular(x: np.ndarray) -> float:
    """Powell singular function for dimension a positive multiple of 4.

    Convex with a Hessian that degenerates at the unique minimizer x = 0,
    which makes it a stress test for methods without second-order information.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 4 or x.size % 4 != 0:
        raise ValueError("dimension must be a positive multiple of 4")
    b = x.reshape(-1, 4)
    return float(
        np.sum(
            (b[:, 0] + 10.0 * b[:, 1]) ** 2
            + 5.0 * (b[:, 2] - b[:, 3]) ** 2
            + (b[:, 1] - b[:, 2]) ** 4
            + 10.0 * (b[:, 0] - b[:, 3]) ** 4
        )
    )


def psf_standard_start(dimension: int) -> np.ndarray:
    """The customary starting point (3, -1, 0, 1) repeated block-wise."""
    if dimension < 4 or dimension % 4 != 0:
        raise ValueError("dimension must be a positive multiple of 4")
    return np.tile([3.0, -1.0, 0.0, 1.0], dimension // 4)


def psf_domain(dimension: int) -> Domain:
    """Default benchmark box for the Powell singular function."""
    lo, hi = PSF_DEFAULT_BOUNDS
    return Domain(np.full(dimension, lo), np.full(dimension, hi))
