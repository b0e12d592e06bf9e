"""Seeded synthetic point clouds and weight models for tests and benchmarks."""

from __future__ import annotations

import numpy as np

from .errors import InvalidParameterError

DISTRIBUTIONS = ("uniform-cube", "clustered", "annulus")
WEIGHT_MODELS = ("unit", "log-uniform")


def generate_points(
    distribution: str,
    n: int,
    dim: int,
    rng: np.random.Generator,
    radius_range: tuple[float, float] = (0.5, 1.0),
) -> np.ndarray:
    """Draw ``n`` points in ``dim`` dimensions from a named distribution.

    ``uniform-cube`` fills [0,1]^D; ``clustered`` drops Gaussian blobs
    around a few uniform centers; ``annulus`` picks uniform directions with
    radii uniform in ``radius_range``.
    """
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n!r}")
    if dim < 1:
        raise InvalidParameterError(f"dim must be >= 1, got {dim!r}")
    if distribution == "uniform-cube":
        return rng.random((n, dim))
    if distribution == "clustered":
        k = max(1, min(8, n // 20))
        centers = rng.random((k, dim))
        who = rng.integers(0, k, size=n)
        return centers[who] + 0.05 * rng.standard_normal((n, dim))
    if distribution == "annulus":
        r_in, r_out = radius_range
        if not (0.0 <= r_in < r_out):
            raise InvalidParameterError(
                f"need 0 <= r_in < r_out, got {radius_range!r}"
            )
        dirs = rng.standard_normal((n, dim))
        norms = np.linalg.norm(dirs, axis=1, keepdims=True)
        # a zero draw is essentially impossible; replace to stay total
        norms[norms == 0.0] = 1.0
        radii = rng.uniform(r_in, r_out, size=n)
        return dirs / norms * radii[:, None]
    raise InvalidParameterError(
        f"unknown distribution {distribution!r}; want one of {DISTRIBUTIONS}"
    )


def generate_weights(
    model: str,
    n: int,
    rng: np.random.Generator,
    weight_range: tuple[float, float] = (1e-3, 1.0),
) -> np.ndarray:
    """Raw weights in (0, 1]: all ones, or log-uniform over (lo, hi]."""
    if model == "unit":
        return np.ones(n)
    if model == "log-uniform":
        lo, hi = weight_range
        if not (0.0 < lo < hi <= 1.0):
            raise InvalidParameterError(
                f"need 0 < lo < hi <= 1, got {weight_range!r}"
            )
        # u in [0,1) maps to (lo, hi] with hi attained at u = 0
        u = rng.random(n)
        return np.exp(np.log(hi) - u * (np.log(hi) - np.log(lo)))
    raise InvalidParameterError(
        f"unknown weight model {model!r}; want one of {WEIGHT_MODELS}"
    )
