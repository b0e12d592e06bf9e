"""Approximate weighted farthest-neighbor search and star-hub selection.

The library answers "which point is (weighted-)farthest from here?" in
time roughly independent of the input size, by querying a small kernel
that preserves every directional width, and applies it to pick a star
network hub whose worst detour ratio is provably near-optimal.
"""

from .dilation import (
    CandidatePairSet,
    CenterResult,
    CentroidIndex,
    DilationReport,
    GammaSplit,
    approx_all_dilations,
    delta,
    exact_dilation,
    select_hub,
    solve_unconstrained_center,
)
from .errors import (
    CenterSolveError,
    DegenerateStarError,
    DimensionMismatchError,
    DuplicatePointsError,
    EmptyPointSetError,
    FarstarError,
    InvalidParameterError,
    InvalidWeightError,
    SerializationError,
)
from .geometry import (
    WeightedPointSet,
    directional_width,
    normalize_weights,
    weighted_distance,
)
from .kernel import (
    EpsilonKernel,
    UnweightedAfnIndex,
    afn_query,
    brute_force_farthest,
    build_kernel,
    direction_count,
)
from .weighted import (
    WeightedAfnIndex,
    WeightedResult,
    brute_force_weighted,
    build_weighted_index,
    max_bucket_count,
    weighted_query,
)

__version__ = "0.1.0"

__all__ = [
    "CandidatePairSet",
    "CenterResult",
    "CenterSolveError",
    "CentroidIndex",
    "DegenerateStarError",
    "DilationReport",
    "DimensionMismatchError",
    "DuplicatePointsError",
    "EmptyPointSetError",
    "EpsilonKernel",
    "FarstarError",
    "GammaSplit",
    "InvalidParameterError",
    "InvalidWeightError",
    "SerializationError",
    "UnweightedAfnIndex",
    "WeightedAfnIndex",
    "WeightedPointSet",
    "WeightedResult",
    "afn_query",
    "approx_all_dilations",
    "brute_force_farthest",
    "brute_force_weighted",
    "build_kernel",
    "build_weighted_index",
    "delta",
    "direction_count",
    "directional_width",
    "exact_dilation",
    "max_bucket_count",
    "normalize_weights",
    "select_hub",
    "solve_unconstrained_center",
    "weighted_distance",
    "weighted_query",
    "__version__",
]
