"""Exception types raised across the package."""

from __future__ import annotations


class FarstarError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(FarstarError):
    def __init__(self, expected: int, got: int):
        super().__init__(f"dimension mismatch: expected {expected}, got {got}")
        self.expected = expected
        self.got = got


class EmptyPointSetError(FarstarError):
    def __init__(self, what: str = "point set"):
        super().__init__(f"{what} must be nonempty")


class InvalidWeightError(FarstarError):
    pass


class InvalidParameterError(FarstarError):
    pass


class DuplicatePointsError(FarstarError):
    """Coincident points are rejected where pairwise distances appear in a denominator."""

    def __init__(self, index_a: int, index_b: int):
        super().__init__(f"points {index_a} and {index_b} coincide")
        self.index_a = index_a
        self.index_b = index_b


class DegenerateStarError(FarstarError):
    pass


class CenterSolveError(FarstarError):
    """Solver hit its iteration cap; best iterate found so far is attached."""

    def __init__(self, best_center, best_value: float):
        super().__init__(
            f"center solver did not converge (best value {best_value!r}); "
            "best iterate attached"
        )
        self.best_center = best_center
        self.best_value = best_value


class SerializationError(FarstarError):
    pass
