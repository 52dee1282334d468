"""Exception types shared across the planner."""


class QuadcamError(Exception):
    """Base class for all planner errors."""


class ParameterError(QuadcamError):
    """A physical parameter violates its invariants (mass <= 0, dt <= 0, ...)."""


class ShapeError(QuadcamError):
    """Array dimensions inconsistent with the fixed state/input layout."""


class KeyframeCollisionError(QuadcamError):
    """Two keyframe times round to the same grid index."""

    def __init__(self, index_a: int, index_b: int, grid_index: int):
        self.index_a = index_a
        self.index_b = index_b
        self.grid_index = grid_index
        super().__init__(
            f"keyframes {index_a} and {index_b} both round to grid index {grid_index}"
        )


class InfeasibleError(QuadcamError):
    """The problem is infeasible (detected at assembly or by the solver)."""


class SolverError(QuadcamError):
    """The QP solver failed to produce a usable iterate."""


class SceneParseError(QuadcamError):
    """Malformed scene document (syntax level)."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class SceneValidationError(QuadcamError):
    """A scene field violates an invariant; carries the field path."""

    def __init__(self, field_path: str, message: str):
        self.field_path = field_path
        super().__init__(f"{field_path}: {message}")


class SingularBearingError(QuadcamError):
    """Camera position coincides with the look-at target at some stage."""

    def __init__(self, stage: int):
        self.stage = stage
        super().__init__(f"camera coincides with look-at target at stage {stage}")
