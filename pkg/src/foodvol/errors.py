"""Exception and warning types shared across the package."""


class FoodvolError(Exception):
    """Base class for all package-specific errors."""


class InvalidMeshError(FoodvolError, ValueError):
    """A mesh violates a structural invariant (bad index, non-finite
    coordinate, or a face with repeated vertex indices)."""


class MeshParseError(FoodvolError, ValueError):
    """A mesh file could not be parsed.

    Carries the offending 1-based line number when known.
    """

    def __init__(self, message: str, path=None, line: int | None = None):
        self.path = path
        self.line = line
        prefix = ""
        if path is not None:
            prefix += f"{path}: "
        if line is not None:
            prefix += f"line {line}: "
        super().__init__(prefix + message)


class UnknownComponentError(FoodvolError, IndexError):
    """A component id outside 0..component_count-1 was requested."""


class NonPositiveScaleError(FoodvolError, ValueError):
    """Scale factors must be finite and strictly positive."""


class InvalidGridError(FoodvolError, ValueError):
    """A corner grid violates its construction invariants."""


class DegenerateGridError(FoodvolError, ValueError):
    """Adjacent corner distances collapse to zero, so no scale exists."""


class RegistrationError(FoodvolError, ValueError):
    """Rigid fitting failed: too few points or a degenerate configuration."""


class EmptyCloudError(FoodvolError, ValueError):
    """An operation received an empty point cloud."""


class ZeroAreaMeshError(FoodvolError, ValueError):
    """Surface sampling requires at least one face with positive area."""


class NonPositiveVolumeError(FoodvolError, ValueError):
    """Percentage errors are undefined for non-positive true volumes."""


class FixtureError(FoodvolError, ValueError):
    """Invalid fixture parameters (non-positive dimension, overlap, ...)."""


class SceneError(FoodvolError):
    """A pipeline stage failed for a scene; wraps the underlying error."""

    def __init__(self, scene_id: str, stage: str, cause: BaseException):
        self.scene_id = scene_id
        self.stage = stage
        self.cause = cause
        super().__init__(f"scene {scene_id!r}, stage {stage!r}: {cause}")


class OpenMeshWarning(UserWarning):
    """The mesh has boundary edges; enclosed volume is origin-dependent."""
