class SurfaceError(Exception):
    """Base class for every error raised by the surface toolkit."""


class LatticeMismatchError(SurfaceError):
    """Operands live on different base surfaces or on different covers."""


class InvalidModelError(SurfaceError):
    """A model or argument violates one of its type invariants."""


class InternalInconsistency(SurfaceError):
    """An engine self-check failed. This is a bug, never a user error."""


class SpecFileError(SurfaceError):
    """A surface definition file could not be read or validated."""

    def __init__(self, path: str, problems: list[str]):
        self.path = path
        self.problems = problems
        super().__init__(f"{path}: " + "; ".join(problems))
