"""Exception hierarchy shared by every module."""


class SkewQuiverError(Exception):
    """Base class for library errors."""


class OrderMismatchError(SkewQuiverError, ValueError):
    """Two cyclotomic scalars of different orders were combined."""


class AmbientMismatchError(SkewQuiverError, ValueError):
    """Two subspaces or vectors live in different coordinate spaces."""


class DegreeCapError(SkewQuiverError):
    """A requested degree exceeds the configured computation cap."""


class RelationError(SkewQuiverError, ValueError):
    """A relation is malformed: inhomogeneous, wrong degree, or non-parallel."""


class ActionError(SkewQuiverError, ValueError):
    """A group action is incompatible with the algebra or presentation."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class SocleError(SkewQuiverError):
    """The top syzygy space is not one-dimensional."""


class NotFiniteDimensionalError(SkewQuiverError):
    """A construction needs a finite-dimensional input and did not get one."""


class ParseError(SkewQuiverError, ValueError):
    """Input data does not match the expected schema."""

    def __init__(self, message, field=None):
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)
        self.field = field
