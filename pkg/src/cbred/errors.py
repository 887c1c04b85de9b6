"""Exception types shared across the pipeline."""


class CbredError(Exception):
    """Base class for all package errors."""


class InvalidInput(CbredError):
    """A precondition on an argument was violated."""


class DegenerateSpace(CbredError):
    """The architecture space has zero spread under a distance measure."""


class SingularKernel(CbredError):
    """A kernel Gram matrix is singular (duplicate samples or dead network)."""


class DegenerateJacobian(CbredError):
    """An input-Jacobian row has zero variance, so correlations are undefined."""


class InsufficientClusters(CbredError):
    """Fewer than two non-noise clusters; the selector has nothing to compare."""


class MissingStat(CbredError, KeyError):
    """A statistics provider has no record for the requested architecture."""


class MissingAccuracy(CbredError, KeyError):
    """The accuracy table has no entry for the requested architecture."""


class ParseError(CbredError):
    """A data file is malformed. Carries the 1-based line number (0 = header)."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DuplicateKey(CbredError):
    """A data file contains the same key twice."""


class StageDependencyError(CbredError):
    """A pipeline stage was run before the stage that produces its input."""


class ProvenanceMismatch(CbredError):
    """An upstream artifact was produced under an incompatible configuration."""
