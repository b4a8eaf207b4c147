"""Exception hierarchy.

Every algebra invariant that can fail on user input maps to its own
exception type so the CLI can report a precise diagnostic and exit code.
"""


class SpectrumToolError(Exception):
    """Base class for all errors raised by this package."""


class InputValidationError(SpectrumToolError, ValueError):
    """Invalid user input (CLI exit code 2)."""


class ClosureError(InputValidationError):
    """A bracket of two basis elements leaves the candidate span."""


class SolvabilityError(InputValidationError):
    """The derived series does not terminate at the zero algebra."""


class CharacterError(InputValidationError):
    """A functional does not vanish on the derived subalgebra."""


class ProblemFileError(InputValidationError):
    """A problem file cannot be parsed into a valid algebra."""


class SizeLimitError(SpectrumToolError):
    """A requested computation exceeds the configured dimension cap (CLI exit code 3)."""


class NumericalInconsistencyError(SpectrumToolError):
    """Internal numerical invariant violated (never caused by user input).

    Raised when the two membership criteria disagree, when a computed
    homology dimension is negative, or when a boundary fails to square
    to zero at construction time.
    """


class TriangularizationError(NumericalInconsistencyError):
    """No common eigenvector could be found within tolerance."""


class EmptySpectrumError(NumericalInconsistencyError):
    """A computed spectrum came out empty; spectra of nonzero solvable
    algebras on nonzero spaces are never empty, so this signals a
    candidate-set or tolerance failure."""
