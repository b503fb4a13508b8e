"""Exception hierarchy shared across the package.

Every exception carries a short machine-readable ``code`` so that the CLI
can report which invariant failed without parsing messages.
"""


class Bures2qError(Exception):
    code = "error"


class ValidationError(Bures2qError, ValueError):
    """Input violates a documented precondition."""

    code = "invalid"


class DimensionError(ValidationError):
    code = "dimension"


class NonFiniteError(ValidationError):
    code = "non_finite"


class NotHermitianError(ValidationError):
    code = "not_hermitian"


class TraceError(ValidationError):
    code = "trace"


class NegativeEigenvalueError(ValidationError):
    code = "negative_eigenvalue"


class NotSymmetricError(ValidationError):
    code = "not_symmetric"


class NotIsometryError(ValidationError):
    code = "not_isometry"


class NotNormalizedError(ValidationError):
    code = "not_normalized"


class OutOfRangeError(ValidationError):
    code = "out_of_range"


class NumericalError(Bures2qError, ArithmeticError):
    """A numerical stage failed to meet its own accuracy contract."""

    code = "numerical"


class NotApplicableError(Bures2qError):
    """Operation is undefined for this input (e.g. zero concurrence)."""

    code = "not_applicable"
