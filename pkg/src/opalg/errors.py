"""Exception types shared across the workbench."""


class OpalgError(Exception):
    """Base class for all workbench errors."""

    kind = "error"


class AlgebraMismatchError(OpalgError):
    """Operands belong to different algebras (d or n differ)."""

    kind = "algebra-mismatch"


class DimensionLimitError(OpalgError):
    """Requested dense dimension exceeds the configured cap."""

    kind = "dimension-limit"


class DimensionMismatchError(OpalgError):
    """Matrix/vector shapes are incompatible."""

    kind = "dimension-mismatch"


class DomainError(OpalgError):
    """Input violates a mathematical precondition (not Hermitian, not unitary, ...)."""

    kind = "domain"


class UnsupportedInputError(OpalgError):
    """Operation is not defined for this input (e.g. multiplicative bracket of a sum)."""

    kind = "unsupported-input"


class ZeroProbabilityError(OpalgError):
    """Post-selection on an outcome of (numerically) zero probability."""

    kind = "zero-probability"


class NotCompletelyPositiveError(OpalgError):
    """A map required to be CP has a genuinely negative Choi eigenvalue."""

    kind = "not-cp"

    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class NotProjectivelyCommutingError(OpalgError):
    """An error word does not commute with the stabilizer group up to phase."""

    kind = "not-projectively-commuting"


class GroupStructureError(OpalgError):
    """Generators violate stabilizer group requirements (non-commuting or -I in closure)."""

    kind = "group-structure"


class KnillLaflammeError(OpalgError):
    """Recovery requested for an error set that fails the correctability conditions."""

    kind = "knill-laflamme"


class IncompleteSchemeError(OpalgError):
    """Shadow scheme is not tomographically complete; inversion refused."""

    kind = "incomplete-scheme"


class ExprError(OpalgError):
    """Expression parse/evaluation failure, with a 1-based character position when known."""

    kind = "expr"

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position
