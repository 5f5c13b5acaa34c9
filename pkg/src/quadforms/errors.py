"""Exception types shared across the package."""


class QuadFormsError(Exception):
    """Base class for all library errors."""


class DegenerateElementError(QuadFormsError):
    """A zero value appeared where a nonzero field element is required."""


class UnsupportedFieldError(QuadFormsError):
    """The operation is not defined over the given field."""


class NotAUnitError(QuadFormsError):
    """The element is not a unit modulo p."""


class NotATowerError(QuadFormsError):
    """A residue operation was applied to a field with no Laurent variables."""


class NoOrderingError(QuadFormsError):
    """The field has no orderings (base is not the rationals)."""


class FieldMismatchError(QuadFormsError):
    """Two operands live over different fields."""


class ShapeError(QuadFormsError):
    """An exponent vector or witness has the wrong length."""


class DimensionError(QuadFormsError):
    """The form has the wrong dimension for this operation."""


class NotAnisotropicError(QuadFormsError):
    """An anisotropic input is required."""


class NotANeighborError(QuadFormsError):
    """The form is not a neighbor of the given Pfister form."""


class WitnessError(QuadFormsError):
    """A supplied witness (chain, ambient form, ...) does not verify."""


class ResourceExceededError(QuadFormsError):
    """A bounded search ran out of its step budget."""


class InconsistentCertificateError(QuadFormsError):
    """Bound composition produced an empty interval or clashing exact values."""


class IncompleteHypothesisError(QuadFormsError):
    """A conditional computation is missing a required assumption."""


class UnsupportedClassError(QuadFormsError):
    """The Brauer class is outside the decidable fragment (too many symbols)."""


class NoGenericFactorError(QuadFormsError):
    """The form does not factor through the top Laurent variable."""


class UnknownVariableError(QuadFormsError):
    """An expression used a variable the field does not declare."""


class FormSyntaxError(QuadFormsError):
    """A form expression failed to parse."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class CorpusFormatError(QuadFormsError):
    """A corpus file is malformed; the message names the offending line."""
