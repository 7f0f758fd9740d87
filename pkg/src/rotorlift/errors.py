"""Exception types shared across the package."""


class RotorLiftError(Exception):
    """Base class for all rotorlift errors."""


class ParseError(RotorLiftError):
    """An input document could not be parsed into the expected structure."""


class SignatureMismatchError(RotorLiftError):
    """Operands live in different algebras, or the operation needs another signature."""


class NotAVersorError(RotorLiftError):
    """reverse(S)*S is not a unit scalar, so the versor inverse is undefined."""


class NotPseudoOrthogonalError(RotorLiftError):
    """The matrix does not preserve the metric within tolerance."""

    def __init__(self, residual: float, message: str | None = None):
        self.residual = float(residual)
        super().__init__(message or f"matrix is not pseudo-orthogonal (residual {residual:.3e})")


class MinorIdentityError(RotorLiftError):
    """The determinant/minor consistency relations failed; the input is numerically corrupt."""


class SpecialOrthogonalRequiredError(RotorLiftError):
    """Even-dimensional recovery is only defined for matrices with determinant +1."""


class CenterProjectionVanishesError(RotorLiftError):
    """The averaged numerator is numerically zero.

    The construction requires the target spin element to have a nonzero central
    (scalar, or scalar plus pseudoscalar for odd dimension) part; matrices whose
    double-cover preimages lack one cannot be recovered by this method.
    """


class NoRealRootError(RotorLiftError):
    """The central element has no usable square root over the reals."""


class VerificationFailedError(RotorLiftError):
    """No candidate spin element reproduced the input matrix within tolerance."""

    def __init__(self, residual: float, message: str | None = None):
        self.residual = float(residual)
        super().__init__(message or f"verification failed (residual {residual:.3e})")


class HestenesConditionError(RotorLiftError):
    """The dimension-4 shortcut needs a nonzero generator-contracted sum."""


class WrongComponentError(RotorLiftError):
    """The matrix lies outside the group component this operation handles."""


class NotAFrameError(RotorLiftError):
    """The supplied vectors do not satisfy the frame anticommutation relations."""


class NotInPinError(RotorLiftError):
    """The multivector is not a normalized versor, so it has no orthogonal image."""


class NotInLipschitzGroupError(RotorLiftError):
    """Conjugation by the element does not preserve grade-1 vectors."""


class MixedParityError(RotorLiftError):
    """The multivector has both even and odd content above tolerance."""
