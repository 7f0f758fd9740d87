"""rotorlift: spin-group elements of pseudo-orthogonal matrices in Cl(p,q).

Given a matrix preserving an indefinite diagonal metric, recover the pair of
double-cover preimages +-S in the corresponding Pin/Spin group, verify them
through the conjugation action, and classify both the matrix and the spin
element into their group components.  Works in any signature (p,q) with
dense 2^n multivector arithmetic.
"""

from .algebra import (
    DEFAULT_TOLERANCE,
    CenterElement,
    Multivector,
    Signature,
    average_over_basis,
    blade_label,
    blade_product,
    center_project,
    generator_conjugation,
    geometric_product,
    grade_project,
    involution,
    max_dimension,
    pseudoscalar_square,
    set_max_dimension,
    versor_inverse,
)
from .errors import (
    CenterProjectionVanishesError,
    HestenesConditionError,
    MinorIdentityError,
    MixedParityError,
    NoRealRootError,
    NotAFrameError,
    NotAVersorError,
    NotInLipschitzGroupError,
    NotInPinError,
    NotPseudoOrthogonalError,
    ParseError,
    RotorLiftError,
    SignatureMismatchError,
    SpecialOrthogonalRequiredError,
    VerificationFailedError,
    WrongComponentError,
)
from .matrices import (
    GroupComponent,
    OrthoMatrix,
    classify_component,
    frame_blade,
    frame_vector,
    metric_matrix,
    minor,
    validate_pseudo_orthogonal,
)
from .recovery import (
    RotorResult,
    SpinGroupTags,
    canonicalize_sign,
    central_sqrt_candidates,
    classify_spin,
    forward_matrix,
    random_versor,
    recover_hestenes,
    recover_spin,
    rotor_from_frames,
    spin_numerator,
    spinor_norm_sign,
    twisted_adjoint_residual,
)

__version__ = "0.1.0"

__all__ = [
    "CenterElement",
    "CenterProjectionVanishesError",
    "DEFAULT_TOLERANCE",
    "GroupComponent",
    "HestenesConditionError",
    "MinorIdentityError",
    "MixedParityError",
    "Multivector",
    "NoRealRootError",
    "NotAFrameError",
    "NotAVersorError",
    "NotInLipschitzGroupError",
    "NotInPinError",
    "NotPseudoOrthogonalError",
    "OrthoMatrix",
    "ParseError",
    "RotorLiftError",
    "RotorResult",
    "Signature",
    "SignatureMismatchError",
    "SpecialOrthogonalRequiredError",
    "SpinGroupTags",
    "VerificationFailedError",
    "WrongComponentError",
    "average_over_basis",
    "blade_label",
    "blade_product",
    "canonicalize_sign",
    "center_project",
    "central_sqrt_candidates",
    "classify_component",
    "classify_spin",
    "forward_matrix",
    "frame_blade",
    "frame_vector",
    "generator_conjugation",
    "geometric_product",
    "grade_project",
    "involution",
    "max_dimension",
    "metric_matrix",
    "minor",
    "pseudoscalar_square",
    "random_versor",
    "recover_hestenes",
    "recover_spin",
    "rotor_from_frames",
    "set_max_dimension",
    "spin_numerator",
    "spinor_norm_sign",
    "twisted_adjoint_residual",
    "validate_pseudo_orthogonal",
    "versor_inverse",
]
