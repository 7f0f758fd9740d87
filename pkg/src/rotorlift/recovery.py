"""Recovering double-cover spin elements from pseudo-orthogonal matrices.

The central construction sums, over every ascending multi-index A, the frame
blade built from the matrix rows times the reciprocal basis blade:

    N = sum_A det(P)^|A| * (row-frame blade for A) * e^A      (det factor only
                                                               matters for odd n)

For a matrix P in the image of the twisted adjoint representation, N equals
2^n * S * (central part of S^-1), so dividing N by a central square root of
sign * reverse(N) * N yields the two preimages +-S.  Which of the candidate
central roots is correct is decided by direct verification against the
matrix, which is cheap (n conjugations).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .algebra import (
    CenterElement,
    Multivector,
    Signature,
    _blade_mul_right,
    _get_tables,
    _product_arrays,
    _vector_mul_right,
    geometric_product,
    involution,
    pseudoscalar_square,
)
from .errors import (
    CenterProjectionVanishesError,
    HestenesConditionError,
    MixedParityError,
    NoRealRootError,
    NotAFrameError,
    NotInLipschitzGroupError,
    NotInPinError,
    NotPseudoOrthogonalError,
    SignatureMismatchError,
    SpecialOrthogonalRequiredError,
    VerificationFailedError,
    WrongComponentError,
)
from .matrices import (
    OrthoMatrix,
    classify_component,
    minor,
    validate_pseudo_orthogonal,
)

DEFAULT_RESIDUAL_TOLERANCE = 1e-8
DEFAULT_DEGENERACY_TOLERANCE = 1e-8
# Coefficients at or below this are treated as zero when picking the
# canonical representative of the +-S pair.
CANONICAL_COEFF_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SpinGroupTags:
    """Membership flags for the five normalized versor groups."""

    in_pin: bool
    in_spin: bool
    in_spin_plus: bool
    in_pin_plus: bool
    in_pin_minus: bool

    def group_names(self) -> list[str]:
        names = []
        if self.in_pin:
            names.append("Pin")
        if self.in_pin_plus:
            names.append("Pin+")
        if self.in_pin_minus:
            names.append("Pin-")
        if self.in_spin:
            names.append("Spin")
        if self.in_spin_plus:
            names.append("Spin+")
        return names


@dataclass(frozen=True)
class RotorResult:
    """One recovered representative of the +-S pair.

    ``norm_sign`` is the sign of reverse(S)*S (of conjugate(S)*S when
    n = 3 mod 4), ``residual`` the largest deviation of the conjugation
    action of S from the rows of the input matrix.
    """

    spin: Multivector
    norm_sign: int
    residual: float
    groups: SpinGroupTags
    warning: str | None = None


def canonicalize_sign(s: Multivector, tol: float = CANONICAL_COEFF_TOLERANCE) -> Multivector:
    """Pick the representative of {S, -S} whose lowest nonzero blade is positive."""
    for value in s.coeffs:
        if abs(value) > tol:
            return -s if value < 0 else s
    return s


def _numerator_array(matrix: OrthoMatrix) -> np.ndarray:
    """Product-form numerator sum as a raw array."""
    t = _get_tables(matrix.sig)
    n = matrix.sig.n
    det_sign = matrix.det_sign
    entries = matrix.entries
    acc = np.zeros(t.size)
    acc[0] = 1.0  # empty multi-index: e * e

    # Depth-first over ascending index chains so each frame blade is one
    # vector multiplication away from its prefix; the stack stays O(n^2).
    unit = np.zeros(t.size)
    unit[0] = 1.0
    stack: list[tuple[np.ndarray, int, int, int]] = [(unit, 0, 0, 0)]
    while stack:
        prefix, last, length, mask = stack.pop()
        for a in range(last + 1, n + 1):
            sub_mask = mask | (1 << (a - 1))
            blade = _vector_mul_right(t, prefix, entries[a - 1])
            factor = float(t.blade_square[sub_mask]) * (det_sign if (length + 1) % 2 else 1)
            acc += _blade_mul_right(t, blade, sub_mask, factor)
            if a < n:
                stack.append((blade, a, length + 1, sub_mask))
    return acc


def spin_numerator(matrix: OrthoMatrix, method: str = "product") -> Multivector:
    """The 2^n-term sum of det^|A| * frame blade(A) * e^A.

    For even n the matrix must have determinant +1; there is no recovery
    formula for the improper even-dimensional components.  The result is
    always an even element.

    method="minors" rebuilds every frame blade from explicit minors instead
    of products of frame vectors; it is much slower and exists for
    cross-validation.
    """
    sig = matrix.sig
    n = sig.n
    if n % 2 == 0 and matrix.det_sign < 0:
        raise SpecialOrthogonalRequiredError(
            "even-dimensional recovery needs det = +1; this matrix has det = -1"
        )
    if method == "minors":
        from .matrices import frame_blade

        t = _get_tables(sig)
        det_sign = matrix.det_sign
        acc = np.zeros(t.size)
        acc[0] = 1.0
        for mask in range(1, t.size):
            indices = [a + 1 for a in range(n) if mask >> a & 1]
            blade = frame_blade(matrix, indices, method="minors")
            factor = float(t.blade_square[mask]) * (det_sign if len(indices) % 2 else 1)
            acc += _blade_mul_right(t, blade.coeffs, mask, factor)
        return Multivector(sig, acc)
    if method != "product":
        raise ValueError(f"unknown method {method!r}; expected 'product' or 'minors'")
    return Multivector(sig, _numerator_array(matrix))


def spinor_norm_sign(matrix: OrthoMatrix) -> int:
    """Sign of reverse(S)*S (conjugate(S)*S when n = 3 mod 4) read off the matrix.

    Even n uses the leading p x p principal minor, n = 1 mod 4 the trailing
    q x q one, n = 3 mod 4 the leading one again.  Empty minors count as +1.
    """
    sig = matrix.sig
    p, n = sig.p, sig.n
    if n % 2 == 0 or n % 4 == 3:
        value = minor(matrix, range(1, p + 1), range(1, p + 1))
    else:
        value = minor(matrix, range(p + 1, n + 1), range(p + 1, n + 1))
    return 1 if value > 0 else -1


def central_sqrt_candidates(z: CenterElement, tol: float = 1e-12) -> list[CenterElement]:
    """Square roots of a central element, up to overall sign.

    Even n: the center is the reals, so the scalar must be positive and there
    is one candidate.  Odd n splits on the square of the pseudoscalar w:

    * w^2 = +1: the center is a double-number algebra; diagonalize via the
      idempotents (1 +- w)/2.  Both eigenvalues must be nonnegative and the
      two relative sign choices give up to two candidates.
    * w^2 = -1: the center is the complex numbers; take the principal root.
    """
    sig = z.sig
    if sig.n % 2 == 0:
        if z.scalar_part <= 0.0:
            raise NoRealRootError(
                f"central element {z.scalar_part:.6g} has no positive real square root"
            )
        return [CenterElement(sig, math.sqrt(z.scalar_part))]
    if pseudoscalar_square(sig) > 0:
        lam_plus = z.scalar_part + z.pseudo_part
        lam_minus = z.scalar_part - z.pseudo_part
        scale = max(abs(lam_plus), abs(lam_minus), 1.0)
        if lam_plus < -tol * scale or lam_minus < -tol * scale:
            raise NoRealRootError(
                f"central eigenvalues {lam_plus:.6g}, {lam_minus:.6g} are not both nonnegative"
            )
        root_plus = math.sqrt(max(lam_plus, 0.0))
        root_minus = math.sqrt(max(lam_minus, 0.0))
        first = CenterElement(sig, (root_plus + root_minus) / 2.0, (root_plus - root_minus) / 2.0)
        if root_minus == 0.0:
            return [first]
        second = CenterElement(sig, (root_plus - root_minus) / 2.0, (root_plus + root_minus) / 2.0)
        return [first, second]
    w = cmath.sqrt(complex(z.scalar_part, z.pseudo_part))
    return [CenterElement(sig, w.real, w.imag)]


def _central_inverse(z: CenterElement, tiny: float = 1e-300) -> CenterElement | None:
    """Inverse in the center algebra, or None when z is not invertible."""
    sig = z.sig
    if sig.n % 2 == 0:
        if abs(z.scalar_part) < tiny:
            return None
        return CenterElement(sig, 1.0 / z.scalar_part)
    if pseudoscalar_square(sig) > 0:
        mu_plus = z.scalar_part + z.pseudo_part
        mu_minus = z.scalar_part - z.pseudo_part
        if abs(mu_plus) < tiny or abs(mu_minus) < tiny:
            return None
        inv_plus = 1.0 / mu_plus
        inv_minus = 1.0 / mu_minus
        return CenterElement(sig, (inv_plus + inv_minus) / 2.0, (inv_plus - inv_minus) / 2.0)
    denom = z.scalar_part * z.scalar_part + z.pseudo_part * z.pseudo_part
    if denom < tiny:
        return None
    return CenterElement(sig, z.scalar_part / denom, -z.pseudo_part / denom)


def _residual_of_array(t, s_arr: np.ndarray, matrix: OrthoMatrix) -> float:
    """Scaled twisted-adjoint residual for a raw coefficient array."""
    gram = _product_arrays(t, s_arr * t.reverse_signs, s_arr)
    lam = gram[0]
    off = gram.copy()
    off[0] = 0.0
    peak = float(np.max(np.abs(s_arr)))
    if abs(lam) < 1e-9 or float(np.max(np.abs(off))) > 1e-6 * max(1.0, abs(lam), peak * peak):
        return math.inf
    inverse = (s_arr * t.reverse_signs) / lam
    hat = s_arr * t.grade_signs
    worst = 0.0
    for a in range(1, t.n + 1):
        image = _product_arrays(t, _blade_mul_right(t, hat, 1 << (a - 1)), inverse)
        expected = np.zeros(t.size)
        for b in range(t.n):
            expected[1 << b] = matrix.entries[a - 1, b]
        worst = max(worst, float(np.max(np.abs(image - expected))))
    return worst / max(1.0, float(np.max(np.abs(matrix.entries))))


def _newton_polish(t, s_arr: np.ndarray, matrix: OrthoMatrix, iterations: int = 5) -> np.ndarray:
    """Refine a spin-element candidate against the matrix it should cover.

    Writes the next iterate as S(1 + X) with X even, solving the linearized
    equations in closed form, one grade block at a time:

    * grades g = 2 mod 4 (reversion-antisymmetric, containing the group's
      tangent bivectors) enter the computed rows through the commutator
      [X, e_a], so contracting the conjugated row residuals c_a with the
      reciprocal generators isolates them: sum_a c_a e^a picks up 2g X_g.
    * grades g = 0 mod 4, g >= 2 (reversion-symmetric, all transverse to the
      versor manifold) barely move the rows but show up at first order in
      reverse(S) S = lambda (1 + 2 X_g), so the gram pins them.

    The g = 0 direction is pure rescaling and is handled by normalization.
    Together the blocks control every even direction, the iteration is
    quadratically convergent, and the verification residual is driven to
    roundoff whenever the starting candidate is anywhere near the preimage;
    this recovers the digits that cancellation in the numerator sum costs on
    strongly boosted matrices.
    """
    n = t.n

    def merit(arr: np.ndarray) -> float:
        gram = _product_arrays(t, arr * t.reverse_signs, arr)
        lam = gram[0]
        off = gram.copy()
        off[0] = 0.0
        defect = float(np.max(np.abs(off))) / max(1.0, abs(lam))
        return max(_residual_of_array(t, arr, matrix), defect)

    best = s_arr
    best_merit = merit(s_arr)
    current = s_arr
    grades = t.grades.astype(np.float64)
    action_divisors = np.where(t.grades % 4 == 2, 2.0 * grades, 0.0)
    gram_block = (t.grades % 4 == 0) & (t.grades > 0)
    for _ in range(iterations):
        if not math.isfinite(best_merit) or best_merit < 1e-15:
            break
        reversed_arr = current * t.reverse_signs
        gram = _product_arrays(t, reversed_arr, current)
        lam = gram[0]
        if abs(lam) < 1e-9:
            break
        inverse = reversed_arr / lam
        hat = current * t.grade_signs
        hat_inverse = inverse * t.grade_signs
        contracted = np.zeros(t.size)
        for a in range(1, n + 1):
            bit = 1 << (a - 1)
            image = _product_arrays(t, _blade_mul_right(t, hat, bit), inverse)
            residual_row = -image
            for b in range(n):
                residual_row[1 << b] += matrix.entries[a - 1, b]
            conjugated = _product_arrays(t, _product_arrays(t, hat_inverse, residual_row), current)
            contracted += _blade_mul_right(t, conjugated, bit, float(t.metric[a - 1]))
        correction = np.divide(
            contracted, action_divisors, out=np.zeros(t.size), where=action_divisors != 0.0
        )
        correction[gram_block] = -gram[gram_block] / (2.0 * lam)
        current = current + _product_arrays(t, current, correction)
        norm = abs(_product_arrays(t, current * t.reverse_signs, current)[0])
        if norm > 0:
            current = current / math.sqrt(norm)
        step_merit = merit(current)
        if step_merit < best_merit:
            best, best_merit = current, step_merit
        elif not math.isfinite(step_merit) or step_merit > 10.0 * best_merit:
            break
    return best


def twisted_adjoint_residual(s: Multivector, matrix: OrthoMatrix) -> float:
    """Largest deviation of grade_involution(S) e_a S^-1 from the rows of P.

    The deviation is taken relative to the magnitude of the matrix (with a
    floor of 1, so it coincides with the plain absolute deviation whenever
    the entries are bounded by 1, e.g. for rotations).  Entries of strong
    boosts grow without bound and an absolute measure would conflate scale
    with accuracy.

    Returns inf when S has no usable inverse (reverse(S)*S far from a nonzero
    scalar), so unusable candidates lose any comparison.
    """
    return _residual_of_array(_get_tables(s.sig), s.coeffs, matrix)


def _numerator_to_result(
    matrix: OrthoMatrix,
    numerator: np.ndarray,
    norm_sign: int,
    residual_tol: float,
    warning: str | None,
) -> RotorResult:
    """Normalize a raw numerator array by a central square root and verify."""
    sig = matrix.sig
    t = _get_tables(sig)
    reversed_numerator = numerator * t.reverse_signs
    gram = _product_arrays(t, reversed_numerator, numerator) * float(norm_sign)
    central = CenterElement(
        sig, float(gram[0]), float(gram[-1]) if sig.n % 2 == 1 else 0.0
    )
    off_center = gram.copy()
    off_center[0] = 0.0
    if sig.n % 2 == 1:
        off_center[-1] = 0.0
    # Roundoff in the gram scales with the square of the numerator peak (the
    # intermediate product magnitude), not with the gram itself.
    peak = float(np.max(np.abs(numerator)))
    if float(np.max(np.abs(off_center))) > 1e-7 * max(1.0, peak * peak):
        raise VerificationFailedError(
            float(np.max(np.abs(off_center))),
            "reverse(N)*N is not central; the input is outside the method's domain",
        )
    best: np.ndarray | None = None
    best_residual = math.inf
    for root in central_sqrt_candidates(central):
        inverse = _central_inverse(root)
        if inverse is None:
            continue
        arr = numerator * inverse.scalar_part
        if sig.n % 2 == 1 and inverse.pseudo_part != 0.0:
            arr = arr + _blade_mul_right(t, numerator, t.full_mask, inverse.pseudo_part)
        residual = _residual_of_array(t, arr, matrix)
        if residual < best_residual:
            best, best_residual = arr, residual
    # Polishing only pays off when cancellation noise is visible; the bulk of
    # inputs verify far below tolerance straight from the division.
    if best is not None and math.isfinite(best_residual) and best_residual > 1e-11:
        best = _newton_polish(t, best, matrix)
        best_residual = _residual_of_array(t, best, matrix)
    if best is None or best_residual > residual_tol:
        raise VerificationFailedError(best_residual)
    spin = canonicalize_sign(Multivector(sig, best))
    return RotorResult(
        spin=spin,
        norm_sign=norm_sign,
        residual=best_residual,
        groups=classify_spin(spin),
        warning=warning,
    )


def recover_spin(
    matrix: OrthoMatrix,
    *,
    residual_tol: float = DEFAULT_RESIDUAL_TOLERANCE,
    degeneracy_tol: float = DEFAULT_DEGENERACY_TOLERANCE,
    method: str = "product",
) -> RotorResult:
    """Find the +-S double-cover preimages of a pseudo-orthogonal matrix.

    Builds the numerator sum, normalizes by the central square root whose
    sign is fixed by the component of the group, and keeps the candidate
    with the smallest verification residual.  The returned representative is
    sign-canonicalized; the other preimage is its negative.
    """
    sig = matrix.sig
    numerator = spin_numerator(matrix, method=method)
    scale = float(1 << sig.n)
    peak = numerator.max_abs()
    if peak < scale * degeneracy_tol:
        raise CenterProjectionVanishesError(
            "the numerator sum is numerically zero: the spin element for this matrix "
            "has vanishing central part and cannot be recovered by this construction"
        )
    warning = None
    if peak < scale * math.sqrt(degeneracy_tol):
        warning = (
            f"numerator peak {peak:.3e} is close to the degeneracy threshold; "
            "the result may be ill-conditioned"
        )
    norm_sign = spinor_norm_sign(matrix)
    return _numerator_to_result(matrix, numerator.coeffs, norm_sign, residual_tol, warning)


def recover_hestenes(
    matrix: OrthoMatrix,
    *,
    residual_tol: float = DEFAULT_RESIDUAL_TOLERANCE,
    degeneracy_tol: float = DEFAULT_DEGENERACY_TOLERANCE,
) -> RotorResult:
    """Dimension-4 shortcut for proper orthochronous matrices in Cl(1,3).

    Uses only the grade-1 contraction L = sum_a (row_a frame vector) * e^a,
    whose self-product lives in the scalar + pseudoscalar plane (a copy of
    the complex numbers), so a single complex square root normalizes it.
    Works whenever L is nonzero, which is a strictly weaker condition than
    the general path's nonzero scalar part.
    """
    sig = matrix.sig
    if (sig.p, sig.q) != (1, 3):
        raise SignatureMismatchError(
            f"this shortcut is only defined for Cl(1,3), got {sig}"
        )
    component = classify_component(matrix)
    if not component.in_so_plus:
        raise WrongComponentError(
            "the dimension-4 shortcut needs a proper orthochronous matrix (SO+)"
        )
    t = _get_tables(sig)
    contraction = np.zeros(t.size)
    for a in range(1, sig.n + 1):
        vector = np.zeros(t.size)
        for b in range(sig.n):
            vector[1 << b] = matrix.entries[a - 1, b]
        bit = 1 << (a - 1)
        contraction += _blade_mul_right(t, vector, bit, float(t.metric[a - 1]))
    peak = float(np.max(np.abs(contraction)))
    if peak < sig.n * degeneracy_tol:
        raise HestenesConditionError(
            "the grade-1 contraction vanishes: the spin element has neither scalar "
            "nor pseudoscalar part, so the dimension-4 shortcut does not apply"
        )
    ell = Multivector(sig, contraction)
    gram = geometric_product(involution(ell, "reverse"), ell)
    z0 = gram.scalar_part
    z4 = gram.pseudoscalar_part
    off = gram.coeffs.copy()
    off[0] = 0.0
    off[-1] = 0.0
    if float(np.max(np.abs(off))) > 1e-7 * max(1.0, peak * peak):
        raise VerificationFailedError(
            float(np.max(np.abs(off))),
            "reverse(L)*L left the scalar + pseudoscalar plane",
        )
    w = cmath.sqrt(complex(z0, z4))
    if abs(w) == 0.0:
        raise HestenesConditionError("the contraction self-product vanished")
    w_inv = 1.0 / w
    normalized = contraction * w_inv.real + _blade_mul_right(t, contraction, t.full_mask, w_inv.imag)
    if math.isfinite(_residual_of_array(t, normalized, matrix)):
        normalized = _newton_polish(t, normalized, matrix)
    residual = _residual_of_array(t, normalized, matrix)
    if residual > residual_tol:
        raise VerificationFailedError(residual)
    candidate = canonicalize_sign(Multivector(sig, normalized))
    return RotorResult(
        spin=candidate,
        norm_sign=spinor_norm_sign(matrix),
        residual=residual,
        groups=classify_spin(candidate),
        warning=None,
    )


def rotor_from_frames(
    frames: list[Multivector],
    *,
    ortho_tol: float = 1e-9,
    residual_tol: float = DEFAULT_RESIDUAL_TOLERANCE,
    degeneracy_tol: float = DEFAULT_DEGENERACY_TOLERANCE,
) -> RotorResult:
    """Rotor S with S e_a reverse(S) = frames[a-1] for a rotated frame.

    The frames must be grade-1, pairwise satisfy the same anticommutation
    relations as the generators (equivalently: their coordinate matrix is
    pseudo-orthogonal), and the coordinate matrix must lie in the proper
    orthochronous component, since only there is the preimage a rotor.
    """
    if not frames:
        raise ValueError("need at least one frame vector")
    sig = frames[0].sig
    n = sig.n
    if len(frames) != n:
        raise NotAFrameError(f"expected {n} frame vectors for {sig}, got {len(frames)}")
    entries = np.zeros((n, n))
    for a, frame in enumerate(frames):
        if frame.sig != sig:
            raise SignatureMismatchError("frame vectors live in different algebras")
        off_vector = frame.coeffs.copy()
        for b in range(n):
            entries[a, b] = frame.coeffs[1 << b]
            off_vector[1 << b] = 0.0
        if float(np.max(np.abs(off_vector))) > ortho_tol * max(1.0, frame.max_abs()):
            raise NotAFrameError(f"frame vector {a + 1} has non-vector components")
    try:
        matrix = validate_pseudo_orthogonal(entries, sig, tol=ortho_tol)
    except NotPseudoOrthogonalError as exc:
        raise NotAFrameError(
            f"frame vectors violate the anticommutation relations (residual {exc.residual:.3e})"
        ) from exc
    component = classify_component(matrix)
    if not component.in_so_plus:
        raise WrongComponentError(
            "the frame is not reachable by a rotor: its matrix lies outside SO+"
        )
    return recover_spin(
        matrix, residual_tol=residual_tol, degeneracy_tol=degeneracy_tol
    )


def classify_spin(s: Multivector, tol: float = 1e-8) -> SpinGroupTags:
    """Classify a versor into the five normalized versor groups.

    Checks parity, that reverse(S)*S is a real scalar, and that conjugation
    by S preserves grade-1 vectors; the flags then follow from the signs of
    reverse(S)*S and conjugate(S)*S.  An element passing the structural
    checks but with non-unit scalar gets all-false flags (it is a versor but
    not normalized).
    """
    t = _get_tables(s.sig)
    peak = s.max_abs()
    if peak == 0.0:
        raise ValueError("cannot classify the zero multivector")
    even_peak = float(np.max(np.abs(np.where(t.grades % 2 == 0, s.coeffs, 0.0))))
    odd_peak = float(np.max(np.abs(np.where(t.grades % 2 == 1, s.coeffs, 0.0))))
    if min(even_peak, odd_peak) > tol * max(1.0, peak):
        raise MixedParityError(
            f"element mixes even ({even_peak:.3e}) and odd ({odd_peak:.3e}) content"
        )
    is_even = even_peak >= odd_peak

    reversed_arr = involution(s, "reverse").coeffs
    gram = _product_arrays(t, reversed_arr, s.coeffs)
    lam = gram[0]
    off = gram.copy()
    off[0] = 0.0
    # Roundoff in the products scales with the square of the coefficient peak.
    if float(np.max(np.abs(off))) > tol * max(1.0, abs(lam), peak * peak):
        raise NotInLipschitzGroupError("reverse(S)*S is not a real scalar")
    if abs(lam) <= tol:
        raise NotInLipschitzGroupError("S is not invertible")

    inverse = reversed_arr / lam
    hat = involution(s, "grade").coeffs
    for a in range(s.sig.n):
        image = _product_arrays(t, _blade_mul_right(t, hat, 1 << a), inverse)
        off_vector = np.where(t.grades == 1, 0.0, image)
        if float(np.max(np.abs(off_vector))) > tol * max(1.0, float(np.max(np.abs(image)))):
            raise NotInLipschitzGroupError(
                f"conjugation of generator {a + 1} leaves the grade-1 subspace"
            )

    sigma_reverse = lam
    sigma_conjugate = _product_arrays(t, involution(s, "conjugate").coeffs, s.coeffs)[0]
    is_unit = abs(abs(lam) - 1.0) <= tol
    in_pin = is_unit
    in_pin_plus = is_unit and sigma_conjugate > 0
    in_pin_minus = is_unit and sigma_reverse > 0
    in_spin = is_unit and is_even
    return SpinGroupTags(
        in_pin=in_pin,
        in_spin=in_spin,
        in_spin_plus=in_spin and sigma_reverse > 0,
        in_pin_plus=in_pin_plus,
        in_pin_minus=in_pin_minus,
    )


def forward_matrix(
    s: Multivector,
    *,
    tol: float = 1e-8,
    ortho_tol: float = 1e-9,
) -> OrthoMatrix:
    """Matrix of the conjugation action: row a holds grade_involution(S) e_a S^-1.

    S must classify into Pin; the result always validates as pseudo-orthogonal.
    """
    tags = classify_spin(s, tol=tol)
    if not tags.in_pin:
        raise NotInPinError("the element is a versor but not normalized to Pin")
    t = _get_tables(s.sig)
    gram = _product_arrays(t, involution(s, "reverse").coeffs, s.coeffs)
    inverse = involution(s, "reverse").coeffs / gram[0]
    hat = involution(s, "grade").coeffs
    n = s.sig.n
    entries = np.zeros((n, n))
    for a in range(n):
        image = _product_arrays(t, _blade_mul_right(t, hat, 1 << a), inverse)
        for b in range(n):
            entries[a, b] = image[1 << b]
    return validate_pseudo_orthogonal(entries, s.sig, tol=ortho_tol)


def random_versor(sig: Signature, k: int, seed=None) -> Multivector:
    """Product of k random unit vectors; an element of Pin(p,q), even iff k is.

    Vectors too close to the null cone (|v^2| < 0.1 before normalization) are
    rejected and redrawn, then each is scaled to v^2 = +-1.  Deterministic
    for a fixed integer seed.
    """
    if k < 0:
        raise ValueError("reflection count must be nonnegative")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    t = _get_tables(sig)
    result = np.zeros(t.size)
    result[0] = 1.0
    for _ in range(k):
        while True:
            coords = rng.standard_normal(sig.n)
            square = float(np.sum(t.metric * coords * coords))
            if abs(square) >= 0.1:
                break
        coords /= math.sqrt(abs(square))
        result = _vector_mul_right(t, result, coords)
    return Multivector(sig, result)
