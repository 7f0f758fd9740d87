"""Recovery pipeline: numerator, norm sign, central roots, round trips."""

import math

import numpy as np
import pytest

from rotorlift import (
    CenterElement,
    CenterProjectionVanishesError,
    HestenesConditionError,
    MixedParityError,
    Multivector,
    NoRealRootError,
    NotAFrameError,
    NotInLipschitzGroupError,
    NotInPinError,
    Signature,
    SignatureMismatchError,
    SpecialOrthogonalRequiredError,
    VerificationFailedError,
    WrongComponentError,
    canonicalize_sign,
    central_sqrt_candidates,
    classify_component,
    classify_spin,
    forward_matrix,
    frame_vector,
    geometric_product,
    involution,
    pseudoscalar_square,
    random_versor,
    recover_hestenes,
    recover_spin,
    rotor_from_frames,
    spin_numerator,
    spinor_norm_sign,
    twisted_adjoint_residual,
    validate_pseudo_orthogonal,
)
from helpers import (
    exp_series,
    max_diff,
    rodrigues_rows,
    rotation_plane_bivector,
    signatures_up_to,
)


def mv(sig, terms):
    return Multivector.from_terms(sig, terms)


def rotation2(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [-s, c]])


def versor_ks(n):
    """Reflection counts compatible with the recovery domain."""
    return (0, 2, 4) if n % 2 == 0 else (0, 1, 2, 3, 4)


class TestSpinNumerator:
    @pytest.mark.parametrize("sig", signatures_up_to(5))
    def test_identity_matrix(self, sig):
        matrix = validate_pseudo_orthogonal(np.eye(sig.n), sig)
        numerator = spin_numerator(matrix)
        assert numerator.terms() == {0: float(1 << sig.n)}

    def test_minus_identity_vanishes(self):
        matrix = validate_pseudo_orthogonal(-np.eye(2), Signature(2, 0))
        assert spin_numerator(matrix).max_abs() <= 1e-14

    def test_rotation_closed_form(self):
        # expanding the four multi-index terms of a plane rotation by hand:
        # e + 2(cos - sin e12) + det * e12 e^12 = (2 + 2cos) - 2 sin e12
        theta = 0.8
        matrix = validate_pseudo_orthogonal(rotation2(theta), Signature(2, 0))
        numerator = spin_numerator(matrix)
        expected = mv(
            Signature(2, 0),
            {(): 2.0 + 2.0 * math.cos(theta), (1, 2): -2.0 * math.sin(theta)},
        )
        assert max_diff(numerator, expected) <= 1e-14

    def test_improper_even_rejected(self):
        matrix = validate_pseudo_orthogonal(np.diag([-1.0, 1.0]), Signature(2, 0))
        with pytest.raises(SpecialOrthogonalRequiredError):
            spin_numerator(matrix)

    @pytest.mark.parametrize("sig", signatures_up_to(4))
    def test_product_and_minor_methods_agree(self, sig):
        for k in versor_ks(sig.n)[1:]:
            matrix = forward_matrix(random_versor(sig, k, seed=50 + k + sig.p))
            fast = spin_numerator(matrix, method="product")
            slow = spin_numerator(matrix, method="minors")
            assert max_diff(fast, slow) <= 1e-9 * max(1.0, fast.max_abs())

    @pytest.mark.parametrize("sig", signatures_up_to(5))
    def test_numerator_is_even(self, sig):
        for k in versor_ks(sig.n)[1:]:
            matrix = forward_matrix(random_versor(sig, k, seed=60 + k))
            numerator = spin_numerator(matrix)
            odd = numerator.odd_part()
            assert odd.max_abs() <= 1e-10 * max(1.0, numerator.max_abs())


class TestSpinorNormSign:
    def test_identity(self):
        for sig in (Signature(2, 0), Signature(1, 2), Signature(1, 3)):
            matrix = validate_pseudo_orthogonal(np.eye(sig.n), sig)
            assert spinor_norm_sign(matrix) == 1

    def test_boost(self):
        phi = 1.3
        boost = np.array([[math.cosh(phi), math.sinh(phi)], [math.sinh(phi), math.cosh(phi)]])
        matrix = validate_pseudo_orthogonal(boost, Signature(1, 1))
        assert spinor_norm_sign(matrix) == 1

    def test_minus_identity_in_lorentz_plane(self):
        matrix = validate_pseudo_orthogonal(-np.eye(2), Signature(1, 1))
        assert spinor_norm_sign(matrix) == -1

    @pytest.mark.parametrize("sig", signatures_up_to(7))
    def test_matches_direct_versor_product(self, sig):
        for i, k in enumerate(versor_ks(sig.n)):
            s = random_versor(sig, k, seed=3000 + 10 * i + sig.p)
            matrix = forward_matrix(s)
            if sig.n % 4 == 3:
                direct = geometric_product(involution(s, "conjugate"), s).scalar_part
            else:
                direct = geometric_product(involution(s, "reverse"), s).scalar_part
            assert abs(direct - spinor_norm_sign(matrix)) < 1e-6


class TestCentralSquareRoots:
    def test_even_scalar(self):
        roots = central_sqrt_candidates(CenterElement(Signature(2, 0), 4.0))
        assert len(roots) == 1 and roots[0].scalar_part == 2.0

    def test_even_rotation_value(self):
        theta = 0.9
        z = CenterElement(Signature(2, 0), 8.0 * (1.0 + math.cos(theta)))
        (root,) = central_sqrt_candidates(z)
        assert abs(root.scalar_part - 2.0 * math.sqrt(2.0 + 2.0 * math.cos(theta))) < 1e-12

    def test_even_negative_rejected(self):
        with pytest.raises(NoRealRootError):
            central_sqrt_candidates(CenterElement(Signature(2, 0), -1.0))

    def test_complex_center(self):
        # (2 + i)^2 = 3 + 4i with the pseudoscalar playing i
        sig = Signature(3, 0)
        assert pseudoscalar_square(sig) == -1.0
        (root,) = central_sqrt_candidates(CenterElement(sig, 3.0, 4.0))
        assert abs(root.scalar_part - 2.0) < 1e-15
        assert abs(root.pseudo_part - 1.0) < 1e-15

    def test_double_number_center(self):
        sig = Signature(2, 1)
        assert pseudoscalar_square(sig) == 1.0
        z = CenterElement(sig, 5.0, 3.0)
        roots = central_sqrt_candidates(z)
        assert len(roots) == 2
        for root in roots:
            square = geometric_product(root.embed(), root.embed())
            assert max_diff(square, z.embed()) < 1e-12

    def test_double_number_negative_eigenvalue_rejected(self):
        with pytest.raises(NoRealRootError):
            central_sqrt_candidates(CenterElement(Signature(2, 1), 1.0, 2.0))


class TestRecoverSpin:
    def test_identity(self):
        sig = Signature(2, 0)
        result = recover_spin(validate_pseudo_orthogonal(np.eye(2), sig))
        assert result.spin.terms() == {0: 1.0}
        assert result.norm_sign == 1
        assert result.residual <= 1e-12

    def test_quarter_turn_matches_exponential(self):
        # oracle: exp(-(theta/2) e12) for theta = pi/2
        sig = Signature(2, 0)
        oracle = exp_series(mv(sig, {(1, 2): -math.pi / 4.0}))
        matrix = validate_pseudo_orthogonal(rotation2(math.pi / 2.0), sig)
        result = recover_spin(matrix)
        assert max_diff(result.spin, canonicalize_sign(oracle)) <= 1e-12
        root_half = math.sqrt(0.5)
        assert abs(result.spin[0] - root_half) <= 1e-12
        assert abs(result.spin[0b11] + root_half) <= 1e-12

    def test_minus_identity_is_degenerate(self):
        with pytest.raises(CenterProjectionVanishesError):
            recover_spin(validate_pseudo_orthogonal(-np.eye(2), Signature(2, 0)))

    def test_even_negative_norm_component(self):
        # Spin(1,1) outside Spin+: S = sinh(t) + cosh(t) e12
        sig = Signature(1, 1)
        t = 0.6
        s = canonicalize_sign(mv(sig, {(): math.sinh(t), (1, 2): math.cosh(t)}))
        matrix = forward_matrix(s)
        result = recover_spin(matrix)
        assert result.norm_sign == -1
        assert max_diff(result.spin, s) <= 1e-12
        assert result.groups.in_spin and not result.groups.in_spin_plus

    def test_dimension_one_reflections(self):
        plus = recover_spin(validate_pseudo_orthogonal([[-1.0]], Signature(1, 0)))
        assert plus.spin.terms() == {1: 1.0}
        assert plus.norm_sign == 1
        minus = recover_spin(validate_pseudo_orthogonal([[-1.0]], Signature(0, 1)))
        assert minus.spin.terms() == {1: 1.0}
        assert minus.norm_sign == -1

    def test_verification_catches_sloppy_input(self):
        # accepted only because of the huge tolerance; recovery must refuse
        sig = Signature(2, 0)
        wonky = rotation2(0.3) + np.array([[0.0, 1e-3], [0.0, 0.0]])
        matrix = validate_pseudo_orthogonal(wonky, sig, tol=0.1)
        with pytest.raises(VerificationFailedError):
            recover_spin(matrix)

    def test_reverse_and_conjugate_gram_coincide(self):
        # for an even numerator the two candidate normalization products match
        for sig in (Signature(3, 0), Signature(0, 3), Signature(2, 1)):
            matrix = forward_matrix(random_versor(sig, 3, seed=17 + sig.p))
            numerator = spin_numerator(matrix)
            via_reverse = geometric_product(involution(numerator, "reverse"), numerator)
            via_conjugate = geometric_product(involution(numerator, "conjugate"), numerator)
            assert max_diff(via_reverse, via_conjugate) <= 1e-9 * max(1.0, via_reverse.max_abs())


class TestRoundTrips:
    @pytest.mark.parametrize("sig", signatures_up_to(6))
    def test_matrix_rotor_matrix(self, sig):
        for i in range(6):
            k = versor_ks(sig.n)[i % len(versor_ks(sig.n))]
            s = random_versor(sig, k, seed=4000 + 31 * i + sig.p)
            matrix = forward_matrix(s)
            try:
                result = recover_spin(matrix)
            except CenterProjectionVanishesError:
                continue
            back = forward_matrix(result.spin)
            scale = max(1.0, float(np.max(np.abs(matrix.entries))))
            assert np.max(np.abs(back.entries - matrix.entries)) <= 1e-8 * scale

    @pytest.mark.parametrize("sig", signatures_up_to(6))
    def test_rotor_matrix_rotor(self, sig):
        for i in range(6):
            k = versor_ks(sig.n)[i % len(versor_ks(sig.n))]
            s = random_versor(sig, k, seed=5000 + 37 * i + sig.q)
            try:
                result = recover_spin(forward_matrix(s))
            except CenterProjectionVanishesError:
                continue
            scale = max(1.0, s.max_abs())
            assert max_diff(canonicalize_sign(s), result.spin) <= 1e-8 * scale

    def test_two_sheets_share_one_matrix(self):
        sig = Signature(1, 2)
        s = random_versor(sig, 2, seed=8)
        assert np.array_equal(forward_matrix(s).entries, forward_matrix(-s).entries)

    @pytest.mark.parametrize("sig", signatures_up_to(6))
    def test_parity_matches_determinant(self, sig):
        for k in versor_ks(sig.n):
            s = random_versor(sig, k, seed=600 + k)
            matrix = forward_matrix(s)
            try:
                result = recover_spin(matrix)
            except CenterProjectionVanishesError:
                continue
            even = result.spin.odd_part().max_abs() <= 1e-9 * max(1.0, result.spin.max_abs())
            assert even == (matrix.det_sign == 1)


class TestDimensionThree:
    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_axis_angle_closed_form(self, seed):
        # matrix built independently via the axis-angle formula; the recovered
        # rotor must match cos(t/2) - sin(t/2) B on the rotation plane
        sig = Signature(3, 0)
        rng = np.random.default_rng(seed)
        axis = rng.standard_normal(3)
        angle = rng.uniform(0.2, 2.9)
        matrix = validate_pseudo_orthogonal(rodrigues_rows(axis, angle), sig)
        result = recover_spin(matrix)
        plane = rotation_plane_bivector(sig, axis)
        expected = (
            Multivector.scalar(sig, math.cos(angle / 2.0)) - plane * math.sin(angle / 2.0)
        )
        assert max_diff(result.spin, canonicalize_sign(expected)) <= 1e-9
        oracle = exp_series(plane * (-angle / 2.0))
        assert max_diff(canonicalize_sign(oracle), result.spin) <= 1e-9

    @pytest.mark.parametrize("seed", [4, 5])
    def test_numerator_reduces_to_vector_sum(self, seed):
        # in three dimensions the full sum collapses to 2(e + sum_a beta_a e^a)
        sig = Signature(3, 0)
        rng = np.random.default_rng(seed)
        matrix = validate_pseudo_orthogonal(
            rodrigues_rows(rng.standard_normal(3), rng.uniform(0.1, 3.0)), sig
        )
        numerator = spin_numerator(matrix)
        reduced = Multivector.scalar(sig, 1.0)
        for a in (1, 2, 3):
            reduced = reduced + geometric_product(
                frame_vector(matrix, a), Multivector.basis_vector(sig, a)
            )
        assert max_diff(numerator, reduced * 2.0) <= 1e-10


class TestHestenes:
    def boost_oracle(self, phi=1.0):
        sig = Signature(1, 3)
        return exp_series(mv(sig, {(1, 2): phi / 2.0}))

    def test_identity(self):
        matrix = validate_pseudo_orthogonal(np.eye(4), Signature(1, 3))
        result = recover_hestenes(matrix)
        assert result.spin.terms() == {0: 1.0}

    def test_boost_matches_exponential(self):
        oracle = self.boost_oracle(1.0)
        matrix = forward_matrix(oracle)
        result = recover_hestenes(matrix)
        expected = mv(Signature(1, 3), {(): math.cosh(0.5), (1, 2): math.sinh(0.5)})
        assert max_diff(result.spin, canonicalize_sign(expected)) <= 1e-9
        assert max_diff(result.spin, canonicalize_sign(oracle)) <= 1e-9

    def test_agrees_with_general_path(self):
        sig = Signature(1, 3)
        count = 0
        seed = 0
        while count < 30:
            seed += 1
            s = random_versor(sig, (0, 2, 4)[seed % 3], seed=seed)
            if not classify_spin(s).in_spin_plus:
                continue
            matrix = forward_matrix(s)
            try:
                general = recover_spin(matrix)
                shortcut = recover_hestenes(matrix)
            except (CenterProjectionVanishesError, HestenesConditionError):
                continue
            count += 1
            scale = max(1.0, general.spin.max_abs())
            assert max_diff(general.spin, shortcut.spin) <= 1e-8 * scale

    def test_pure_bivector_rotor_has_no_contraction(self):
        # S = e34 is a rotor whose scalar and pseudoscalar parts both vanish
        sig = Signature(1, 3)
        s = mv(sig, {(3, 4): 1.0})
        assert classify_spin(s).in_spin_plus
        matrix = forward_matrix(s)
        assert np.allclose(matrix.entries, np.diag([1.0, 1.0, -1.0, -1.0]))
        with pytest.raises(HestenesConditionError):
            recover_hestenes(matrix)

    def test_works_where_general_path_degenerates(self):
        # scalar part zero but pseudoscalar part not: only the shortcut applies
        sig = Signature(1, 3)
        phi = 0.7
        s = geometric_product(self.boost_oracle(phi), mv(sig, {(3, 4): 1.0}))
        assert abs(s[0]) < 1e-12
        matrix = forward_matrix(s)
        with pytest.raises(CenterProjectionVanishesError):
            recover_spin(matrix)
        result = recover_hestenes(matrix)
        assert max_diff(result.spin, canonicalize_sign(s)) <= 1e-9

    def test_wrong_signature(self):
        with pytest.raises(SignatureMismatchError):
            recover_hestenes(validate_pseudo_orthogonal(np.eye(4), Signature(2, 2)))

    def test_wrong_component(self):
        matrix = validate_pseudo_orthogonal(np.diag([-1.0, -1, 1, 1]), Signature(1, 3))
        assert not classify_component(matrix).in_so_plus
        with pytest.raises(WrongComponentError):
            recover_hestenes(matrix)


class TestRotorFromFrames:
    def test_identity_frame(self):
        sig = Signature(3, 0)
        frames = [Multivector.basis_vector(sig, a) for a in (1, 2, 3)]
        result = rotor_from_frames(frames)
        assert result.spin.terms() == {0: 1.0}
        assert result.norm_sign == 1

    def test_quarter_turn_frame(self):
        sig = Signature(3, 0)
        rows = rodrigues_rows([0.0, 0.0, 1.0], math.pi / 2.0)
        frames = [Multivector.from_vector(sig, rows[a]) for a in range(3)]
        result = rotor_from_frames(frames)
        root_half = math.sqrt(0.5)
        expected = mv(sig, {(): root_half, (1, 2): -root_half})
        assert max_diff(result.spin, expected) <= 1e-12

    def test_frames_verify_against_rotor(self):
        sig = Signature(2, 1)
        seed = 0
        while True:
            seed += 1
            s = random_versor(sig, 2, seed=seed)
            if classify_spin(s).in_spin_plus:
                break
        matrix = forward_matrix(s)
        frames = [frame_vector(matrix, a) for a in (1, 2, 3)]
        result = rotor_from_frames(frames)
        inverse = involution(result.spin, "reverse")
        for a, frame in enumerate(frames, start=1):
            image = geometric_product(
                geometric_product(result.spin, Multivector.basis_vector(sig, a)), inverse
            )
            assert max_diff(image, frame) <= 1e-9 * max(1.0, frame.max_abs())

    def test_non_anticommuting_vectors_rejected(self):
        sig = Signature(2, 0)
        frames = [
            Multivector.basis_vector(sig, 1),
            Multivector.basis_vector(sig, 1) + Multivector.basis_vector(sig, 2),
        ]
        with pytest.raises(NotAFrameError):
            rotor_from_frames(frames)

    def test_frames_with_higher_grades_rejected(self):
        sig = Signature(2, 0)
        frames = [
            Multivector.basis_vector(sig, 1) + mv(sig, {(1, 2): 0.5}),
            Multivector.basis_vector(sig, 2),
        ]
        with pytest.raises(NotAFrameError):
            rotor_from_frames(frames)

    def test_wrong_frame_count_rejected(self):
        sig = Signature(3, 0)
        with pytest.raises(NotAFrameError):
            rotor_from_frames([Multivector.basis_vector(sig, 1)])

    def test_reflected_frame_rejected(self):
        sig = Signature(2, 0)
        frames = [-Multivector.basis_vector(sig, 1), Multivector.basis_vector(sig, 2)]
        with pytest.raises(WrongComponentError):
            rotor_from_frames(frames)


class TestForwardMatrix:
    def test_identity_element(self):
        sig = Signature(2, 1)
        matrix = forward_matrix(Multivector.scalar(sig, 1.0))
        assert np.array_equal(matrix.entries, np.eye(3))

    def test_plane_rotor_gives_minus_identity(self):
        sig = Signature(2, 0)
        matrix = forward_matrix(mv(sig, {(1, 2): 1.0}))
        assert np.allclose(matrix.entries, -np.eye(2))

    def test_reflection_vector(self):
        sig = Signature(3, 0)
        matrix = forward_matrix(Multivector.basis_vector(sig, 1))
        assert np.allclose(matrix.entries, np.diag([-1.0, 1.0, 1.0]))

    def test_unnormalized_versor_rejected(self):
        with pytest.raises(NotInPinError):
            forward_matrix(Multivector.scalar(Signature(2, 0), 2.0))

    def test_mixed_parity_rejected(self):
        sig = Signature(2, 0)
        with pytest.raises(MixedParityError):
            forward_matrix(mv(sig, {(): 1.0, (1,): 1.0}))


class TestClassifySpin:
    def test_identity_has_all_tags(self):
        tags = classify_spin(Multivector.scalar(Signature(2, 2), 1.0))
        assert tags.group_names() == ["Pin", "Pin+", "Pin-", "Spin", "Spin+"]

    def test_euclidean_reflection(self):
        tags = classify_spin(Multivector.basis_vector(Signature(3, 0), 1))
        assert tags.in_pin and tags.in_pin_minus
        assert not tags.in_pin_plus and not tags.in_spin

    def test_plane_rotor_in_compact_signature(self):
        # reverse(e12) e12 = e21 e12 = +1, so e12 is a rotor here
        sig = Signature(2, 0)
        e12 = mv(sig, {(1, 2): 1.0})
        sigma = geometric_product(involution(e12, "reverse"), e12)
        assert sigma.terms() == {0: 1.0}
        tags = classify_spin(e12)
        assert tags.in_spin and tags.in_spin_plus and tags.in_pin_minus

    def test_plane_rotor_in_lorentz_plane(self):
        # in Cl(1,1) the same blade squares to +1 and reverse(S) S = -1
        sig = Signature(1, 1)
        e12 = mv(sig, {(1, 2): 1.0})
        sigma = geometric_product(involution(e12, "reverse"), e12)
        assert sigma.terms() == {0: -1.0}
        tags = classify_spin(e12)
        assert tags.in_spin and not tags.in_spin_plus
        assert not tags.in_pin_minus and not tags.in_pin_plus

    def test_scaled_scalar_is_not_pin(self):
        tags = classify_spin(Multivector.scalar(Signature(2, 0), 2.0))
        assert not tags.in_pin and not tags.in_spin

    def test_non_versor_rejected(self):
        sig = Signature(4, 0)
        with pytest.raises(MixedParityError):
            classify_spin(mv(sig, {(): 1.0, (1,): 1.0}))
        with pytest.raises(NotInLipschitzGroupError):
            classify_spin(mv(sig, {(): 1.0, (1, 2, 3, 4): 1.0}))

    @pytest.mark.parametrize("sig", signatures_up_to(5))
    def test_covering_map_component_table(self, sig):
        for i, k in enumerate(versor_ks(sig.n) + versor_ks(sig.n)):
            s = random_versor(sig, k, seed=7000 + 13 * i + sig.p)
            tags = classify_spin(s)
            component = classify_component(forward_matrix(s))
            assert tags.in_pin
            assert tags.in_spin == component.in_so
            assert tags.in_pin_plus == component.in_o_plus
            assert tags.in_pin_minus == component.in_o_minus
            assert tags.in_spin_plus == component.in_so_plus


class TestRandomVersor:
    def test_zero_reflections_is_identity(self):
        s = random_versor(Signature(2, 1), 0, seed=1)
        assert s.terms() == {0: 1.0}

    def test_single_euclidean_reflection_is_unit_vector(self):
        s = random_versor(Signature(3, 0), 1, seed=2)
        assert s.grades_present() == {1}
        square = geometric_product(s, s)
        assert max_diff(square, Multivector.scalar(Signature(3, 0), 1.0)) <= 1e-12

    def test_deterministic_for_fixed_seed(self):
        a = random_versor(Signature(2, 3), 4, seed=99)
        b = random_versor(Signature(2, 3), 4, seed=99)
        assert np.array_equal(a.coeffs, b.coeffs)

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_gram_is_unit_scalar(self, k):
        sig = Signature(2, 2)
        s = random_versor(sig, k, seed=10 + k)
        gram = geometric_product(involution(s, "reverse"), s)
        assert abs(abs(gram.scalar_part) - 1.0) <= 1e-10
        off = gram - Multivector.scalar(sig, gram.scalar_part)
        assert off.max_abs() <= 1e-9 * max(1.0, s.max_abs()) ** 2

    def test_parity_tracks_reflection_count(self):
        sig = Signature(1, 2)
        for k in range(5):
            s = random_versor(sig, k, seed=123 + k)
            grades = s.grades_present(tol=1e-12)
            assert all(g % 2 == k % 2 for g in grades)


class TestResidualDefinition:
    def test_exact_rotor_has_tiny_residual(self):
        sig = Signature(2, 0)
        s = canonicalize_sign(exp_series(mv(sig, {(1, 2): 0.3})))
        matrix = forward_matrix(s)
        assert twisted_adjoint_residual(s, matrix) <= 1e-14

    def test_wrong_rotor_has_large_residual(self):
        sig = Signature(2, 0)
        s = canonicalize_sign(exp_series(mv(sig, {(1, 2): 0.3})))
        other = canonicalize_sign(exp_series(mv(sig, {(1, 2): 0.9})))
        assert twisted_adjoint_residual(other, forward_matrix(s)) > 0.1
