import numpy as np
import pytest

from chanforms import (
    PAULIS,
    SIGMA_1,
    SIGMA_3,
    AForm,
    BasisLabel,
    BForm,
    BlochVector,
    DensityMatrix,
    DimensionMismatchError,
    IncompleteKrausError,
    KrausSet,
    NotCompletelyPositiveError,
    NotHermiticityPreservingError,
    NotTracePreservingError,
    UnsupportedCombinationError,
    apply_a,
    apply_canonical,
    apply_kraus,
    bloch_to_density,
    build_pin_a,
    build_transpose_a,
    build_unitary_a,
    canonical_decompose,
    canonical_to_a,
    coefficient_matrix,
    cp_verdict,
    density_to_bloch,
    expand_coefficients,
    extract_kraus,
    kraus_to_a,
    random_cp_channel,
    random_ncp_a,
    realign_a_to_b,
    realign_b_to_a,
    rotation_unitary,
    standard_basis,
)
from conftest import random_density

PAULI = standard_basis(2, BasisLabel.PAULI_OVER_SQRT2)
UNITS2 = standard_basis(2, BasisLabel.MATRIX_UNITS)


def projection_a() -> AForm:
    return AForm(0.5 * np.array(
        [[1, 0, 0, 1], [0, 2, 0, 0], [0, 0, 2, 0], [1, 0, 0, 1]], dtype=complex
    ))


class TestStandardBasis:
    def test_pauli_elements(self):
        for mu, sigma in enumerate(PAULIS):
            assert np.array_equal(PAULI.elements[mu], sigma / np.sqrt(2))

    def test_pauli_requires_dim_two(self):
        with pytest.raises(UnsupportedCombinationError):
            standard_basis(3, BasisLabel.PAULI_OVER_SQRT2)

    @pytest.mark.parametrize("n", [2, 3])
    def test_matrix_units_orthonormal(self, n):
        basis = standard_basis(n, BasisLabel.MATRIX_UNITS)
        assert basis.elements.shape == (n * n, n, n)
        gram = np.einsum("mij,nij->mn", basis.elements.conj(), basis.elements)
        assert np.array_equal(gram, np.eye(n * n))

    def test_matrix_unit_layout(self):
        basis = standard_basis(2, BasisLabel.MATRIX_UNITS)
        e01 = np.zeros((2, 2), dtype=complex)
        e01[0, 1] = 1
        assert np.array_equal(basis.elements[1], e01)


class TestAFormValidation:
    def test_rejects_hermiticity_violation(self):
        m = np.eye(4, dtype=complex)
        # breaks conj(A[r's';rs]) == A[s'r';sr] while keeping column sums
        m[0, 1] = m[0, 2] = 0.5j
        m[3, 1] = m[3, 2] = -0.5j
        with pytest.raises(NotHermiticityPreservingError):
            AForm(m)

    def test_rejects_trace_violation(self):
        with pytest.raises(NotTracePreservingError):
            AForm(np.eye(4, dtype=complex) * 0.5)

    def test_rejects_non_square_side(self):
        with pytest.raises(ValueError):
            AForm(np.eye(5, dtype=complex))


class TestCoefficientMatrix:
    def test_transpose_map(self):
        # The nonunit eigenvalue sits in the sigma_2 slot: transposition
        # conjugates the state, which negates the sigma_2 component.
        cm = coefficient_matrix(build_transpose_a(), PAULI)
        assert np.abs(cm.matrix - np.diag([1, 1, -1, 1])).max() < 1e-12

    def test_identity_channel(self):
        cm = coefficient_matrix(AForm(np.eye(4, dtype=complex)), PAULI)
        assert np.abs(cm.matrix - np.diag([2, 0, 0, 0])).max() < 1e-12

    def test_equatorial_projection(self):
        cm = coefficient_matrix(projection_a(), PAULI)
        assert np.abs(cm.matrix - 0.5 * np.diag([3, 1, 1, -1])).max() < 1e-12

    def test_expansion_reproduces_a(self, rng):
        for rank in (1, 2, 4):
            a = kraus_to_a(random_cp_channel(2, rank, seed=rank))
            for basis in (PAULI, UNITS2):
                cm = coefficient_matrix(a, basis)
                assert np.abs(expand_coefficients(cm) - a.matrix).max() < 1e-12

    def test_matrix_units_coefficients_equal_b_form(self):
        # vec of a matrix unit is a standard basis vector, so the
        # coefficient matrix in that basis is the dynamical matrix itself.
        a = projection_a()
        cm = coefficient_matrix(a, UNITS2)
        assert np.abs(cm.matrix - realign_a_to_b(a).matrix).max() < 1e-14

    def test_dimension_mismatch(self):
        basis3 = standard_basis(3, BasisLabel.MATRIX_UNITS)
        with pytest.raises(DimensionMismatchError):
            coefficient_matrix(build_transpose_a(), basis3)

    def test_trace_equals_dim(self, rng):
        a = kraus_to_a(random_cp_channel(3, 2, seed=5))
        basis = standard_basis(3, BasisLabel.MATRIX_UNITS)
        assert abs(np.trace(coefficient_matrix(a, basis).matrix).real - 3) < 1e-10


class TestRealignment:
    def test_transpose_self_realigned(self):
        a = build_transpose_a()
        assert np.array_equal(realign_a_to_b(a).matrix, a.matrix)

    def test_pin_realigns_to_fixed_state_tensor_identity(self):
        p0 = BlochVector(0.6, 0.0, 0.0)
        b = realign_a_to_b(build_pin_a(p0))
        rho0 = bloch_to_density(p0).matrix
        assert np.abs(b.matrix - np.kron(rho0, np.eye(2))).max() < 1e-15

    def test_projection_b_form(self):
        b = realign_a_to_b(projection_a())
        expected = 0.5 * np.array(
            [[1, 0, 0, 2], [0, 1, 0, 0], [0, 0, 1, 0], [2, 0, 0, 1]], dtype=complex
        )
        assert np.array_equal(b.matrix, expected)

    def test_involution_on_random_channels(self):
        for seed in range(50):
            rank = seed % 4 + 1
            a = kraus_to_a(random_cp_channel(2, rank, seed=seed))
            round_trip = realign_b_to_a(realign_a_to_b(a))
            assert np.array_equal(round_trip.matrix, a.matrix)

    def test_b_to_a_pin(self):
        p0 = BlochVector(0, 0, 1)
        rho0 = bloch_to_density(p0).matrix
        b = BForm(np.kron(rho0, np.eye(2)))
        assert np.abs(realign_b_to_a(b).matrix - build_pin_a(p0).matrix).max() < 1e-15

    def test_b_form_trace_is_dim(self, rng):
        a = kraus_to_a(random_cp_channel(3, 3, seed=11))
        b = realign_a_to_b(a)
        assert abs(np.trace(b.matrix).real - 3) < 1e-10


class TestCanonicalDecomposition:
    def test_unitary_channel_rank_one(self):
        axis, angle = (0.36, 0.48, 0.8), 1.1
        decomp = canonical_decompose(build_unitary_a(axis, angle), PAULI)
        assert abs(decomp.eigenvalues[0] - 2.0) < 1e-12
        assert np.abs(decomp.eigenvalues[1:]).max() < 1e-12
        u = rotation_unitary(axis, angle)
        c0 = decomp.canonical_ops[0]
        overlap = abs(np.trace(c0.conj().T @ (u / np.sqrt(2))))
        assert abs(overlap - 1.0) < 1e-12  # equal up to global phase

    def test_transpose_spectrum_and_span(self):
        decomp = canonical_decompose(build_transpose_a(), PAULI)
        assert np.allclose(decomp.eigenvalues, [1, 1, 1, -1], atol=1e-12)
        # the -1 operator is the sigma_2 direction up to phase
        c_neg = decomp.canonical_ops[-1]
        overlap = abs(np.trace(c_neg.conj().T @ (PAULIS[2] / np.sqrt(2))))
        assert abs(overlap - 1.0) < 1e-10

    def test_reconstruction_of_random_channels(self):
        for seed in range(10):
            a = kraus_to_a(random_cp_channel(2, seed % 4 + 1, seed=seed))
            decomp = canonical_decompose(a, PAULI)
            assert np.abs(canonical_to_a(decomp).matrix - a.matrix).max() < 1e-9

    def test_trace_preservation_identity(self):
        a = kraus_to_a(random_cp_channel(2, 3, seed=9))
        decomp = canonical_decompose(a, PAULI)
        total = np.einsum(
            "k,kji,kjl->il",
            decomp.eigenvalues,
            decomp.canonical_ops.conj(),
            decomp.canonical_ops,
        )
        assert np.abs(total - np.eye(2)).max() < 1e-10

    def test_canonical_ops_orthonormal(self):
        decomp = canonical_decompose(kraus_to_a(random_cp_channel(2, 4, seed=3)), PAULI)
        gram = np.einsum("kij,lij->kl", decomp.canonical_ops.conj(), decomp.canonical_ops)
        assert np.abs(gram - np.eye(4)).max() < 1e-10

    def test_eigenvalues_match_coefficient_matrix(self):
        a = random_ncp_a(2, seed=21)
        decomp = canonical_decompose(a, PAULI)
        w = np.linalg.eigvalsh(coefficient_matrix(a, PAULI).matrix)
        assert np.abs(np.sort(decomp.eigenvalues) - w).max() < 1e-10

    def test_phase_fixing_deterministic(self):
        a = kraus_to_a(random_cp_channel(2, 2, seed=13))
        d1 = canonical_decompose(a, PAULI)
        d2 = canonical_decompose(a, PAULI)
        assert np.array_equal(d1.canonical_ops, d2.canonical_ops)
        for op in d1.canonical_ops:
            pivot = op.flat[np.argmax(np.abs(op))]
            assert pivot.imag == pytest.approx(0.0, abs=1e-12)
            assert pivot.real > 0


class TestExtractKraus:
    def test_bit_flip_three_quarters(self):
        ops = (np.sqrt(0.75) * np.eye(2, dtype=complex), np.sqrt(0.25) * SIGMA_1)
        decomp = canonical_decompose(kraus_to_a(ops), PAULI)
        kraus = extract_kraus(decomp)
        assert len(kraus) == 2
        for expected in ops:
            norm = np.linalg.norm(expected)
            best = max(
                abs(np.trace(expected.conj().T @ got)) / (norm * np.linalg.norm(got))
                for got in kraus.operators
            )
            assert abs(best - 1.0) < 1e-10
        total = sum(op.conj().T @ op for op in kraus.operators)
        assert np.abs(total - np.eye(2)).max() < 1e-10

    def test_transpose_has_no_kraus_form(self):
        decomp = canonical_decompose(build_transpose_a(), PAULI)
        with pytest.raises(NotCompletelyPositiveError):
            extract_kraus(decomp)

    def test_identity_channel(self):
        decomp = canonical_decompose(AForm(np.eye(4, dtype=complex)), PAULI)
        kraus = extract_kraus(decomp)
        assert len(kraus) == 1
        assert np.abs(kraus.operators[0] - np.eye(2)).max() < 1e-12


class TestApply:
    def test_pin_sends_everything_to_fixed_state(self, rng):
        p0 = BlochVector(0.1, -0.2, 0.3)
        a = build_pin_a(p0)
        rho0 = bloch_to_density(p0).matrix
        for _ in range(20):
            rho = DensityMatrix(random_density(rng))
            out = apply_a(a, rho)
            assert np.abs(out.matrix - rho0).max() < 1e-12
            assert out.positive

    def test_transpose_negates_sigma2(self):
        out = apply_a(build_transpose_a(), bloch_to_density(BlochVector(0, 1, 0)))
        assert np.allclose(density_to_bloch(out.to_density()).as_array(), [0, -1, 0])

    def test_projection_zeroes_third_component(self, rng):
        a = projection_a()
        for _ in range(10):
            p = rng.uniform(-1, 1, size=3)
            p *= rng.uniform(0, 1) / max(np.linalg.norm(p), 1e-12)
            out = apply_a(a, bloch_to_density(BlochVector(*p)))
            got = density_to_bloch(out.to_density()).as_array()
            assert np.abs(got - [p[0], p[1], 0.0]).max() < 1e-12

    def test_canonical_route_identity(self, rng):
        decomp = canonical_decompose(AForm(np.eye(4, dtype=complex)), PAULI)
        rho = DensityMatrix(random_density(rng))
        out = apply_canonical(decomp, rho)
        assert np.abs(out.matrix - rho.matrix).max() < 1e-12

    def test_canonical_route_phase_flip_oracle(self):
        p = 0.3
        ops = (np.sqrt(p) * np.eye(2, dtype=complex), np.sqrt(1 - p) * SIGMA_3)
        decomp = canonical_decompose(kraus_to_a(ops), PAULI)
        rho = bloch_to_density(BlochVector(1, 0, 0))
        # independent oracle: p*rho + (1-p)*sigma3 rho sigma3
        expected = p * rho.matrix + (1 - p) * SIGMA_3 @ rho.matrix @ SIGMA_3
        out = apply_canonical(decomp, rho)
        assert np.abs(out.matrix - expected).max() < 1e-12
        assert np.allclose(
            density_to_bloch(out.to_density()).as_array(), [-0.4, 0, 0], atol=1e-12
        )

    def test_canonical_route_bit_flip_half(self):
        ops = (np.sqrt(0.5) * np.eye(2, dtype=complex), np.sqrt(0.5) * SIGMA_1)
        decomp = canonical_decompose(kraus_to_a(ops), PAULI)
        out = apply_canonical(decomp, bloch_to_density(BlochVector(0, 0, 1)))
        expected = 0.5 * np.eye(2)  # 0.5*rho + 0.5*sigma1 rho sigma1 at p=(0,0,1)
        assert np.abs(out.matrix - expected).max() < 1e-12

    def test_three_routes_agree(self, rng):
        for seed in range(10):
            kraus = random_cp_channel(2, seed % 4 + 1, seed=seed + 100)
            a = kraus_to_a(kraus)
            decomp = canonical_decompose(a, PAULI)
            rho = DensityMatrix(random_density(rng))
            via_a = apply_a(a, rho).matrix
            via_canonical = apply_canonical(decomp, rho).matrix
            via_kraus = apply_kraus(kraus, rho).matrix
            assert np.abs(via_a - via_canonical).max() < 1e-9
            assert np.abs(via_a - via_kraus).max() < 1e-9

    def test_dimension_mismatch(self, rng):
        rho3 = DensityMatrix(random_density(rng, 3))
        with pytest.raises(DimensionMismatchError):
            apply_a(build_transpose_a(), rho3)

    def test_non_positive_output_flagged(self):
        # Bloch map (p1,p2,p3) -> (0,0,1.5*p3): trace- and hermiticity-
        # preserving but not positive, so a pole state leaves the ball.
        stretch = AForm(np.array(
            [
                [1.25, 0, 0, -0.25],
                [0, 0, 0, 0],
                [0, 0, 0, 0],
                [-0.25, 0, 0, 1.25],
            ],
            dtype=complex,
        ))
        out = apply_a(stretch, bloch_to_density(BlochVector(0, 0, 1)))
        assert not out.positive
        assert out.min_eigenvalue == pytest.approx(-0.25, abs=1e-12)


class TestKrausToA:
    def test_bit_flip_matrix(self):
        p = 0.75
        ops = (np.sqrt(p) * np.eye(2, dtype=complex), np.sqrt(1 - p) * SIGMA_1)
        a = kraus_to_a(ops)
        expected = np.array(
            [
                [p, 0, 0, 1 - p],
                [0, p, 1 - p, 0],
                [0, 1 - p, p, 0],
                [1 - p, 0, 0, p],
            ]
        )
        assert np.abs(a.matrix - expected).max() < 1e-15

    def test_identity(self):
        assert np.array_equal(kraus_to_a([np.eye(2, dtype=complex)]).matrix, np.eye(4))

    def test_phase_flip_unhalved(self):
        p = 0.3
        ops = (np.sqrt(p) * np.eye(2, dtype=complex), np.sqrt(1 - p) * SIGMA_3)
        a = kraus_to_a(ops)
        assert np.abs(a.matrix - np.diag([1, 2 * p - 1, 2 * p - 1, 1])).max() < 1e-15

    def test_incomplete_set_rejected(self):
        with pytest.raises(IncompleteKrausError):
            kraus_to_a([0.5 * np.eye(2, dtype=complex)])

    def test_validity_propagation(self):
        for seed in range(10):
            a = kraus_to_a(random_cp_channel(2, seed % 4 + 1, seed=seed))
            n = a.dim
            a4 = a.matrix.reshape(n, n, n, n)
            herm = np.abs(np.conj(a4) - a4.transpose(1, 0, 3, 2)).max()
            tp = np.abs(np.einsum("iikl->kl", a4) - np.eye(n)).max()
            assert herm < 1e-10 and tp < 1e-10

    def test_matrix_unit_column_oracle(self):
        # Assemble A column by column by pushing each matrix unit through
        # the operator sum; linearity makes this reproduce the A matrix.
        kraus = random_cp_channel(2, 3, seed=77)
        a = kraus_to_a(kraus)
        assembled = np.zeros((4, 4), dtype=complex)
        for r in range(2):
            for s in range(2):
                unit = np.zeros((2, 2), dtype=complex)
                unit[r, s] = 1.0
                image = sum(op @ unit @ op.conj().T for op in kraus.operators)
                assembled[:, 2 * r + s] = image.reshape(-1)
        assert np.abs(assembled - a.matrix).max() < 1e-12


class TestCpVerdict:
    def test_transpose(self):
        verdict = cp_verdict(build_transpose_a(), PAULI)
        assert not verdict.is_cp
        assert verdict.min_eigenvalue == pytest.approx(-1.0, abs=1e-10)

    def test_projection(self):
        verdict = cp_verdict(projection_a(), PAULI)
        assert not verdict.is_cp
        assert verdict.min_eigenvalue == pytest.approx(-0.5, abs=1e-10)

    @pytest.mark.parametrize("direction", [(0, 0, 1), (0.6, 0.8, 0), (0.5, 0.5, 0.7071067811865476)])
    @pytest.mark.parametrize("radius", [0.0, 0.5, 1.0])
    def test_pin_is_cp_with_paired_spectrum(self, direction, radius):
        p0 = BlochVector(*(radius * np.asarray(direction, dtype=float)))
        verdict = cp_verdict(build_pin_a(p0), PAULI)
        assert verdict.is_cp
        expected = np.sort([(1 + radius) / 2] * 2 + [(1 - radius) / 2] * 2)[::-1]
        assert np.abs(np.sort(verdict.eigenvalues)[::-1] - expected).max() < 1e-10


class TestSpectralIdentity:
    @pytest.mark.parametrize("basis", [PAULI, UNITS2], ids=["pauli", "units"])
    def test_cp_and_ncp_channels(self, basis):
        for seed in range(20):
            if seed % 2:
                a = kraus_to_a(random_cp_channel(2, seed % 4 + 1, seed=seed))
            else:
                a = random_ncp_a(2, seed=seed)
            coeff_spec = np.sort(canonical_decompose(a, basis).eigenvalues)
            b_spec = np.linalg.eigvalsh(realign_a_to_b(a).matrix)
            assert np.abs(coeff_spec - b_spec).max() < 1e-9

    def test_basis_independence(self):
        a = random_ncp_a(2, seed=4)
        w_pauli = np.sort(canonical_decompose(a, PAULI).eigenvalues)
        w_units = np.sort(canonical_decompose(a, UNITS2).eigenvalues)
        assert np.abs(w_pauli - w_units).max() < 1e-9

    def test_round_trip_kraus(self):
        for seed in range(8):
            a = kraus_to_a(random_cp_channel(2, seed % 4 + 1, seed=seed + 40))
            kraus = extract_kraus(canonical_decompose(a, PAULI))
            assert np.abs(kraus_to_a(kraus).matrix - a.matrix).max() < 1e-8


class TestTraceIdentity:
    def test_coefficient_and_b_traces_equal_dim(self):
        cases = [kraus_to_a(random_cp_channel(2, r, seed=60 + r)) for r in (1, 2, 3, 4)]
        cases += [random_ncp_a(2, seed=s) for s in (61, 62)]
        for a in cases:
            for basis in (PAULI, UNITS2):
                assert abs(np.trace(coefficient_matrix(a, basis).matrix).real - 2) < 1e-9
            assert abs(np.trace(realign_a_to_b(a).matrix).real - 2) < 1e-9


class TestQutritPipeline:
    def test_decompose_extract_apply(self, rng):
        basis3 = standard_basis(3, BasisLabel.MATRIX_UNITS)
        a = kraus_to_a(random_cp_channel(3, 2, seed=31))
        decomp = canonical_decompose(a, basis3)
        assert np.abs(canonical_to_a(decomp).matrix - a.matrix).max() < 1e-9
        kraus = extract_kraus(decomp)
        rho = DensityMatrix(random_density(rng, 3))
        via_a = apply_a(a, rho).matrix
        assert np.abs(apply_kraus(kraus, rho).matrix - via_a).max() < 1e-9
        assert np.abs(apply_canonical(decomp, rho).matrix - via_a).max() < 1e-9


class TestKrausSetValidation:
    def test_mixed_shapes_rejected(self):
        with pytest.raises(DimensionMismatchError):
            KrausSet((np.eye(2, dtype=complex), np.eye(3, dtype=complex)))

    def test_empty_rejected(self):
        with pytest.raises(IncompleteKrausError):
            KrausSet(())
