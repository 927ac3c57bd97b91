import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chanforms import (
    BlochVector,
    DensityMatrix,
    InvalidStateError,
    NotHermitianError,
    OutsideBallError,
    WrongDimensionError,
    bloch_to_density,
    density_to_bloch,
    hermitian_eigendecompose,
    row_unvectorize,
    row_vectorize,
)
from conftest import random_hermitian


def char_poly_roots(m: np.ndarray) -> np.ndarray:
    """Eigenvalue oracle: characteristic polynomial via Newton's identities
    on power-sum traces, then a companion-matrix root finder (np.roots).

    Shares no code path with the Hermitian eigensolver under test.
    """
    n = m.shape[0]
    power_sums = [float(np.trace(np.linalg.matrix_power(m, k)).real) for k in range(1, n + 1)]
    # e_k from Newton's identities: k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i
    e = [1.0]
    for k in range(1, n + 1):
        acc = 0.0
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * power_sums[i - 1]
        e.append(acc / k)
    coeffs = [(-1) ** k * e[k] for k in range(n + 1)]
    return np.sort(np.roots(coeffs).real)


class TestHermitianEigendecompose:
    def test_projection_coefficient_spectrum(self):
        m = np.diag([3.0, 1.0, 1.0, -1.0]).astype(complex) / 2
        eig = hermitian_eigendecompose(m)
        assert np.allclose(eig.eigenvalues, [1.5, 0.5, 0.5, -0.5], atol=1e-12)

    def test_identity(self):
        eig = hermitian_eigendecompose(np.eye(2, dtype=complex))
        assert np.allclose(eig.eigenvalues, [1.0, 1.0])
        gram = eig.eigenvectors @ eig.eigenvectors.conj().T
        assert np.abs(gram - np.eye(2)).max() < 1e-12

    def test_matches_companion_matrix_oracle(self, rng):
        for _ in range(20):
            m = random_hermitian(rng, 4)
            eig = hermitian_eigendecompose(m)
            assert np.allclose(np.sort(eig.eigenvalues), char_poly_roots(m), atol=1e-8)

    def test_rows_are_eigenvectors(self, rng):
        m = random_hermitian(rng, 5)
        eig = hermitian_eigendecompose(m)
        for lam, vec in zip(eig.eigenvalues, eig.eigenvectors):
            assert np.abs(m @ vec - lam * vec).max() < 1e-10

    def test_rows_orthonormal(self, rng):
        m = random_hermitian(rng, 6)
        eig = hermitian_eigendecompose(m)
        gram = eig.eigenvectors @ eig.eigenvectors.conj().T
        assert np.abs(gram - np.eye(6)).max() < 1e-12

    def test_descending_order(self, rng):
        eig = hermitian_eigendecompose(random_hermitian(rng, 8))
        assert np.all(np.diff(eig.eigenvalues) <= 0)

    def test_reconstruction(self, rng):
        m = random_hermitian(rng, 4)
        eig = hermitian_eigendecompose(m)
        bound = 10 * 1e-9 * np.abs(m).max()
        assert np.abs(eig.reconstruct() - m).max() <= bound

    def test_trace_preserved(self, rng):
        for n in (2, 3, 4, 7):
            m = random_hermitian(rng, n)
            eig = hermitian_eigendecompose(m)
            assert abs(eig.eigenvalues.sum() - np.trace(m).real) < 1e-10

    def test_idempotent_on_spectrum(self, rng):
        m = random_hermitian(rng, 4)
        first = hermitian_eigendecompose(m)
        second = hermitian_eigendecompose(first.reconstruct())
        assert np.abs(first.eigenvalues - second.eigenvalues).max() < 1e-10

    def test_rejects_non_hermitian(self):
        m = np.array([[0, 1], [0, 0]], dtype=complex)
        with pytest.raises(NotHermitianError):
            hermitian_eigendecompose(m)

    def test_rejects_non_square(self):
        with pytest.raises(NotHermitianError):
            hermitian_eigendecompose(np.zeros((2, 3), dtype=complex))


class TestBlochConversions:
    def test_maximally_mixed(self):
        rho = bloch_to_density(BlochVector(0, 0, 0))
        assert np.allclose(rho.matrix, np.eye(2) / 2)

    def test_pure_up(self):
        rho = bloch_to_density(BlochVector(0, 0, 1))
        assert np.allclose(rho.matrix, np.diag([1.0, 0.0]))

    def test_pure_plus(self):
        rho = bloch_to_density(BlochVector(1, 0, 0))
        assert np.allclose(rho.matrix, np.full((2, 2), 0.5))

    def test_back_maximally_mixed(self):
        p = density_to_bloch(DensityMatrix(np.eye(2, dtype=complex) / 2))
        assert p.norm < 1e-12

    def test_back_pure_down(self):
        p = density_to_bloch(DensityMatrix(np.diag([0.0, 1.0]).astype(complex)))
        assert np.allclose(p.as_array(), [0, 0, -1])

    def test_back_sigma2_eigenstate(self):
        rho = DensityMatrix(0.5 * np.array([[1, -1j], [1j, 1]]))
        assert np.allclose(density_to_bloch(rho).as_array(), [0, 1, 0])

    @settings(max_examples=60, deadline=None)
    @given(
        st.tuples(
            st.floats(-1, 1, allow_nan=False),
            st.floats(-1, 1, allow_nan=False),
            st.floats(-1, 1, allow_nan=False),
        ).filter(lambda t: t[0] ** 2 + t[1] ** 2 + t[2] ** 2 <= 1.0)
    )
    def test_mutual_inverses_on_ball(self, p):
        vec = BlochVector(*p)
        back = density_to_bloch(bloch_to_density(vec))
        assert np.abs(back.as_array() - vec.as_array()).max() < 1e-12

    def test_outside_ball_rejected(self):
        with pytest.raises(OutsideBallError):
            BlochVector(1.0, 1.0, 0.0)

    def test_wrong_dimension_rejected(self):
        rho3 = DensityMatrix(np.eye(3, dtype=complex) / 3)
        with pytest.raises(WrongDimensionError):
            density_to_bloch(rho3)


class TestDensityMatrixValidation:
    def test_non_hermitian_rejected(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix(np.array([[0.5, 0.5], [0.0, 0.5]]))

    def test_wrong_trace_rejected(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix(np.eye(2, dtype=complex))

    def test_negative_rejected(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix(np.diag([1.5, -0.5]).astype(complex))

    def test_matrix_is_read_only(self):
        rho = DensityMatrix(np.eye(2, dtype=complex) / 2)
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 0.0


class TestRowVectorize:
    def test_maximally_mixed(self):
        v = row_vectorize(DensityMatrix(np.eye(2, dtype=complex) / 2))
        assert np.allclose(v, [0.5, 0, 0, 0.5])

    def test_pure_up_column(self):
        v = row_vectorize(bloch_to_density(BlochVector(0, 0, 1)))
        assert np.allclose(v, [1, 0, 0, 0])

    def test_pure_plus_column(self):
        v = row_vectorize(bloch_to_density(BlochVector(1, 0, 0)))
        assert np.allclose(v, [0.5, 0.5, 0.5, 0.5])

    def test_index_layout(self, rng):
        m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        v = row_vectorize(m)
        for r in range(3):
            for s in range(3):
                assert v[r * 3 + s] == m[r, s]

    def test_unvectorize_inverts_exactly(self, rng):
        m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        assert np.array_equal(row_unvectorize(row_vectorize(m)), m)

    @settings(max_examples=40, deadline=None)
    @given(
        st.floats(-5, 5, allow_nan=False),
        st.floats(-5, 5, allow_nan=False),
        st.integers(0, 2**32 - 1),
    )
    def test_linearity(self, alpha, beta, seed):
        r = np.random.default_rng(seed)
        x = r.standard_normal((2, 2)) + 1j * r.standard_normal((2, 2))
        y = r.standard_normal((2, 2)) + 1j * r.standard_normal((2, 2))
        lhs = row_vectorize(alpha * x + beta * y)
        rhs = alpha * row_vectorize(x) + beta * row_vectorize(y)
        assert np.abs(lhs - rhs).max() < 1e-9

    def test_bad_length_rejected(self):
        with pytest.raises(ValueError):
            row_unvectorize(np.zeros(5, dtype=complex))
