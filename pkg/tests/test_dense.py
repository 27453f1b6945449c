import numpy as np
import pytest

from opalg.dense import (
    apply_function,
    eig_hermitian,
    is_positive,
    op_norm,
    random_hermitian,
    spectral_projector,
)
from opalg.errors import DimensionLimitError, DomainError
from opalg.pauli import pauli_I, sigma_of_vector, to_dense, pauli_Z


Z = np.diag([1.0, -1.0]).astype(complex)


class TestEigHermitian:
    def test_z_projectors(self):
        dec = eig_hermitian(Z)
        assert dec.eigenvalues == [-1.0, 1.0]
        np.testing.assert_allclose(dec.projector_for(1.0), np.diag([1.0, 0.0]),
                                   atol=1e-14)
        np.testing.assert_allclose(dec.projector_for(-1.0), np.diag([0.0, 1.0]),
                                   atol=1e-14)

    def test_identity_single_cluster(self):
        dec = eig_hermitian(np.eye(3))
        assert dec.eigenvalues == [1.0]
        np.testing.assert_allclose(dec.projectors[0], np.eye(3), atol=1e-14)

    def test_random_reconstruction(self, rng):
        for dim in (2, 3, 5, 8):
            a = random_hermitian(dim, rng)
            dec = eig_hermitian(a)
            assert np.max(np.abs(dec.reconstruct() - a)) < 1e-10

    def test_pvm_axioms(self, rng):
        for _ in range(10):
            dec = eig_hermitian(random_hermitian(4, rng))
            total = sum(dec.projectors)
            np.testing.assert_allclose(total, np.eye(4), atol=1e-10)
            for i, p in enumerate(dec.projectors):
                np.testing.assert_allclose(p, p.conj().T, atol=1e-10)
                for j, q in enumerate(dec.projectors):
                    expected = p if i == j else np.zeros_like(p)
                    np.testing.assert_allclose(p @ q, expected, atol=1e-10)

    def test_rejects_non_hermitian(self):
        with pytest.raises(DomainError):
            eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_dimension_cap(self):
        with pytest.raises(DimensionLimitError):
            eig_hermitian(np.eye(5000))


class TestOpNorm:
    def test_z_has_norm_one(self):
        assert op_norm(Z) == pytest.approx(1.0, abs=1e-12)

    def test_jordan_block_exceeds_spectral_radius(self):
        # Oracle: sqrt of the top eigenvalue of A*A is the golden ratio.
        a = np.array([[1.0, 1.0], [0.0, 1.0]])
        golden = (1 + np.sqrt(5)) / 2
        assert op_norm(a) == pytest.approx(golden, abs=1e-12)
        assert op_norm(a) > 1.0  # max |eigenvalue| is 1

    @pytest.mark.parametrize("dim", [1, 2, 7, 32])
    def test_identity_norm(self, dim):
        assert op_norm(np.eye(dim)) == pytest.approx(1.0, abs=1e-12)

    def test_c_star_identity(self, rng):
        for _ in range(25):
            a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            assert op_norm(a) ** 2 == pytest.approx(
                op_norm(a.conj().T @ a), abs=1e-9)


class TestIsPositive:
    def test_squares_are_positive(self, rng):
        for _ in range(10):
            b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
            assert is_positive(b.conj().T @ b, 1e-10)

    def test_minus_z_not_positive(self):
        assert not is_positive(-Z, 1e-10)

    def test_kraus_defect_positive(self):
        k = np.sqrt(0.3) * np.array([[0.0, 1.0], [0.0, 0.0]])
        assert is_positive(np.eye(2) - k.conj().T @ k, 1e-10)

    def test_non_hermitian_not_positive(self):
        assert not is_positive(np.array([[1.0, 1.0], [0.0, 1.0]]), 1e-10)


class TestApplyFunction:
    def test_exponential_matches_closed_form(self, rng):
        for _ in range(10):
            n = rng.normal(size=3)
            n /= np.linalg.norm(n)
            s = to_dense(sigma_of_vector(n))
            theta = rng.uniform(0, 2 * np.pi)
            result = apply_function(lambda x: np.exp(1j * theta * x), s)
            closed = np.cos(theta) * np.eye(2) + 1j * np.sin(theta) * s
            np.testing.assert_allclose(result, closed, atol=1e-10)

    def test_identity_function(self, rng):
        a = random_hermitian(4, rng)
        np.testing.assert_allclose(apply_function(lambda x: x, a), a, atol=1e-10)

    def test_indicator_on_z(self):
        proj = spectral_projector(to_dense(pauli_Z()), lambda lam: lam > 0)
        np.testing.assert_allclose(proj, np.diag([1.0, 0.0]), atol=1e-12)

    def test_multiplicative_over_pointwise_product(self, rng):
        a = random_hermitian(5, rng)
        f = lambda x: x**2 + 1
        g = lambda x: np.exp(x / 5)
        lhs = apply_function(lambda x: f(x) * g(x), a)
        rhs = apply_function(f, a) @ apply_function(g, a)
        np.testing.assert_allclose(lhs, rhs, atol=1e-9)

    def test_identity_example(self):
        one = apply_function(lambda x: 1.0, to_dense(pauli_I()))
        np.testing.assert_allclose(one, np.eye(2), atol=1e-14)
