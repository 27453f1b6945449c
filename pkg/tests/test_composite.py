import numpy as np
import pytest

from opalg.composite import (
    FactorLayout,
    algebra_closure,
    bell_state,
    cnot,
    commutant,
    devectorize,
    factor_check,
    hadamard,
    is_product_state,
    partial_trace,
    permute_sites,
    tensor,
    vectorize,
)
from opalg.errors import DomainError
from opalg.pauli import AlgebraSpec, pauli_X, pauli_Z, to_dense
from opalg.states import State, is_pure

from conftest import random_density

X = to_dense(pauli_X())
Z = to_dense(pauli_Z())
I2 = np.eye(2, dtype=complex)


class TestTensor:
    def test_cnot_block_form(self):
        expected = np.zeros((4, 4), dtype=complex)
        expected[:2, :2] = I2
        expected[2:, 2:] = X
        np.testing.assert_allclose(cnot(), expected, atol=1e-14)

    def test_multiplicative_componentwise(self, rng):
        for _ in range(20):
            a, b, c, d = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
                          for _ in range(4))
            np.testing.assert_allclose(tensor(a, b) @ tensor(c, d),
                                       tensor(a @ c, b @ d), atol=1e-12)

    def test_identity_tensor_identity(self):
        np.testing.assert_allclose(tensor(I2, I2), np.eye(4), atol=1e-15)


class TestBellState:
    def test_zz_correlation(self):
        bell = bell_state()
        zz = tensor(Z, Z)
        assert bell.expect(zz).real == pytest.approx(1.0, abs=1e-14)

    def test_local_z_vanishes(self):
        bell = bell_state()
        assert abs(bell.expect(tensor(Z, I2))) < 1e-14
        assert abs(bell.expect(tensor(I2, Z))) < 1e-14

    def test_purity(self):
        assert is_pure(bell_state())

    def test_construction_matches_bell_vector(self):
        # CNOT (H (x) I)|00> equals (|00> + |11>)/sqrt(2) up to global phase.
        zero = np.zeros(4, dtype=complex)
        zero[0] = 1.0
        constructed = cnot() @ tensor(hadamard(), I2) @ zero
        target = np.zeros(4, dtype=complex)
        target[0] = target[3] = 1 / np.sqrt(2)
        overlap = abs(np.vdot(target, constructed))
        assert overlap == pytest.approx(1.0, abs=1e-12)


class TestPartialTrace:
    def test_bell_reductions_are_maximally_mixed(self):
        bell = bell_state()
        layout = FactorLayout.qubits(2)
        for site in (0, 1):
            np.testing.assert_allclose(
                partial_trace(bell.density, layout, [site]), I2 / 2, atol=1e-14)

    def test_product_reduction(self, rng):
        layout = FactorLayout.qubits(2)
        for _ in range(10):
            rho1, rho2 = random_density(2, rng), random_density(2, rng)
            product = tensor(rho1, rho2)
            np.testing.assert_allclose(partial_trace(product, layout, [0]),
                                       rho1, atol=1e-12)
            np.testing.assert_allclose(partial_trace(product, layout, [1]),
                                       rho2, atol=1e-12)

    def test_trace_consistency(self, rng):
        layout = FactorLayout((2, 3, 2))
        a = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
        reduced = partial_trace(a, layout, [1])
        assert np.trace(reduced) == pytest.approx(np.trace(a), abs=1e-12)
        full = partial_trace(a, layout, [])
        assert full.shape == (1, 1)
        assert full[0, 0] == pytest.approx(np.trace(a), abs=1e-12)

    def test_middle_site_keep(self, rng):
        layout = FactorLayout((2, 2, 2))
        rhos = [random_density(2, rng) for _ in range(3)]
        product = tensor(tensor(rhos[0], rhos[1]), rhos[2])
        np.testing.assert_allclose(partial_trace(product, layout, [1]),
                                   rhos[1], atol=1e-12)
        np.testing.assert_allclose(partial_trace(product, layout, [0, 2]),
                                   tensor(rhos[0], rhos[2]), atol=1e-12)

    def test_invalid_site(self):
        with pytest.raises(DomainError):
            partial_trace(np.eye(4), FactorLayout.qubits(2), [2])


class TestPermuteSites:
    def test_swap_on_product(self, rng):
        a, b = random_density(2, rng), random_density(3, rng)
        swapped = permute_sites(tensor(a, b), (2, 3), [1, 0])
        np.testing.assert_allclose(swapped, tensor(b, a), atol=1e-12)


class TestProductWitness:
    def test_random_product_states_pass(self, rng):
        layout = FactorLayout.qubits(2)
        for _ in range(20):
            rho = tensor(random_density(2, rng), random_density(2, rng))
            assert is_product_state(State(rho), layout)

    def test_bell_fails(self):
        assert not is_product_state(bell_state(), FactorLayout.qubits(2))


class TestVectorization:
    def test_choi_identities(self, rng):
        ident = vectorize(np.eye(4))
        for _ in range(50):
            a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            np.testing.assert_allclose(vectorize(a),
                                       tensor(a, np.eye(4)) @ ident, atol=1e-12)
            np.testing.assert_allclose(vectorize(a),
                                       tensor(np.eye(4), a.T) @ ident, atol=1e-12)

    def test_trace_pairing(self, rng):
        rho = random_density(3, rng)
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        lhs = np.trace(rho @ a)
        rhs = np.vdot(vectorize(np.eye(3)), vectorize(rho @ a))
        assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_hilbert_schmidt_pairing(self, rng):
        # Oracle: expand <<A|B>> in the outer-product basis.
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        assert np.vdot(vectorize(a), vectorize(b)) == pytest.approx(
            np.trace(a.conj().T @ b), abs=1e-12)

    def test_round_trip(self, rng):
        a = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        np.testing.assert_allclose(devectorize(vectorize(a)), a, atol=0)


class TestCommutant:
    def test_first_factor_commutant_is_second(self):
        gens = [tensor(X, I2), tensor(Z, I2)]
        basis = commutant(gens, 4)
        assert len(basis) == 4
        for m in basis:
            for g in gens:
                np.testing.assert_allclose(m @ g, g @ m, atol=1e-10)

    def test_full_algebra_has_trivial_commutant(self):
        basis = commutant([X, Z], 2)
        assert len(basis) == 1
        np.testing.assert_allclose(basis[0] / basis[0][0, 0], I2, atol=1e-10)

    def test_diagonal_masa(self):
        basis = commutant([Z], 2)
        assert len(basis) == 2  # span{I, Z} is its own commutant


class TestFactorCheck:
    def test_first_qubit_factor(self):
        report = factor_check([np.eye(4), tensor(X, I2), tensor(Z, I2)], 4)
        assert report["join_is_full"]
        assert report["intersection_trivial"]
        assert not report["is_masa"]

    def test_diagonal_subalgebra_join_not_full(self):
        report = factor_check([I2.copy(), Z], 2)
        assert report["is_masa"]
        assert report["join_is_full"] is False or report["commutant_dim"] == 2
        # span{I,Z} v its commutant = span{I,Z}, which is not M_2.
        closure = algebra_closure([I2, Z], 2)
        assert len(closure) == 2

    def test_scalars_join_full(self):
        report = factor_check([I2.copy()], 2)
        assert report["join_is_full"]
        assert report["intersection_trivial"]
        assert not report["is_masa"]

    def test_adjoint_closure_required(self):
        with pytest.raises(DomainError):
            factor_check([np.array([[0, 1], [0, 0]], dtype=complex)], 2)
