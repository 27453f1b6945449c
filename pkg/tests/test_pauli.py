import time

import numpy as np
import pytest

from opalg.errors import (
    AlgebraMismatchError,
    GroupStructureError,
    UnsupportedInputError,
)
from opalg.jsonio import operator_from_json, operator_to_json
from opalg.pauli import (
    AlgebraSpec,
    OperatorSum,
    PauliWord,
    QUBIT,
    bracket,
    op_combine,
    pauli_I,
    pauli_X,
    pauli_Y,
    pauli_Z,
    sigma,
    sigma_of_vector,
    to_dense,
    word_mul,
    word_to_dense,
)

from conftest import random_operator_sum


def word(letters):
    return PauliWord.from_letters(letters)


class TestWordMul:
    def test_x_times_z_already_ordered(self):
        xz = word_mul(word("X"), word("Z"))
        assert xz.phase_exp == 0
        assert xz.x == (1,) and xz.z == (1,)

    def test_z_times_x_picks_up_minus_one(self):
        zx = word_mul(word("Z"), word("X"))
        assert zx.phase_exp == 2  # omega_4^2 = -1
        assert zx.x == (1,) and zx.z == (1,)

    def test_sigma1_sigma2_is_i_sigma3(self):
        prod = sigma(1) * sigma(2)
        assert prod.equals(1j * sigma(3), tol=0)

    @pytest.mark.parametrize("i", [1, 2, 3])
    @pytest.mark.parametrize("j", [1, 2, 3])
    def test_pauli_relations_all_nine_pairs(self, i, j):
        eps = {
            (1, 2): 3, (2, 3): 1, (3, 1): 2,
            (2, 1): -3, (3, 2): -1, (1, 3): -2,
        }
        expected = OperatorSum.zero(QUBIT)
        if i == j:
            expected = expected + pauli_I()
        else:
            k = eps[(i, j)]
            sign = 1 if k > 0 else -1
            expected = expected + (1j * sign) * sigma(abs(k))
        assert (sigma(i) * sigma(j)).equals(expected, tol=0)

    def test_word_times_adjoint_is_identity(self, rng):
        for d in (2, 3, 5):
            spec = AlgebraSpec(d, 3)
            for _ in range(20):
                w = PauliWord(spec, int(rng.integers(0, 2 * d)),
                              tuple(rng.integers(0, d, 3)),
                              tuple(rng.integers(0, d, 3)))
                assert word_mul(w, w.adjoint()) == PauliWord.identity(spec)

    def test_spec_mismatch_rejected(self):
        with pytest.raises(AlgebraMismatchError):
            word_mul(word("X"), word("XX"))

    def test_runtime_grows_linearly(self):
        def timed(n, reps=200):
            spec = AlgebraSpec(2, n)
            rng = np.random.default_rng(n)
            a = PauliWord(spec, 0, tuple(rng.integers(0, 2, n)),
                          tuple(rng.integers(0, 2, n)))
            b = PauliWord(spec, 0, tuple(rng.integers(0, 2, n)),
                          tuple(rng.integers(0, 2, n)))
            best = float("inf")
            for _ in range(3):
                start = time.perf_counter()
                for _ in range(reps):
                    word_mul(a, b)
                best = min(best, time.perf_counter() - start)
            return best

        t10, t1000 = timed(10), timed(1000)
        # Linear scaling predicts ~100x; quadratic would be ~10000x.
        assert t1000 < 2000 * t10


class TestOperatorSum:
    def test_adjoint_of_i_x(self):
        assert (1j * pauli_X()).adjoint().equals(-1j * pauli_X(), tol=0)

    def test_hadamard_square_is_two_i(self):
        # Oracle: dense expansion of (X+Z)^2.
        h = pauli_X() + pauli_Z()
        dense_sq = h.to_dense() @ h.to_dense()
        np.testing.assert_allclose(dense_sq, 2 * np.eye(2), atol=1e-14)
        assert (h * h).equals(2 * pauli_I(), tol=1e-14)

    def test_adjoint_antimultiplicative(self, rng):
        spec = AlgebraSpec(2, 2)
        for _ in range(25):
            a = random_operator_sum(spec, rng)
            b = random_operator_sum(spec, rng)
            assert (a * b).adjoint().equals(b.adjoint() * a.adjoint(), tol=1e-12)

    def test_double_adjoint_involutive(self, rng):
        # d=2 phases are table-exact; qutrit phases are irrational floats.
        for d, tol in ((2, 0.0), (3, 1e-14)):
            spec = AlgebraSpec(d, 2)
            for _ in range(10):
                a = random_operator_sum(spec, rng)
                assert a.adjoint().adjoint().equals(a, tol=tol)

    def test_associativity(self, rng):
        spec = AlgebraSpec(2, 2)
        for _ in range(20):
            a, b, c = (random_operator_sum(spec, rng) for _ in range(3))
            assert ((a * b) * c).equals(a * (b * c), tol=1e-12)

    def test_op_combine_dispatch(self):
        a, b = pauli_X(), pauli_Z()
        assert op_combine("add", a, b).equals(a + b)
        assert op_combine("scale", a, 2j).equals(2j * a)
        assert op_combine("mul", a, b).equals(a * b)
        assert op_combine("adjoint", 1j * a).equals(-1j * a)

    def test_coefficient_drop_tolerance(self):
        tiny = OperatorSum(QUBIT, {((1,), (0,)): 1e-16})
        assert tiny.num_terms() == 0


class TestSigmaOfVector:
    def test_unit_z_gives_z(self):
        assert sigma_of_vector([0, 0, 1]).equals(pauli_Z(), tol=0)

    def test_random_unit_vectors_square_to_identity(self, rng):
        for _ in range(100):
            v = rng.normal(size=3)
            v /= np.linalg.norm(v)
            sq = sigma_of_vector(v) * sigma_of_vector(v)
            assert sq.equals(pauli_I(), tol=1e-12)

    def test_product_rule_dot_plus_cross(self):
        m, n = np.array([1.0, 0, 0]), np.array([0, 1.0, 0])
        lhs = sigma_of_vector(m) * sigma_of_vector(n)
        rhs = float(m @ n) * pauli_I() + 1j * sigma_of_vector(np.cross(m, n))
        assert lhs.equals(rhs, tol=1e-15)
        assert lhs.equals(1j * pauli_Z(), tol=1e-15)

    def test_wrong_spec_rejected(self):
        with pytest.raises(AlgebraMismatchError):
            sigma_of_vector([1, 0, 0], AlgebraSpec(2, 2))


class TestBracket:
    def test_commutator_z_x(self):
        assert bracket("commutator", pauli_Z(), pauli_X()).equals(
            2j * pauli_Y(), tol=0)

    def test_jordan_x_z_vanishes(self):
        assert bracket("jordan", pauli_X(), pauli_Z()).is_zero()

    def test_multiplicative_x_z(self):
        result = bracket("multiplicative", pauli_X(), pauli_Z())
        assert result.equals(-1 * pauli_I(), tol=0)

    def test_multiplicative_rejects_sums(self):
        with pytest.raises(UnsupportedInputError):
            bracket("multiplicative", pauli_X() + pauli_Z(), pauli_X())


class TestWeylRelations:
    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_zx_equals_omega_xz(self, d):
        spec = AlgebraSpec(d, 1)
        x = OperatorSum.from_word(PauliWord.single(spec, 0, x=1))
        z = OperatorSum.from_word(PauliWord.single(spec, 0, z=1))
        assert (z * x).equals(spec.omega() * (x * z), tol=1e-12)

    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_x_and_z_have_order_d(self, d):
        spec = AlgebraSpec(d, 1)
        x = OperatorSum.from_word(PauliWord.single(spec, 0, x=1))
        z = OperatorSum.from_word(PauliWord.single(spec, 0, z=1))
        assert x.power(d).equals(OperatorSum.identity(spec), tol=0)
        assert z.power(d).equals(OperatorSum.identity(spec), tol=0)


class TestDenseRealization:
    def test_z_matrix(self):
        np.testing.assert_allclose(to_dense(pauli_Z()), np.diag([1, -1]),
                                   atol=1e-15)

    def test_x_matrix(self):
        np.testing.assert_allclose(to_dense(pauli_X()),
                                   np.array([[0, 1], [1, 0]]), atol=1e-15)

    def test_y_matrix(self):
        np.testing.assert_allclose(to_dense(pauli_Y()),
                                   np.array([[0, -1j], [1j, 0]]), atol=1e-15)

    @pytest.mark.parametrize("d", [2, 3])
    def test_homomorphism_on_random_words(self, d, rng):
        spec = AlgebraSpec(d, 2)
        for _ in range(50):
            a = PauliWord(spec, int(rng.integers(0, 2 * d)),
                          tuple(rng.integers(0, d, 2)),
                          tuple(rng.integers(0, d, 2)))
            b = PauliWord(spec, int(rng.integers(0, 2 * d)),
                          tuple(rng.integers(0, d, 2)),
                          tuple(rng.integers(0, d, 2)))
            np.testing.assert_allclose(
                word_to_dense(word_mul(a, b)),
                word_to_dense(a) @ word_to_dense(b), atol=1e-10)

    def test_star_homomorphism_on_sums(self, rng):
        spec = AlgebraSpec(2, 2)
        for _ in range(10):
            a = random_operator_sum(spec, rng)
            b = random_operator_sum(spec, rng)
            np.testing.assert_allclose(to_dense(a + b),
                                       to_dense(a) + to_dense(b), atol=1e-10)
            np.testing.assert_allclose(to_dense(a * b),
                                       to_dense(a) @ to_dense(b), atol=1e-10)
            np.testing.assert_allclose(to_dense(a.adjoint()),
                                       to_dense(a).conj().T, atol=1e-10)


class TestJsonFormat:
    def test_round_trip(self, rng):
        spec = AlgebraSpec(2, 3)
        op = random_operator_sum(spec, rng)
        data = operator_to_json(op)
        assert set(data) == {"d", "n", "terms"}
        for term in data["terms"]:
            assert set(term) == {"x", "z", "coeff"}
        back = operator_from_json(data)
        assert back.equals(op, tol=1e-12)

    def test_phases_fold_into_coefficients(self):
        data = operator_to_json(pauli_Y())
        assert data["terms"] == [{"x": [1], "z": [1], "coeff": [0.0, 1.0]}]
