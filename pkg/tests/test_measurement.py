import numpy as np
import pytest

from opalg.composite import FactorLayout, bell_state, hadamard, tensor
from opalg.dense import random_hermitian
from opalg.errors import DomainError, ZeroProbabilityError
from opalg.measurement import (
    measurement_square,
    ppm_measure,
    pvm_measure,
    rs_bound,
)
from opalg.pauli import QUBIT, pauli_X, pauli_Y, pauli_Z, to_dense
from opalg.states import State, fiducial_z_state

from conftest import random_density

X = to_dense(pauli_X())
Y = to_dense(pauli_Y())
Z = to_dense(pauli_Z())
I2 = np.eye(2, dtype=complex)


def plus_state():
    return State.from_vector(hadamard() @ np.array([1.0, 0.0]), QUBIT)


class TestPvmMeasure:
    def test_z_on_plus(self):
        records, _ = pvm_measure(plus_state(), Z)
        by_outcome = {round(r.outcome): r for r in records}
        assert by_outcome[1].probability == pytest.approx(0.5, abs=1e-12)
        assert by_outcome[-1].probability == pytest.approx(0.5, abs=1e-12)
        np.testing.assert_allclose(by_outcome[1].post_state.density,
                                   np.diag([1.0, 0.0]), atol=1e-12)
        np.testing.assert_allclose(by_outcome[-1].post_state.density,
                                   np.diag([0.0, 1.0]), atol=1e-12)

    def test_post_measurement_sharpness(self, rng):
        state = State(random_density(2, rng), QUBIT)
        records, _ = pvm_measure(state, Z)
        for record in records:
            if record.post_state is None:
                continue
            for k in (1, 2):
                moment = record.post_state.expect(np.linalg.matrix_power(Z, k))
                assert moment.real == pytest.approx(record.outcome**k,
                                                    abs=1e-10)

    def test_identity_observable(self, rng):
        state = State(random_density(3, rng))
        records, unobserved = pvm_measure(state, np.eye(3))
        assert len(records) == 1
        assert records[0].probability == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(unobserved.density, state.density,
                                   atol=1e-12)

    def test_born_normalization(self, rng):
        for _ in range(20):
            state = State(random_density(4, rng))
            records, _ = pvm_measure(state, random_hermitian(4, rng))
            assert sum(r.probability for r in records) == pytest.approx(
                1.0, abs=1e-10)

    def test_unobserved_equals_mixture(self, rng):
        state = State(random_density(4, rng))
        records, unobserved = pvm_measure(state, random_hermitian(4, rng))
        mixture = sum(r.probability * r.post_state.density for r in records
                      if r.post_state is not None)
        np.testing.assert_allclose(unobserved.density, mixture, atol=1e-10)

    def test_repetition_stability(self, rng):
        state = State(random_density(4, rng))
        obs = random_hermitian(4, rng)
        records, _ = pvm_measure(state, obs)
        for record in records:
            if record.post_state is None:
                continue
            again, _ = pvm_measure(record.post_state, obs)
            matching = [r for r in again
                        if abs(r.outcome - record.outcome) < 1e-8]
            assert matching[0].probability == pytest.approx(1.0, abs=1e-9)
            np.testing.assert_allclose(matching[0].post_state.density,
                                       record.post_state.density, atol=1e-9)

    def test_non_hermitian_rejected(self):
        with pytest.raises(DomainError):
            pvm_measure(fiducial_z_state(0), np.array([[0, 1], [0, 0]]))


class TestPpmMeasure:
    def test_bell_z_plus_one(self):
        result = ppm_measure(bell_state(), FactorLayout.qubits(2), 0, Z, 1.0)
        expected = tensor(np.diag([1.0, 0.0]), I2 / 2)
        np.testing.assert_allclose(result.density, expected, atol=1e-12)

    def test_product_state_reduces_to_luders(self, rng):
        layout = FactorLayout.qubits(2)
        local = random_density(2, rng)
        other = random_density(2, rng)
        state = State(tensor(local, other))
        result = ppm_measure(state, layout, 0, Z, 1.0)
        records, _ = pvm_measure(State(local), Z)
        lueders = next(r for r in records if abs(r.outcome - 1.0) < 1e-9)
        np.testing.assert_allclose(
            result.density, tensor(lueders.post_state.density, other),
            atol=1e-12)

    def test_measured_observable_sharp(self, rng):
        layout = FactorLayout.qubits(2)
        state = State(random_density(4, rng))
        result = ppm_measure(state, layout, 1, Z, -1.0)
        assert result.variance(tensor(I2, Z)) < 1e-10

    def test_zero_probability_rejected(self):
        state = State(tensor(np.diag([1.0, 0.0]), I2 / 2))
        with pytest.raises(ZeroProbabilityError):
            ppm_measure(state, FactorLayout.qubits(2), 0, Z, -1.0)


class TestMeasurementSquare:
    def test_commuting_pair_closes_on_bell(self):
        result = measurement_square(bell_state(), tensor(Z, I2), tensor(I2, Z),
                                    1.0, 1.0)
        assert result["closes"]
        assert result["state_distance"] < 1e-9

    def test_non_commuting_pair_fails_on_plus(self):
        result = measurement_square(plus_state(), Z, X, 1.0, 1.0)
        assert not result["closes"]
        assert result["state_distance"] > 1e-3

    def test_projector_commutator_value(self):
        # The quoted pair Pi_{Z,-1} = (I+Z)/2, Pi_{X,-1} = (I-X)/2.
        proj_z = (I2 + Z) / 2
        proj_x = (I2 - X) / 2
        np.testing.assert_allclose(proj_z @ proj_x - proj_x @ proj_z,
                                   -0.5j * Y, atol=1e-12)

    def test_zero_probability_path_rejected(self):
        with pytest.raises(ZeroProbabilityError):
            measurement_square(fiducial_z_state(0), Z, Z, -1.0, -1.0)


class TestRsBound:
    def test_random_triples_satisfied(self, rng):
        for _ in range(100):
            state = State(random_density(3, rng))
            a, b = random_hermitian(3, rng), random_hermitian(3, rng)
            report = rs_bound(state, a, b)
            assert report["satisfied"]
            assert report["lhs"] <= report["rhs"] + 1e-10

    def test_equal_observables_saturate(self, rng):
        state = State(random_density(2, rng))
        gamma = random_hermitian(2, rng)
        report = rs_bound(state, gamma, gamma)
        assert report["lhs"] == pytest.approx(report["rhs"], abs=1e-10)

    def test_x_y_on_north_pole_saturates(self):
        report = rs_bound(fiducial_z_state(0), X, Y)
        assert report["lhs"] == pytest.approx(1.0, abs=1e-12)
        assert report["rhs"] == pytest.approx(1.0, abs=1e-12)

    def test_joint_sharpness_implies_commuting_in_expectation(self):
        # Both variances vanish on a ZZ/XX-sharp state (Bell).
        bell = bell_state()
        zz, xx = tensor(Z, Z), tensor(X, X)
        assert bell.variance(zz) < 1e-12
        assert bell.variance(xx) < 1e-12
        assert abs(bell.expect(zz @ xx - xx @ zz)) < 1e-6
