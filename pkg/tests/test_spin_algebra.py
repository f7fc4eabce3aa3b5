import numpy as np
import pytest
from pydantic import ValidationError

from src.models.quantum import DickeSpace
from src.service.spin_algebra import SpinAlgebra, build_operators, gate_derivative


def _unitarity_error(matrix):
    return np.linalg.norm(matrix.conj().T @ matrix - np.eye(matrix.shape[0]))


class TestDickeSpace:
    def test_dimension_and_labels(self):
        space = DickeSpace(n_particles=3)
        assert space.dim == 4
        np.testing.assert_array_equal(space.basis_labels, [1.5, 0.5, -0.5, -1.5])

    def test_labels_symmetric_with_unit_spacing(self):
        labels = DickeSpace(n_particles=6).basis_labels
        np.testing.assert_array_equal(np.diff(labels), -np.ones(6))
        np.testing.assert_array_equal(np.sort(labels), -labels)

    @pytest.mark.parametrize("n", [0, -2, 2.5])
    def test_rejects_invalid_particle_number(self, n):
        with pytest.raises(ValidationError):
            DickeSpace(n_particles=n)


class TestBuildOperators:
    def test_jz_for_two_particles(self):
        ops = build_operators(DickeSpace(n_particles=2))
        np.testing.assert_array_equal(ops["z"].matrix, np.diag([1.0, 0.0, -1.0]))

    def test_jx_for_one_particle_is_half_pauli(self):
        ops = build_operators(DickeSpace(n_particles=1))
        np.testing.assert_allclose(ops["x"].matrix, [[0, 0.5], [0.5, 0]], atol=1e-15)

    @pytest.mark.parametrize("n", [1, 2, 4, 8])
    def test_commutation_relation(self, n):
        ops = build_operators(DickeSpace(n_particles=n))
        jx, jy, jz = (ops[a].matrix for a in "xyz")
        assert np.linalg.norm(jx @ jy - jy @ jx - 1j * jz) < 1e-10

    @pytest.mark.parametrize("n", [2, 5, 8])
    def test_every_axis_has_the_dicke_spectrum(self, n):
        ops = build_operators(DickeSpace(n_particles=n))
        expected = np.sort(DickeSpace(n_particles=n).basis_labels)
        for axis in "xyz":
            np.testing.assert_allclose(np.linalg.eigvalsh(ops[axis].matrix), expected, atol=1e-9)


class TestRotation:
    def test_zero_angle_is_identity(self):
        algebra = SpinAlgebra(4)
        np.testing.assert_allclose(algebra.rotation("z", 0.0).matrix, np.eye(5), atol=1e-12)

    def test_z_rotation_is_diagonal_phase(self):
        algebra = SpinAlgebra(4)
        phi = 0.7
        expected = np.diag(np.exp(-1j * algebra.labels * phi))
        np.testing.assert_allclose(algebra.rotation("z", phi).matrix, expected, atol=1e-12)

    def test_half_pi_y_pulse_on_lowest_state(self):
        algebra = SpinAlgebra(1)
        state = algebra.rotation("y", np.pi / 2).matrix @ np.array([0.0, 1.0])
        np.testing.assert_allclose(np.abs(state), [np.sin(np.pi / 4), np.cos(np.pi / 4)], atol=1e-12)

    def test_composition(self):
        algebra = SpinAlgebra(6)
        a, b = 0.4, -1.3
        for axis in "xyz":
            product = algebra.rotation_matrix(axis, a) @ algebra.rotation_matrix(axis, b)
            np.testing.assert_allclose(product, algebra.rotation_matrix(axis, a + b), atol=1e-10)

    @pytest.mark.parametrize("n", [1, 2, 4, 8])
    def test_unitary(self, n, rng):
        algebra = SpinAlgebra(n)
        for axis in "xyz":
            assert _unitarity_error(algebra.rotation_matrix(axis, rng.uniform(-5, 5))) < 1e-10

    def test_period_of_integer_spectrum(self):
        # even N has an integer spectrum, so exp(-i 2 pi J) = I
        algebra = SpinAlgebra(4)
        np.testing.assert_allclose(algebra.rotation_matrix("x", 0.3),
                                   algebra.rotation_matrix("x", 0.3 + 2 * np.pi), atol=1e-10)


class TestTwisting:
    def test_zero_angle_is_identity(self):
        np.testing.assert_allclose(SpinAlgebra(3).twisting("z", 0.0).matrix, np.eye(4), atol=1e-12)

    def test_z_twisting_is_diagonal(self):
        algebra = SpinAlgebra(5)
        chi = 0.25
        expected = np.diag(np.exp(-1j * algebra.labels ** 2 * chi))
        np.testing.assert_allclose(algebra.twisting("z", chi).matrix, expected, atol=1e-12)

    def test_x_twisting_is_unitary(self, rng):
        algebra = SpinAlgebra(6)
        for _ in range(5):
            assert _unitarity_error(algebra.twisting_matrix("x", rng.uniform(-3, 3))) < 1e-10

    def test_gate_dispatch(self):
        algebra = SpinAlgebra(2)
        gate = algebra.gate("twisting", "y", 0.1)
        assert gate.kind == "twisting" and gate.axis == "y"
        with pytest.raises(ValueError):
            algebra.gate("squeeze", "y", 0.1)


class TestGateDerivative:
    def test_at_zero_angle(self):
        algebra = SpinAlgebra(4)
        np.testing.assert_allclose(gate_derivative(algebra.rotation("z", 0.0)),
                                   -1j * algebra.operators["z"].matrix, atol=1e-12)

    def test_twisting_matches_finite_difference(self):
        algebra = SpinAlgebra(4)
        h = 1e-6
        fd = (algebra.twisting_matrix("x", 0.3 + h) - algebra.twisting_matrix("x", 0.3 - h)) / (2 * h)
        assert np.max(np.abs(gate_derivative(algebra.twisting("x", 0.3)) - fd)) < 1e-7

    def test_random_gates_match_finite_difference(self, rng):
        h = 1e-6
        for _ in range(20):
            algebra = SpinAlgebra(int(rng.integers(1, 9)))
            kind = str(rng.choice(["rotation", "twisting"]))
            axis = str(rng.choice(["x", "y", "z"]))
            angle = rng.uniform(-np.pi, np.pi)
            fd = (algebra.gate(kind, axis, angle + h).matrix - algebra.gate(kind, axis, angle - h).matrix) / (2 * h)
            analytic = gate_derivative(algebra.gate(kind, axis, angle))
            assert np.linalg.norm(analytic - fd) / np.linalg.norm(analytic) < 1e-6
