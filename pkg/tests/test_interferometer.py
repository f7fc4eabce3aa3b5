import numpy as np
import pytest
from pydantic import ValidationError

from src.models.quantum import CircuitParams, ProbabilityVector
from src.service.interferometer import Interferometer, sample


def _unitarity_error(matrix):
    return np.linalg.norm(matrix.conj().T @ matrix - np.eye(matrix.shape[0]))


class TestCircuitParams:
    def test_shapes_and_flat_order(self):
        params = CircuitParams(encoding=np.arange(10.0).reshape(2, 5), decoding=np.arange(10.0, 15.0))
        assert params.layers_enc == 2 and params.layers_dec == 1
        assert params.n_params == 15
        np.testing.assert_array_equal(params.flat(), np.arange(15.0))

    def test_rejects_wrong_layer_width(self):
        with pytest.raises(ValidationError):
            CircuitParams(encoding=np.zeros((1, 4)), decoding=np.zeros((1, 5)))

    def test_rejects_non_finite_angles(self):
        with pytest.raises(ValidationError):
            CircuitParams(encoding=[[0, 0, np.nan, 0, 0]], decoding=np.zeros((1, 5)))

    def test_initialize_is_near_identity_and_seeded(self):
        a = CircuitParams.initialize(np.random.default_rng(3))
        b = CircuitParams.initialize(np.random.default_rng(3))
        assert np.all(np.abs(a.flat()) <= 0.1)
        np.testing.assert_array_equal(a.flat(), b.flat())


class TestInitialState:
    def test_two_particles(self):
        np.testing.assert_array_equal(Interferometer.for_particles(2).initial_state(), [0, 0, 1])

    @pytest.mark.parametrize("n", [1, 3, 8])
    def test_lowest_weight(self, n):
        device = Interferometer.for_particles(n)
        state = device.initial_state()
        assert np.linalg.norm(state) == pytest.approx(1.0)
        jz = device.algebra.operators["z"].matrix
        assert np.real(state.conj() @ jz @ state) == pytest.approx(-n / 2)


class TestFullUnitary:
    def test_zero_params_is_two_pulses(self):
        device = Interferometer.for_particles(3)
        algebra = device.algebra
        expected = algebra.rotation_matrix("x", np.pi / 2) @ algebra.rotation_matrix("y", np.pi / 2)
        np.testing.assert_allclose(device.full_unitary(0.0, CircuitParams.zeros()), expected, atol=1e-12)

    def test_unitary_for_random_params(self, rng):
        device = Interferometer.for_particles(6)
        params = CircuitParams.initialize(rng, scale=np.pi)
        assert _unitarity_error(device.full_unitary(rng.uniform(-np.pi, np.pi), params)) < 1e-10

    def test_amplitudes_match_full_unitary(self, interferometer4, random_circuit):
        phi = 0.37
        direct = interferometer4.full_unitary(phi, random_circuit) @ interferometer4.initial_state()
        np.testing.assert_allclose(interferometer4.amplitudes(phi, random_circuit)[0], direct, atol=1e-12)


class TestProbabilities:
    def test_normalized_for_random_inputs(self, rng):
        device = Interferometer.for_particles(8)
        for _ in range(100):
            params = CircuitParams.initialize(rng, scale=np.pi)
            p = device.probabilities(rng.uniform(-np.pi, np.pi), params)
            assert p.kind == "exact" and p.shots == 0
            assert abs(p.values.sum() - 1.0) < 1e-10

    @pytest.mark.parametrize("n", [3, 8])
    def test_periodic_in_phase(self, n, rng):
        device = Interferometer.for_particles(n)
        for _ in range(100):
            params = CircuitParams.initialize(rng, scale=np.pi)
            phi = rng.uniform(-np.pi, np.pi)
            table = device.probability_table([phi, phi + 2 * np.pi], params)
            assert np.max(np.abs(table[0] - table[1])) < 1e-10

    def test_single_particle_ramsey_fringe(self):
        device = Interferometer.for_particles(1)
        phases = np.linspace(-np.pi, np.pi, 17)
        table = device.probability_table(phases, CircuitParams.zeros())
        # hand-multiplied 2x2 product, rows ordered m = +1/2, -1/2
        np.testing.assert_allclose(table[:, 0], (1 - np.sin(phases)) / 2, atol=1e-12)
        np.testing.assert_allclose(table[:, 1], np.sin(phases / 2 + np.pi / 4) ** 2, atol=1e-12)

    def test_table_rows_match_single_phase_calls(self, interferometer4, random_circuit):
        phases = np.array([-2.0, 0.1, 1.7])
        table = interferometer4.probability_table(phases, random_circuit)
        for row, phi in zip(table, phases):
            np.testing.assert_allclose(row, interferometer4.probabilities(phi, random_circuit).values, atol=1e-14)

    def test_exact_equals_mean_of_draws(self, interferometer4, random_circuit):
        shots, draws = 10 ** 6, 100
        exact = interferometer4.probabilities(0.8, random_circuit)
        mean = np.mean([sample(exact, shots, seed).values for seed in range(draws)], axis=0)
        stderr = np.sqrt(exact.values * (1 - exact.values) / (shots * draws))
        assert np.all(np.abs(mean - exact.values) <= 5 * stderr + 1e-12)


class TestSample:
    def test_degenerate_distribution(self):
        exact = ProbabilityVector(values=[1.0, 0.0, 0.0], kind="exact")
        drawn = sample(exact, 1234, 0)
        np.testing.assert_array_equal(drawn.values, [1.0, 0.0, 0.0])
        assert drawn.kind == "empirical" and drawn.shots == 1234

    def test_uniform_two_outcomes(self):
        drawn = sample(ProbabilityVector(values=[0.5, 0.5], kind="exact"), 10 ** 6, 7)
        np.testing.assert_allclose(drawn.values, [0.5, 0.5], atol=0.002)

    def test_same_seed_same_result(self, interferometer4, random_circuit):
        exact = interferometer4.probabilities(-1.1, random_circuit)
        np.testing.assert_array_equal(sample(exact, 5000, [4, 2]).values, sample(exact, 5000, [4, 2]).values)

    def test_frequencies_are_counts_over_shots(self):
        drawn = sample(ProbabilityVector(values=[0.2, 0.3, 0.5], kind="exact"), 1000, 11)
        np.testing.assert_allclose(drawn.values * 1000, np.round(drawn.values * 1000), atol=1e-9)

    def test_rejects_non_normalized_input(self):
        bad = ProbabilityVector.model_construct(values=np.array([0.5, 0.6]), kind="exact", shots=0)
        with pytest.raises(ValueError):
            sample(bad, 100, 0)

    def test_rejects_empirical_input_and_zero_shots(self):
        exact = ProbabilityVector(values=[0.5, 0.5], kind="exact")
        with pytest.raises(ValueError):
            sample(exact, 0, 0)
        with pytest.raises(ValueError):
            sample(sample(exact, 10, 0), 10, 0)


class TestQFI:
    @pytest.mark.parametrize("n", [1, 2, 4, 8])
    def test_coherent_probe_reaches_standard_limit(self, n):
        assert Interferometer.for_particles(n).qfi(CircuitParams.zeros()) == pytest.approx(n, abs=1e-8)

    @pytest.mark.parametrize("n", [2, 5, 8])
    def test_ghz_state_reaches_heisenberg_limit(self, n):
        device = Interferometer.for_particles(n)
        ghz = np.zeros(n + 1, dtype=complex)
        ghz[0] = ghz[-1] = 1 / np.sqrt(2)
        assert device.qfi_of_state(ghz) == pytest.approx(n ** 2, abs=1e-8)

    def test_independent_of_decoding_params(self, interferometer4, rng):
        encoding = rng.uniform(-1, 1, size=(1, 5))
        reference = interferometer4.qfi(CircuitParams(encoding=encoding, decoding=np.zeros((1, 5))))
        for _ in range(10):
            params = CircuitParams(encoding=encoding, decoding=rng.uniform(-3, 3, size=(1, 5)))
            assert abs(interferometer4.qfi(params) - reference) < 1e-12

    def test_bounded_by_spectral_range(self, rng):
        device = Interferometer.for_particles(6)
        for _ in range(20):
            qfi = device.qfi(CircuitParams.initialize(rng, scale=np.pi))
            assert -1e-12 <= qfi <= 36 + 1e-9


class TestProbabilityJacobian:
    def test_shape(self, interferometer4, random_circuit):
        jac = interferometer4.probability_jacobian(0.2, random_circuit)
        assert jac.shape == (random_circuit.n_params + 1, 5)
        assert interferometer4.probability_jacobian([0.1, 0.2], random_circuit).shape == (2, 16, 5)

    def test_columns_sum_to_zero(self, interferometer4, random_circuit):
        jac = interferometer4.probability_jacobian(np.linspace(-3, 3, 7), random_circuit)
        assert np.max(np.abs(jac.sum(axis=2))) < 1e-10

    @pytest.mark.parametrize("n", [2, 4, 6, 8])
    def test_matches_finite_differences(self, n, rng):
        device = Interferometer.for_particles(n)
        h = 1e-6
        for _ in range(3):
            params = CircuitParams.initialize(rng, layers_enc=1, layers_dec=2, scale=np.pi)
            phi = rng.uniform(-np.pi, np.pi)
            analytic = device.probability_jacobian(phi, params)

            flat = params.flat()
            n_enc = params.encoding.size
            fd = np.zeros_like(analytic)
            for k in range(flat.size):
                shifted = []
                for sign in (1, -1):
                    moved = flat.copy()
                    moved[k] += sign * h
                    candidate = CircuitParams(encoding=moved[:n_enc].reshape(params.encoding.shape),
                                              decoding=moved[n_enc:].reshape(params.decoding.shape))
                    shifted.append(device.probabilities(phi, candidate).values)
                fd[k] = (shifted[0] - shifted[1]) / (2 * h)
            fd[-1] = (device.probabilities(phi + h, params).values
                      - device.probabilities(phi - h, params).values) / (2 * h)
            assert np.linalg.norm(analytic - fd) / np.linalg.norm(analytic) < 1e-5

    def test_phase_derivative_vanishes_on_jz_eigenstate(self):
        device = Interferometer.for_particles(4, prep_angle=0.0)
        params = CircuitParams(encoding=np.zeros((1, 5)), decoding=np.array([[0.3, -0.2, 0.5, 0.1, 0.7]]))
        jac = device.probability_jacobian(np.linspace(-3, 3, 5), params)
        assert np.max(np.abs(jac[:, -1, :])) < 1e-12

    def test_table_and_jacobian_agree_with_probability_table(self, interferometer4, random_circuit):
        phases = np.linspace(-np.pi, np.pi, 9, endpoint=False)
        table, _ = interferometer4.table_and_jacobian(phases, random_circuit)
        np.testing.assert_allclose(table, interferometer4.probability_table(phases, random_circuit), atol=1e-14)
