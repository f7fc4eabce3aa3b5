import numpy as np
import pandas as pd
import pytest

from src.models.evaluation import EvalGrid
from src.util.metrics import (
    aggregate_swpe, decoding_jacobian, evaluate_swpe, phase_sweep, swpe_db, wrap_phase, wrapped_error,
)


class StubPredictor:
    """Deterministic estimator phi -> wrap(scale * phi + offset)"""

    def __init__(self, scale=1.0, offset=0.0):
        self.scale = scale
        self.offset = offset

    def predict(self, phases, shots=0, seed=0):
        phases = np.atleast_1d(np.asarray(phases, dtype=float))
        noise = np.random.default_rng([seed]).normal(scale=1e-3, size=phases.shape) if shots else 0.0
        return wrap_phase(self.scale * phases + self.offset + noise)


class TestWrappedError:
    def test_examples(self):
        assert wrapped_error(0.0, 0.5) == pytest.approx(0.5)
        assert wrapped_error(3.0, -3.0) == pytest.approx(2 * np.pi - 6.0)
        assert wrapped_error(-3.0, 3.0) == pytest.approx(6.0 - 2 * np.pi)

    def test_half_turn_maps_to_minus_pi(self):
        assert wrapped_error(0.0, np.pi) == -np.pi
        assert wrap_phase(np.pi) == -np.pi

    def test_range(self, rng):
        delta = wrapped_error(rng.uniform(-10, 10, 1000), rng.uniform(-10, 10, 1000))
        assert np.all(delta >= -np.pi) and np.all(delta < np.pi)

    def test_full_turn_invariance(self, rng):
        phi, est = rng.uniform(-np.pi, np.pi, 100), rng.uniform(-np.pi, np.pi, 100)
        for k in (-2, 1, 3):
            np.testing.assert_allclose(wrapped_error(phi, est + 2 * np.pi * k), wrapped_error(phi, est), atol=1e-12)


class TestSwpeDb:
    def test_examples(self):
        assert swpe_db(1.0) == 0.0
        assert swpe_db(0.1) == pytest.approx(-20.0)
        assert swpe_db(-0.1) == pytest.approx(-20.0)
        assert swpe_db(np.pi) == pytest.approx(10 * np.log10(np.pi ** 2))

    def test_zero_error_hits_floor(self):
        assert swpe_db(0.0) == -160.0
        assert swpe_db(1e-12) == -160.0

    def test_monotone_in_magnitude(self):
        db = swpe_db(np.linspace(1e-6, np.pi, 200))
        assert np.all(np.diff(db) > 0)


class TestPhaseSweep:
    def test_perfect_predictor(self):
        sweep = phase_sweep(StubPredictor(), EvalGrid(size=32))
        assert list(sweep.columns) == ["run", "phase", "phi_est", "delta_phi", "swpe_db", "mode"]
        assert np.max(np.abs(sweep["delta_phi"])) < 1e-12
        assert (sweep["mode"] == "exact").all()

    def test_constant_offset(self):
        sweep = phase_sweep(StubPredictor(offset=0.1), EvalGrid(size=32))
        np.testing.assert_allclose(sweep["delta_phi"], 0.1, atol=1e-12)
        np.testing.assert_allclose(sweep["swpe_db"], -20.0, atol=1e-9)

    def test_shots_mode_is_labelled(self):
        sweep = phase_sweep(StubPredictor(), EvalGrid(size=8, shots=100), run=3, seed=5)
        assert (sweep["mode"] == "shots").all() and (sweep["run"] == 3).all()


class TestAggregate:
    def test_single_run_statistics_equal_values(self):
        sweeps, table = evaluate_swpe([StubPredictor(offset=0.2)], EvalGrid(size=16))
        np.testing.assert_allclose(table["median"], sweeps["swpe_db"])
        np.testing.assert_allclose(table["mean"], sweeps["swpe_db"])
        assert (table["iqr"] == 0).all() and (table["runs"] == 1).all()

    def test_linear_quantiles(self):
        sweeps = pd.DataFrame({"mode": "exact", "phase": 0.0, "swpe_db": [0.0, 10.0, 20.0, 30.0, 40.0]})
        row = aggregate_swpe(sweeps).iloc[0]
        assert row["median"] == 20.0 and row["q25"] == 10.0 and row["q75"] == 30.0
        assert row["p5"] == pytest.approx(2.0) and row["p95"] == pytest.approx(38.0)
        assert row["iqr"] == 20.0

    def test_resampling_one_model(self):
        sweeps, table = evaluate_swpe([StubPredictor()], EvalGrid(size=8, shots=10), base_seed=3, runs=4)
        assert sorted(sweeps["run"].unique()) == [0, 1, 2, 3]
        assert (table["runs"] == 4).all()
        assert (table["iqr"] > 0).all()

    def test_one_model_per_run(self):
        models = [StubPredictor(offset=o) for o in (0.1, 0.2, 0.3)]
        _, table = evaluate_swpe(models, EvalGrid(size=8))
        np.testing.assert_allclose(table["median"], swpe_db(0.2), atol=1e-9)

    def test_errors(self):
        with pytest.raises(ValueError):
            evaluate_swpe([], EvalGrid(size=8))
        with pytest.raises(ValueError):
            evaluate_swpe([StubPredictor(), StubPredictor()], EvalGrid(size=8), runs=3)
        with pytest.raises(ValueError):
            evaluate_swpe([StubPredictor()], EvalGrid(size=8), runs=0)


class TestDecodingJacobian:
    def test_identity_predictor(self):
        stats = decoding_jacobian(StubPredictor(), EvalGrid(size=64))
        assert stats.mean == pytest.approx(1.0, abs=1e-8)
        assert stats.variance == pytest.approx(0.0, abs=1e-8)
        assert stats.values.shape == (64,)

    def test_doubling_predictor(self):
        stats = decoding_jacobian(StubPredictor(scale=2.0), EvalGrid(size=64))
        assert stats.mean == pytest.approx(2.0, abs=1e-8)

    def test_constant_predictor(self):
        stats = decoding_jacobian(StubPredictor(scale=0.0, offset=0.4), EvalGrid(size=32))
        assert stats.mean == 0.0 and stats.variance == 0.0

    def test_frame_columns(self):
        frame = decoding_jacobian(StubPredictor(), EvalGrid(size=16)).frame()
        assert list(frame.columns) == ["phase", "jacobian"]

    def test_rejects_coarse_grid(self):
        with pytest.raises(ValueError):
            decoding_jacobian(StubPredictor(), EvalGrid(size=8))
