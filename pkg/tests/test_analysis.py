import numpy as np
import pytest

from src.models.errors import ArtifactError
from src.models.evaluation import EvalGrid, FeatureMatrix
from src.models.network import DecoderParams
from src.service.estimators import AffineEstimator, NetworkEstimator
from src.util.analysis import (
    closure_ratio, distant_overlap, feature_heatmap, latent_matrix, load_snapshot, pca_2d, save_snapshot,
    snapshot,
)

GRID = EvalGrid(size=32)


def _latent(values, phases=None):
    values = np.asarray(values, dtype=float)
    if phases is None:
        phases = EvalGrid(size=values.shape[0]).phases
    return FeatureMatrix(kind="latent", phases=phases, values=values)


class TestFeatureHeatmap:
    def test_rows_are_distributions(self, interferometer4, random_circuit):
        heatmap = feature_heatmap(interferometer4, random_circuit, GRID)
        assert heatmap.values.shape == (32, 5)
        np.testing.assert_allclose(heatmap.values.sum(axis=1), 1.0, atol=1e-12)
        assert np.all(heatmap.values >= 0)

    def test_same_for_any_decoder(self, interferometer4, random_circuit, rng):
        models = [NetworkEstimator(interferometer4, random_circuit, DecoderParams.initialize([5, 8, 2], rng))
                  for _ in range(2)]
        first, second = (snapshot(1, m, GRID).heatmap.values for m in models)
        np.testing.assert_array_equal(first, second)

    def test_long_frame(self, interferometer4, random_circuit):
        frame = feature_heatmap(interferometer4, random_circuit, EvalGrid(size=4)).heatmap_frame(interferometer4.labels)
        assert list(frame.columns) == ["phase", "m", "probability"]
        assert len(frame) == 20
        np.testing.assert_array_equal(frame["m"][:5], interferometer4.labels)


class TestLatentMatrix:
    def test_width_and_determinism(self, interferometer4, random_circuit, tiny_decoder):
        model = NetworkEstimator(interferometer4, random_circuit, tiny_decoder)
        first, second = latent_matrix(model, GRID), latent_matrix(model, GRID)
        assert first.values.shape == (32, 8)
        np.testing.assert_array_equal(first.values, second.values)

    def test_affine_model_has_no_latent(self, interferometer4, random_circuit):
        with pytest.raises(ValueError):
            latent_matrix(AffineEstimator(interferometer4, random_circuit, 1.0, 0.0), GRID)


class TestPca:
    def test_points_on_a_line(self):
        t = np.linspace(-1, 1, 11)
        direction = np.array([3.0, -4.0, 0.0])
        projection = pca_2d(_latent(t[:, None] * direction + np.array([1.0, 2.0, 3.0])))
        np.testing.assert_allclose(projection.explained, [1.0, 0.0], atol=1e-12)
        np.testing.assert_allclose(projection.coords[:, 1], 0.0, atol=1e-12)
        # largest loading (-4) flipped positive, so pc1 runs against t
        np.testing.assert_allclose(projection.coords[:, 0], -5.0 * t, atol=1e-10)

    def test_circle_in_higher_dimension(self, rng):
        phases = GRID.phases
        basis, _ = np.linalg.qr(rng.normal(size=(6, 2)))
        values = np.cos(phases)[:, None] * basis[:, 0] + np.sin(phases)[:, None] * basis[:, 1]
        projection = pca_2d(_latent(values, phases))
        assert projection.explained.sum() > 0.999
        radii = np.linalg.norm(projection.coords, axis=1)
        np.testing.assert_allclose(radii, radii.mean(), rtol=1e-8)
        assert closure_ratio(projection) < 0.25

    def test_constant_column_does_not_change_projection(self, rng):
        values = rng.normal(size=(20, 4))
        padded = np.hstack([values, np.full((20, 1), 7.0)])
        np.testing.assert_allclose(pca_2d(_latent(padded)).coords, pca_2d(_latent(values)).coords, atol=1e-10)

    def test_row_permutation_permutes_coords(self, rng):
        values = rng.normal(size=(15, 5))
        order = rng.permutation(15)
        base = pca_2d(_latent(values))
        permuted = pca_2d(_latent(values[order]))
        np.testing.assert_allclose(permuted.coords, base.coords[order], atol=1e-10)

    def test_explained_fractions_ordered(self, rng):
        projection = pca_2d(_latent(rng.normal(size=(30, 6))))
        assert 1.0 >= projection.explained[0] >= projection.explained[1] > 0.0

    def test_constant_matrix_projects_to_origin(self):
        projection = pca_2d(_latent(np.full((5, 3), 0.25)))
        np.testing.assert_array_equal(projection.coords, np.zeros((5, 2)))
        np.testing.assert_array_equal(projection.explained, [0.0, 0.0])

    def test_needs_three_rows(self):
        with pytest.raises(ValueError):
            pca_2d(_latent(np.eye(2)))


class TestGeometry:
    def test_distant_overlap_detects_collision(self):
        phases = EvalGrid(size=4).phases  # -pi, -pi/2, 0, pi/2
        values = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0], [0.5, 0.5]])
        assert distant_overlap(_latent(values, phases)) == 0.0

    def test_distant_overlap_of_separated_rows(self):
        phases = EvalGrid(size=4).phases
        assert distant_overlap(_latent(np.eye(4), phases)) == pytest.approx(2.0)

    def test_distant_overlap_needs_distant_pairs(self):
        phases = np.array([0.0, 0.1, 0.2])
        with pytest.raises(ValueError):
            distant_overlap(_latent(np.eye(3), phases))

    def test_open_line_has_unit_closure_ratio(self):
        t = np.linspace(0, 1, 9)
        projection = pca_2d(_latent(np.stack([t, 2 * t], axis=1)))
        assert closure_ratio(projection) == pytest.approx(1.0)


class TestSnapshot:
    def test_network_snapshot(self, interferometer4, random_circuit, tiny_decoder):
        model = NetworkEstimator(interferometer4, random_circuit, tiny_decoder)
        snap = snapshot(40, model, EvalGrid(size=16, shots=100))
        assert snap.epoch == 40
        assert snap.heatmap.values.shape == (16, 5)
        assert snap.latent_projection.coords.shape == (16, 2)
        assert snap.qfi == pytest.approx(model.qfi())

    def test_affine_snapshot_projects_quantum_features(self, interferometer4, random_circuit):
        model = AffineEstimator(interferometer4, random_circuit, 1.0, 0.0)
        snap = snapshot(1, model, GRID)
        np.testing.assert_allclose(snap.latent_projection.coords, pca_2d(snap.heatmap).coords)

    def test_save_and_load(self, interferometer4, random_circuit, tiny_decoder, tmp_path):
        snap = snapshot(7, NetworkEstimator(interferometer4, random_circuit, tiny_decoder), GRID)
        path = save_snapshot(snap, tmp_path / "snapshots", interferometer4.labels)
        assert path.name == "epoch_00007.json"
        assert (tmp_path / "snapshots" / "epoch_00007_heatmap.csv").exists()
        assert (tmp_path / "snapshots" / "epoch_00007_projection.csv").exists()
        restored = load_snapshot(path)
        np.testing.assert_array_equal(restored.heatmap.values, snap.heatmap.values)
        np.testing.assert_array_equal(restored.latent_projection.coords, snap.latent_projection.coords)
        assert restored.swpe_median == snap.swpe_median

    def test_load_missing_snapshot(self, tmp_path):
        with pytest.raises(ArtifactError):
            load_snapshot(tmp_path / "epoch_00001.json")
