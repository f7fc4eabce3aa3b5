"""
Representation geometry: quantum-feature heatmaps, decoder latents, 2D PCA and
training snapshots
"""
import logging
from pathlib import Path
from typing import Union

import numpy as np

from src.models.errors import ArtifactError
from src.models.evaluation import EvalGrid, FeatureMatrix, Projection2D, Snapshot
from src.models.quantum import CircuitParams
from src.service.estimators import PhaseEstimator
from src.service.interferometer import Interferometer
from src.util.metrics import swpe_median, wrapped_error

logger = logging.getLogger(__name__)

# eigenvalues below this fraction of the total variance count as zero
_RANK_TOLERANCE = 1e-12


def feature_heatmap(interferometer: Interferometer, params: CircuitParams, grid: EvalGrid) -> FeatureMatrix:
    """Exact p(m|phi) for every grid phase, one row per phase"""
    phases = grid.phases
    return FeatureMatrix(kind="quantum", phases=phases,
                         values=interferometer.probability_table(phases, params))


def latent_matrix(model: PhaseEstimator, grid: EvalGrid) -> FeatureMatrix:
    """Penultimate-layer activations of the decoder on exact probabilities"""
    latent = model.latent(grid.phases)
    if latent is None:
        raise ValueError(f"{type(model).__name__} has no latent layer")
    return FeatureMatrix(kind="latent", phases=grid.phases, values=latent)


def pca_2d(matrix: FeatureMatrix) -> Projection2D:
    """Projection onto the two leading principal axes.

    Each axis is signed so that its largest-magnitude loading is positive.
    Rank-deficient inputs give an all-zero second component.
    """
    values = matrix.values
    if values.shape[0] < 3:
        raise ValueError("PCA needs at least 3 rows")
    centered = values - values.mean(axis=0)
    covariance = centered.T @ centered / (values.shape[0] - 1)
    eigenvalues, eigenvectors = np.linalg.eigh(covariance)
    order = np.argsort(eigenvalues)[::-1]
    eigenvalues = np.clip(eigenvalues[order], 0.0, None)
    eigenvectors = eigenvectors[:, order]

    total = eigenvalues.sum()
    if total <= 0:
        explained = np.zeros(2)
        coords = np.zeros((values.shape[0], 2))
        return Projection2D(phases=matrix.phases, coords=coords, explained=explained)

    axes = np.zeros((values.shape[1], 2))
    explained = np.zeros(2)
    for k in range(min(2, values.shape[1])):
        if eigenvalues[k] <= _RANK_TOLERANCE * total:
            continue
        axis = eigenvectors[:, k]
        if axis[np.argmax(np.abs(axis))] < 0:
            axis = -axis
        axes[:, k] = axis
        explained[k] = eigenvalues[k] / total
    return Projection2D(phases=matrix.phases, coords=centered @ axes, explained=explained)


def distant_overlap(matrix: FeatureMatrix, min_gap: float = np.pi / 2) -> float:
    """Smallest L1 distance between rows whose phases differ by more than `min_gap` (wrapped)"""
    gaps = np.abs(wrapped_error(matrix.phases[:, None], matrix.phases[None, :]))
    distant = gaps > min_gap
    if not np.any(distant):
        raise ValueError(f"no phase pairs further apart than {min_gap}")
    distances = np.abs(matrix.values[:, None, :] - matrix.values[None, :, :]).sum(axis=2)
    return float(distances[distant].min())


def closure_ratio(projection: Projection2D) -> float:
    """Distance from the first to the last projected point over the curve diameter"""
    coords = projection.coords
    diameter = np.max(np.linalg.norm(coords[:, None, :] - coords[None, :, :], axis=2))
    if diameter == 0:
        return 0.0
    return float(np.linalg.norm(coords[-1] - coords[0]) / diameter)


def snapshot(epoch: int, model: PhaseEstimator, grid: EvalGrid) -> Snapshot:
    """Heatmap, latent projection, QFI and exact-mode median SWPE at one epoch"""
    exact = EvalGrid(size=grid.size, shots=0)
    heatmap = feature_heatmap(model.interferometer, model.circuit, exact)
    latent = model.latent(exact.phases)
    # the affine baseline has no decoder, so its manifold is the quantum feature one
    features = heatmap if latent is None else FeatureMatrix(kind="latent", phases=exact.phases, values=latent)
    return Snapshot(
        epoch=epoch,
        qfi=model.qfi(),
        swpe_median=swpe_median(model, exact),
        heatmap=heatmap,
        latent_projection=pca_2d(features),
    )


def save_snapshot(snap: Snapshot, directory: Union[str, Path], labels: np.ndarray) -> Path:
    """Write epoch_<n>.json plus heatmap and projection CSVs; returns the JSON path"""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    stem = f"epoch_{snap.epoch:05d}"
    path = directory / f"{stem}.json"
    try:
        path.write_text(snap.model_dump_json())
        snap.heatmap.heatmap_frame(labels).to_csv(directory / f"{stem}_heatmap.csv", index=False)
        snap.latent_projection.frame().to_csv(directory / f"{stem}_projection.csv", index=False)
    except OSError as e:
        raise ArtifactError(f"could not write snapshot {path}: {e}") from e
    logger.debug("wrote snapshot %s", path)
    return path


def load_snapshot(path: Union[str, Path]) -> Snapshot:
    try:
        return Snapshot.model_validate_json(Path(path).read_text())
    except (OSError, ValueError) as e:
        raise ArtifactError(f"could not read snapshot {path}: {e}") from e
