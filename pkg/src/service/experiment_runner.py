"""
Seeded multi-run orchestration: train, evaluate and persist one artifact set per experiment
"""
import logging
import traceback
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional

import numpy as np
import pandas as pd

from src.constants import defaults
from src.models.errors import ConfigError
from src.models.evaluation import EvalGrid, FeatureMatrix
from src.models.experiment import ExperimentConfig, ModelKind, RunArtifact
from src.models.network import DecoderParams
from src.models.quantum import CircuitParams
from src.models.training import TrainResult
from src.service.estimators import AffineEstimator, NetworkEstimator, PhaseEstimator
from src.service.interferometer import Interferometer
from src.service.trainer import train_decoder_fixed, train_joint, train_vqi_baseline
from src.util.analysis import feature_heatmap, pca_2d, save_snapshot, snapshot
from src.util.artifacts import (
    load_run, run_dir_name, write_csv, write_json, write_status,
)
from src.util.metrics import aggregate_swpe, decoding_jacobian, phase_sweep

logger = logging.getLogger(__name__)

RUN_COLUMNS = ["model", "model_kind", "activation", "run", "seed", "status", "qfi", "final_loss",
               "j_mean", "j_var", "swpe_median_exact", "swpe_median_shots"]


def check_reference(config: ExperimentConfig) -> Optional[Path]:
    """vqcnni_fixed needs the directory of a finished vqi experiment"""
    if config.model_kind != ModelKind.VQCNNI_FIXED:
        return None
    if not config.reference_dir:
        raise ConfigError(f"{config.name}: vqcnni_fixed needs reference_dir pointing at a vqi experiment")
    reference = Path(config.reference_dir)
    if not (reference / "config.json").exists():
        raise ConfigError(f"{config.name}: reference experiment {reference} does not exist")
    return reference


def _reference_circuit(reference: Path, run_index: int) -> CircuitParams:
    artifact = load_run(reference / run_dir_name(run_index))
    if artifact.model_kind != ModelKind.VQI or artifact.status != "ok" or artifact.circuit is None:
        raise ConfigError(f"reference run {run_index} in {reference} is not a finished vqi run")
    return artifact.circuit


def build_estimator(interferometer: Interferometer, result: TrainResult) -> PhaseEstimator:
    if result.decoder is not None:
        return NetworkEstimator(interferometer, result.circuit, result.decoder)
    a, b = result.estimator
    return AffineEstimator(interferometer, result.circuit, a, b)


def _train(config: ExperimentConfig, interferometer: Interferometer, run_index: int, seed: int,
           run_dir: Path) -> TrainResult:
    rng = np.random.default_rng(seed)
    circuit = CircuitParams.initialize(rng, config.layers_enc, config.layers_dec, defaults.QUANTUM_INIT_SCALE)
    decoder = DecoderParams.initialize(config.layer_sizes, rng, config.activation)
    grid = EvalGrid(size=config.eval_grid_size, shots=0)

    on_eval = None
    if config.snapshots:
        snapshot_dir = run_dir / "snapshots"

        def on_eval(epoch: int, model: PhaseEstimator) -> str:
            path = save_snapshot(snapshot(epoch, model, grid), snapshot_dir, interferometer.labels)
            return str(path.relative_to(run_dir))

    train = config.train.model_copy(update={"seed": seed})
    if config.model_kind == ModelKind.VQCNNI:
        return train_joint(train, interferometer, circuit, decoder, grid, on_eval)
    if config.model_kind == ModelKind.VQI:
        return train_vqi_baseline(train, interferometer, circuit, config.prior, grid, on_eval)
    frozen = _reference_circuit(Path(config.reference_dir), run_index)
    return train_decoder_fixed(train, interferometer, frozen, decoder, grid, on_eval)


def _write_features(model: PhaseEstimator, grid: EvalGrid, run_dir: Path) -> None:
    labels = model.interferometer.labels
    heatmap = feature_heatmap(model.interferometer, model.circuit, grid)
    write_csv(heatmap.heatmap_frame(labels), run_dir / "heatmap.csv")
    write_csv(pca_2d(heatmap).frame(), run_dir / "quantum_projection.csv")
    latent = model.latent(grid.phases)
    if latent is not None:
        matrix = FeatureMatrix(kind="latent", phases=grid.phases, values=latent)
        write_csv(pca_2d(matrix).frame(), run_dir / "latent_projection.csv")


def execute_run(config: ExperimentConfig, run_index: int) -> RunArtifact:
    """Train and evaluate one seeded run; failures are recorded, not raised"""
    seed = config.run_seed(run_index)
    run_dir = config.experiment_dir / run_dir_name(run_index)
    run_dir.mkdir(parents=True, exist_ok=True)
    write_json(run_dir / "config.json", config)
    artifact = RunArtifact(
        experiment=config.name, model_kind=config.model_kind, activation=config.decoder_activation,
        run_index=run_index, seed=seed,
    )
    try:
        interferometer = Interferometer.for_particles(config.n_particles)
        result = _train(config, interferometer, run_index, seed, run_dir)
        model = build_estimator(interferometer, result)

        exact = EvalGrid(size=config.eval_grid_size, shots=0)
        sweeps = [phase_sweep(model, exact, run=run_index, seed=seed)]
        if config.shots > 0:
            sweeps.append(phase_sweep(model, EvalGrid(size=config.eval_grid_size, shots=config.shots),
                                      run=run_index, seed=seed))
        swpe = pd.concat(sweeps, ignore_index=True)
        jacobian = decoding_jacobian(model, exact)

        write_csv(result.trace.loss_frame(), run_dir / "trace.csv")
        write_csv(result.trace.trajectory_frame(), run_dir / "trajectory.csv")
        write_csv(swpe, run_dir / "swpe.csv")
        write_csv(jacobian.frame(), run_dir / "jacobian.csv")
        _write_features(model, exact, run_dir)

        medians = swpe.groupby("mode")["swpe_db"].median()
        artifact = artifact.model_copy(update={
            "circuit": result.circuit,
            "decoder": result.decoder,
            "estimator": result.estimator,
            "trace": result.trace,
            "qfi": model.qfi(),
            "final_loss": result.trace.best_loss,
            "j_mean": jacobian.mean,
            "j_var": jacobian.variance,
            "swpe_median_exact": float(medians["exact"]),
            "swpe_median_shots": float(medians["shots"]) if "shots" in medians else None,
        })
        write_json(run_dir / "run.json", artifact)
        write_status(run_dir)
        logger.info("%s run %d ok: median SWPE %.2f dB, QFI %.3f",
                    config.name, run_index, artifact.swpe_median_exact, artifact.qfi)
    except Exception as e:
        logger.error("%s run %d failed: %s\n%s", config.name, run_index, e, traceback.format_exc())
        artifact = artifact.model_copy(update={"status": "failed", "error": f"{type(e).__name__}: {e}"})
        write_json(run_dir / "run.json", artifact)
        write_status(run_dir, artifact.error)
    return artifact


def _summarize(config: ExperimentConfig, artifacts: List[RunArtifact]) -> None:
    summary_dir = config.experiment_dir / "summary"
    rows = [{
        "model": config.name, "model_kind": a.model_kind.value, "activation": a.activation.value if a.activation else "",
        "run": a.run_index, "seed": a.seed, "status": a.status, "qfi": a.qfi, "final_loss": a.final_loss,
        "j_mean": a.j_mean, "j_var": a.j_var, "swpe_median_exact": a.swpe_median_exact,
        "swpe_median_shots": a.swpe_median_shots,
    } for a in artifacts]
    runs = pd.DataFrame(rows, columns=RUN_COLUMNS)
    write_csv(runs, summary_dir / "runs.csv")
    write_csv(runs.loc[runs["status"] == "ok", ["model", "run", "j_mean", "j_var"]], summary_dir / "jacobian.csv")

    sweeps = []
    for a in artifacts:
        path = config.experiment_dir / run_dir_name(a.run_index) / "swpe.csv"
        if a.status == "ok" and path.exists():
            sweeps.append(pd.read_csv(path))
    if sweeps:
        long_table = pd.concat(sweeps, ignore_index=True)
        write_csv(aggregate_swpe(long_table), summary_dir / "swpe_aggregate.csv")


def run_experiment(config: ExperimentConfig, workers: int = 1) -> List[RunArtifact]:
    """Run config.runs seeded runs (seed = base_seed + i) and write their artifacts.

    Results are gathered in run-index order whatever the worker count.
    """
    check_reference(config)
    config.experiment_dir.mkdir(parents=True, exist_ok=True)
    write_json(config.experiment_dir / "config.json", config)
    indices = list(range(config.runs))
    logger.info("running %s (%s, N=%d): %d runs on %d worker(s)",
                config.name, config.model_kind.value, config.n_particles, config.runs, workers)
    if workers > 1 and config.runs > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            artifacts = list(pool.map(execute_run, [config] * len(indices), indices))
    else:
        artifacts = [execute_run(config, i) for i in indices]
    _summarize(config, artifacts)
    failed = sum(a.status == "failed" for a in artifacts)
    if failed:
        logger.warning("%s: %d of %d runs failed", config.name, failed, len(artifacts))
    return artifacts
