"""
Phase-error metrics: wrapped error, SWPE in dB, decoding Jacobian and multi-run aggregates
"""
from typing import Optional, Protocol, Sequence, Tuple

import numpy as np
import pandas as pd

from src.constants import defaults
from src.models.evaluation import EvalGrid, JacobianStats

SWPE_COLUMNS = ["run", "phase", "phi_est", "delta_phi", "swpe_db", "mode"]


class Predictor(Protocol):
    def predict(self, phases, shots: int = 0, seed: int = 0) -> np.ndarray: ...


def wrap_phase(phase):
    """Map any angle into [-pi, pi)"""
    wrapped = np.mod(np.asarray(phase, dtype=float) + np.pi, 2 * np.pi) - np.pi
    wrapped = np.where(wrapped >= np.pi, wrapped - 2 * np.pi, wrapped)
    return float(wrapped) if np.ndim(wrapped) == 0 else wrapped


def wrapped_error(phi, phi_est):
    """Arg(exp(i(phi_est - phi))) in [-pi, pi); +pi maps to -pi"""
    return wrap_phase(np.asarray(phi_est, dtype=float) - np.asarray(phi, dtype=float))


def swpe_db(delta_phi, floor: float = defaults.SWPE_FLOOR_DB):
    """10 log10(delta_phi^2), never below `floor`"""
    squared = np.asarray(delta_phi, dtype=float) ** 2
    with np.errstate(divide="ignore"):
        db = 10 * np.log10(squared)
    db = np.where(squared > 0, np.maximum(db, floor), floor)
    return float(db) if np.ndim(db) == 0 else db


def phase_sweep(model: Predictor, grid: EvalGrid, run: int = 0, seed: int = 0) -> pd.DataFrame:
    """Predicted versus true phase over a grid, one row per phase"""
    phases = grid.phases
    estimates = model.predict(phases, shots=grid.shots, seed=seed)
    delta = wrapped_error(phases, estimates)
    return pd.DataFrame({
        "run": run,
        "phase": phases,
        "phi_est": estimates,
        "delta_phi": delta,
        "swpe_db": swpe_db(delta),
        "mode": grid.mode,
    }, columns=SWPE_COLUMNS)


def swpe_median(model: Predictor, grid: EvalGrid, seed: int = 0) -> float:
    return float(np.median(phase_sweep(model, grid, seed=seed)["swpe_db"]))


def aggregate_swpe(sweeps: pd.DataFrame) -> pd.DataFrame:
    """Per (mode, phase) median, IQR, mean and 5th/95th percentiles across runs.

    Percentiles interpolate linearly between order statistics.
    """
    grouped = sweeps.groupby(["mode", "phase"], sort=True)["swpe_db"]
    table = grouped.agg(
        median="median",
        mean="mean",
        q25=lambda s: s.quantile(0.25),
        q75=lambda s: s.quantile(0.75),
        p5=lambda s: s.quantile(0.05),
        p95=lambda s: s.quantile(0.95),
        runs="count",
    ).reset_index()
    table["iqr"] = table["q75"] - table["q25"]
    return table[["mode", "phase", "median", "iqr", "mean", "p5", "p95", "q25", "q75", "runs"]]


def evaluate_swpe(models: Sequence[Predictor], grid: EvalGrid, base_seed: int = 0,
                  runs: Optional[int] = None) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """SWPE of each run at every grid phase plus the across-run aggregate.

    With one model and `runs` > 1 the runs are independent shot draws of that
    model. Run i samples with seed base_seed + i.
    """
    if runs is None:
        runs = len(models)
    if runs < 1 or not models:
        raise ValueError("at least one run is required")
    if len(models) not in (1, runs):
        raise ValueError("pass one model per run, or a single model to resample")
    sweeps = [
        phase_sweep(models[i if len(models) > 1 else 0], grid, run=i, seed=base_seed + i)
        for i in range(runs)
    ]
    long_table = pd.concat(sweeps, ignore_index=True)
    return long_table, aggregate_swpe(long_table)


def decoding_jacobian(model: Predictor, grid: EvalGrid) -> JacobianStats:
    """Central differences of the end-to-end estimate on exact probabilities.

    Both numerator and denominator use wrapped differences, so the grid is
    treated as periodic.
    """
    if grid.size < defaults.JACOBIAN_MIN_POINTS:
        raise ValueError(f"decoding Jacobian needs at least {defaults.JACOBIAN_MIN_POINTS} grid points")
    phases = grid.phases
    estimates = np.asarray(model.predict(phases, shots=0), dtype=float)
    numerator = wrapped_error(np.roll(estimates, 1), np.roll(estimates, -1))
    denominator = wrapped_error(np.roll(phases, 1), np.roll(phases, -1))
    values = numerator / denominator
    return JacobianStats(
        mean=float(np.mean(values)),
        variance=float(np.var(values)),
        phases=phases,
        values=values,
    )
