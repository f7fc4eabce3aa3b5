"""Pydantic models for optimizer configuration and training traces"""
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, model_validator

from src.constants import defaults
from src.models.network import DecoderParams
from src.models.quantum import CircuitParams


class TrainConfig(BaseModel):
    """Knobs of the joint optimization loop (Adam + early stopping)"""
    n_phi: int = Field(defaults.N_PHI, ge=2, description="Training quadrature points")
    max_iters: int = Field(defaults.MAX_ITERS, ge=1, description="Maximum epochs T")
    patience: int = Field(defaults.PATIENCE, ge=1, description="Patience P")
    min_iters: int = Field(defaults.MIN_ITERS, ge=0, description="Minimum epochs M_min")
    eval_interval: int = Field(defaults.EVAL_INTERVAL, ge=1, description="Evaluation interval K")
    learning_rate: float = Field(defaults.LEARNING_RATE, ge=0.0)
    betas: Tuple[float, float] = defaults.ADAM_BETAS
    epsilon: float = Field(defaults.ADAM_EPSILON, gt=0.0)
    seed: int = 0

    @model_validator(mode="after")
    def _consistent(self) -> "TrainConfig":
        if self.min_iters >= self.max_iters:
            raise ValueError("min_iters must be smaller than max_iters")
        if not all(0.0 <= beta < 1.0 for beta in self.betas):
            raise ValueError("Adam betas must lie in [0, 1)")
        return self


class GaussianPrior(BaseModel):
    """Narrow phase prior for the BMSE baseline"""
    mean: float = defaults.PRIOR_MEAN
    std: float = Field(defaults.PRIOR_STD, gt=0.0)
    grid_points: int = Field(defaults.PRIOR_GRID_POINTS, ge=3)
    width: float = Field(defaults.PRIOR_GRID_WIDTH, gt=0.0, description="Grid half-width in units of std")

    def grid(self) -> Tuple[np.ndarray, np.ndarray]:
        """Phases over mean +- width*std and their normalized Gaussian weights"""
        offsets = np.linspace(-self.width, self.width, self.grid_points)
        weights = np.exp(-0.5 * offsets ** 2)
        return self.mean + self.std * offsets, weights / weights.sum()


class EvalRecord(BaseModel):
    """Metrics recorded at an evaluation epoch"""
    epoch: int
    loss: float
    qfi: float
    swpe_median: float
    snapshot: Optional[str] = None


class TrainTrace(BaseModel):
    """Per-epoch loss history and per-evaluation-epoch metrics"""
    losses: List[float] = Field(default_factory=list)
    evals: List[EvalRecord] = Field(default_factory=list)
    best_loss: float = float("inf")
    best_epoch: int = 0
    stopped_epoch: int = 0
    early_stopped: bool = False

    @model_validator(mode="after")
    def _increasing(self) -> "TrainTrace":
        epochs = [record.epoch for record in self.evals]
        if any(b <= a for a, b in zip(epochs, epochs[1:])):
            raise ValueError("evaluation epochs must be strictly increasing")
        return self

    def loss_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "epoch": np.arange(1, len(self.losses) + 1),
            "loss": self.losses,
        })

    def trajectory_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [{"epoch": r.epoch, "qfi": r.qfi, "swpe_median": r.swpe_median} for r in self.evals],
            columns=["epoch", "qfi", "swpe_median"],
        )


class TrainResult(BaseModel):
    """Best parameters found by a trainer plus its trace"""
    circuit: CircuitParams
    decoder: Optional[DecoderParams] = None
    estimator: Optional[Tuple[float, float]] = None
    trace: TrainTrace
