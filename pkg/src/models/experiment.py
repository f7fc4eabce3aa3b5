"""Pydantic models for experiment configuration and run artifacts"""
from enum import Enum
from pathlib import Path
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

from src.constants import defaults
from src.constants.env import DEFAULT_PARTICLES, OUTPUT_DIR
from src.models.network import ActivationKind, DecoderParams
from src.models.quantum import CircuitParams
from src.models.training import GaussianPrior, TrainConfig, TrainTrace


class ModelKind(str, Enum):
    VQCNNI = "vqcnni"
    VQI = "vqi"
    VQCNNI_FIXED = "vqcnni_fixed"


class ExperimentConfig(BaseModel):
    """Everything that determines a set of seeded runs"""
    name: str = "experiment"
    model_kind: ModelKind = ModelKind.VQCNNI
    n_particles: int = Field(DEFAULT_PARTICLES, ge=1)
    hidden_layers: List[int] = Field(default_factory=lambda: list(defaults.HIDDEN_LAYERS))
    activation: ActivationKind = ActivationKind(defaults.DEFAULT_ACTIVATION)
    layers_enc: int = Field(1, ge=1)
    layers_dec: int = Field(1, ge=1)
    train: TrainConfig = Field(default_factory=TrainConfig)
    prior: GaussianPrior = Field(default_factory=GaussianPrior)
    eval_grid_size: int = Field(defaults.EVAL_GRID_SIZE, ge=defaults.JACOBIAN_MIN_POINTS)
    shots: int = Field(defaults.SHOTS, ge=0, description="Shots per phase for the finite-shot evaluation, 0 disables it")
    runs: int = Field(defaults.RUNS, ge=1)
    base_seed: int = Field(0, ge=0)
    reference_dir: Optional[str] = Field(None, description="vqi experiment directory whose quantum parameters vqcnni_fixed freezes")
    output_dir: str = OUTPUT_DIR
    snapshots: bool = False

    @model_validator(mode="after")
    def _widths(self) -> "ExperimentConfig":
        if any(width < 1 for width in self.hidden_layers):
            raise ValueError("hidden layer widths must be positive")
        return self

    @property
    def layer_sizes(self) -> List[int]:
        return [self.n_particles + 1, *self.hidden_layers, 2]

    @property
    def decoder_activation(self) -> Optional[ActivationKind]:
        """None for the affine baseline, which has no decoder"""
        return None if self.model_kind == ModelKind.VQI else self.activation

    @property
    def experiment_dir(self) -> Path:
        return Path(self.output_dir) / self.name

    def run_seed(self, run_index: int) -> int:
        return self.base_seed + run_index


class RunArtifact(BaseModel):
    """Outcome of one seeded run; persisted as run.json next to the run's CSV files"""
    experiment: str
    model_kind: ModelKind
    activation: Optional[ActivationKind] = None
    run_index: int
    seed: int
    status: Literal["ok", "failed"] = "ok"
    error: Optional[str] = None
    circuit: Optional[CircuitParams] = None
    decoder: Optional[DecoderParams] = None
    estimator: Optional[Tuple[float, float]] = Field(None, description="Affine VQI estimator (a, b)")
    trace: Optional[TrainTrace] = None
    qfi: Optional[float] = None
    final_loss: Optional[float] = None
    j_mean: Optional[float] = None
    j_var: Optional[float] = None
    swpe_median_exact: Optional[float] = None
    swpe_median_shots: Optional[float] = None


class Preset(BaseModel):
    """A named group of experiments reproducing one study"""
    name: str
    description: str
    experiments: List[ExperimentConfig]
