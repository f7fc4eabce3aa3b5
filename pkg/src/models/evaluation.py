"""Pydantic models for evaluation grids, metric summaries and representation analysis"""
from typing import Literal

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.constants import defaults
from src.models.arrays import FloatArray


class EvalGrid(BaseModel):
    """Dense, endpoint-exclusive uniform phase grid over [-pi, pi)"""
    size: int = Field(defaults.EVAL_GRID_SIZE, ge=2)
    shots: int = Field(0, ge=0, description="Shots per phase, 0 for exact probabilities")

    @property
    def phases(self) -> np.ndarray:
        return -np.pi + 2 * np.pi * np.arange(self.size) / self.size

    @property
    def mode(self) -> Literal["exact", "shots"]:
        return "exact" if self.shots == 0 else "shots"


class JacobianStats(BaseModel):
    """Mean and variance of the decoding Jacobian over a grid"""
    mean: float
    variance: float = Field(..., ge=0.0)
    phases: FloatArray
    values: FloatArray

    model_config = ConfigDict(arbitrary_types_allowed=True)

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame({"phase": self.phases, "jacobian": self.values})


class FeatureMatrix(BaseModel):
    """Phase-indexed features: measurement probabilities or decoder latents"""
    kind: Literal["quantum", "latent"]
    phases: FloatArray
    values: FloatArray

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def _rows(self) -> "FeatureMatrix":
        if self.values.ndim != 2 or self.values.shape[0] != self.phases.shape[0]:
            raise ValueError("one feature row per phase is required")
        if self.kind == "quantum" and np.max(np.abs(self.values.sum(axis=1) - 1.0)) > 1e-9:
            raise ValueError("quantum feature rows must sum to 1")
        return self

    def heatmap_frame(self, labels: np.ndarray) -> pd.DataFrame:
        """Long table (phase, m, probability)"""
        n_rows, n_cols = self.values.shape
        return pd.DataFrame({
            "phase": np.repeat(self.phases, n_cols),
            "m": np.tile(labels, n_rows),
            "probability": self.values.ravel(),
        })


class Projection2D(BaseModel):
    """Two leading principal components of a FeatureMatrix"""
    phases: FloatArray
    coords: FloatArray
    explained: FloatArray

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def _explained(self) -> "Projection2D":
        if self.coords.ndim != 2 or self.coords.shape[1] != 2:
            raise ValueError("coords must have two columns")
        ev = self.explained
        if ev.shape != (2,) or np.any(ev < 0) or np.any(ev > 1 + 1e-12) or ev[0] < ev[1]:
            raise ValueError("explained-variance fractions must be ordered and lie in [0, 1]")
        return self

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "phase": self.phases,
            "pc1": self.coords[:, 0],
            "pc2": self.coords[:, 1],
            "ev1": self.explained[0],
            "ev2": self.explained[1],
        })


class Snapshot(BaseModel):
    """Representation state captured at an evaluation epoch"""
    epoch: int
    qfi: float
    swpe_median: float
    heatmap: FeatureMatrix
    latent_projection: Projection2D
