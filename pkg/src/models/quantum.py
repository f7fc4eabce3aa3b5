"""Pydantic models for the collective-spin interferometer"""
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.constants.defaults import PARAMS_PER_LAYER, QUANTUM_INIT_SCALE
from src.models.arrays import ComplexArray, FloatArray


class DickeSpace(BaseModel):
    """Symmetric subspace of N two-level systems.

    Basis order is m descending: index k holds m = N/2 - k.
    """
    n_particles: int = Field(..., ge=1, strict=True, description="Particle number N")

    model_config = ConfigDict(frozen=True)

    @property
    def dim(self) -> int:
        return self.n_particles + 1

    @property
    def spin(self) -> float:
        return self.n_particles / 2

    @property
    def basis_labels(self) -> np.ndarray:
        return self.spin - np.arange(self.dim, dtype=float)


class CollectiveOperator(BaseModel):
    """Collective angular-momentum component J_axis in the Dicke basis"""
    axis: Literal["x", "y", "z"]
    matrix: ComplexArray

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @field_validator("matrix")
    @classmethod
    def _hermitian(cls, value: np.ndarray) -> np.ndarray:
        if value.ndim != 2 or value.shape[0] != value.shape[1]:
            raise ValueError("operator matrix must be square")
        if np.max(np.abs(value - value.conj().T)) > 1e-12:
            raise ValueError("operator matrix must be Hermitian")
        return value


class UnitaryGate(BaseModel):
    """exp(-i * angle * generator) together with the generator that produced it"""
    kind: Literal["rotation", "twisting"]
    axis: Literal["x", "y", "z"]
    angle: float
    generator: ComplexArray
    matrix: ComplexArray

    model_config = ConfigDict(arbitrary_types_allowed=True)


class CircuitParams(BaseModel):
    """Encoding (theta) and decoding (vartheta) layer angles.

    Each row is one layer [beta_z, beta_x, chi_x, chi_y, beta_y]. Angles are
    kept unwrapped.
    """
    encoding: FloatArray
    decoding: FloatArray

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @field_validator("encoding", "decoding")
    @classmethod
    def _layer_shape(cls, value: np.ndarray) -> np.ndarray:
        value = np.atleast_2d(value)
        if value.ndim != 2 or value.shape[1] != PARAMS_PER_LAYER or value.shape[0] < 1:
            raise ValueError(f"layer parameters must have shape (layers, {PARAMS_PER_LAYER})")
        return value

    @property
    def layers_enc(self) -> int:
        return self.encoding.shape[0]

    @property
    def layers_dec(self) -> int:
        return self.decoding.shape[0]

    @property
    def n_params(self) -> int:
        return self.encoding.size + self.decoding.size

    def flat(self) -> np.ndarray:
        return np.concatenate([self.encoding.ravel(), self.decoding.ravel()])

    def copy(self) -> "CircuitParams":
        return CircuitParams(encoding=self.encoding.copy(), decoding=self.decoding.copy())

    @classmethod
    def zeros(cls, layers_enc: int = 1, layers_dec: int = 1) -> "CircuitParams":
        return cls(
            encoding=np.zeros((layers_enc, PARAMS_PER_LAYER)),
            decoding=np.zeros((layers_dec, PARAMS_PER_LAYER)),
        )

    @classmethod
    def initialize(cls, rng: np.random.Generator, layers_enc: int = 1, layers_dec: int = 1,
                   scale: float = QUANTUM_INIT_SCALE) -> "CircuitParams":
        """Near-identity start, uniform in [-scale, scale]"""
        return cls(
            encoding=rng.uniform(-scale, scale, size=(layers_enc, PARAMS_PER_LAYER)),
            decoding=rng.uniform(-scale, scale, size=(layers_dec, PARAMS_PER_LAYER)),
        )


class ProbabilityVector(BaseModel):
    """Measurement distribution p(m|phi) in descending-m order"""
    values: FloatArray
    kind: Literal["exact", "empirical"]
    shots: int = Field(0, ge=0)

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def _normalized(self) -> "ProbabilityVector":
        if np.any(self.values < 0):
            raise ValueError("probabilities must be non-negative")
        tolerance = 1e-9 if self.kind == "exact" else 1e-12
        if abs(self.values.sum() - 1.0) > tolerance:
            raise ValueError(f"probabilities sum to {self.values.sum()!r}, expected 1")
        if self.kind == "empirical" and self.shots < 1:
            raise ValueError("empirical distributions need shots >= 1")
        if self.kind == "exact" and self.shots != 0:
            raise ValueError("exact distributions carry shots = 0")
        return self
