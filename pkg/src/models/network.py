"""Pydantic models for the classical decoder network"""
from enum import Enum
from typing import List, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from src.models.arrays import FloatArray


class ActivationKind(str, Enum):
    """Hidden-layer nonlinearities available to the decoder"""
    SOFTSIGN = "Softsign"
    TANH = "Tanh"
    ARCTAN = "Arctan"
    SIGMOID = "Sigmoid"
    ELU = "ELU"
    SOFTSIGN_SHIFT = "SoftsignShift"
    IDENTITY = "Identity"  # linear; used for diagnostics

    @property
    def parity(self) -> Literal["odd", "asymmetric"]:
        if self in (ActivationKind.SIGMOID, ActivationKind.ELU, ActivationKind.SOFTSIGN_SHIFT):
            return "asymmetric"
        return "odd"


ABLATION_ACTIVATIONS = [
    ActivationKind.SOFTSIGN,
    ActivationKind.TANH,
    ActivationKind.ARCTAN,
    ActivationKind.SIGMOID,
    ActivationKind.ELU,
    ActivationKind.SOFTSIGN_SHIFT,
]


class DecoderParams(BaseModel):
    """Weights and biases of the feed-forward decoder.

    weights[l] has shape (layer_sizes[l], layer_sizes[l+1]); the layer computes
    x @ W + b.
    """
    layer_sizes: List[int]
    weights: List[FloatArray]
    biases: List[FloatArray]
    activation: ActivationKind = ActivationKind.SOFTSIGN

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def _shapes(self) -> "DecoderParams":
        sizes = self.layer_sizes
        if len(sizes) < 2 or sizes[-1] != 2:
            raise ValueError("layer_sizes must end with the 2-wide (sin, cos) output")
        if any(size < 1 for size in sizes):
            raise ValueError("layer widths must be positive")
        if len(self.weights) != len(sizes) - 1 or len(self.biases) != len(sizes) - 1:
            raise ValueError("one weight matrix and bias vector per layer transition")
        for index, (weight, bias) in enumerate(zip(self.weights, self.biases)):
            if weight.shape != (sizes[index], sizes[index + 1]):
                raise ValueError(f"weight {index} has shape {weight.shape}")
            if bias.shape != (sizes[index + 1],):
                raise ValueError(f"bias {index} has shape {bias.shape}")
        return self

    @property
    def input_width(self) -> int:
        return self.layer_sizes[0]

    @property
    def latent_width(self) -> int:
        return self.layer_sizes[-2]

    def arrays(self) -> List[np.ndarray]:
        """Parameters interleaved as [W0, b0, W1, b1, ...]"""
        out = []
        for weight, bias in zip(self.weights, self.biases):
            out.extend([weight, bias])
        return out

    def with_arrays(self, arrays: List[np.ndarray]) -> "DecoderParams":
        return DecoderParams(
            layer_sizes=list(self.layer_sizes),
            weights=[np.array(a) for a in arrays[0::2]],
            biases=[np.array(a) for a in arrays[1::2]],
            activation=self.activation,
        )

    def copy(self) -> "DecoderParams":
        return self.with_arrays(self.arrays())

    @classmethod
    def zeros(cls, layer_sizes: List[int], activation: ActivationKind = ActivationKind.SOFTSIGN) -> "DecoderParams":
        return cls(
            layer_sizes=list(layer_sizes),
            weights=[np.zeros((a, b)) for a, b in zip(layer_sizes[:-1], layer_sizes[1:])],
            biases=[np.zeros(b) for b in layer_sizes[1:]],
            activation=activation,
        )

    @classmethod
    def initialize(cls, layer_sizes: List[int], rng: np.random.Generator,
                   activation: ActivationKind = ActivationKind.SOFTSIGN) -> "DecoderParams":
        """Glorot-uniform weights, zero biases"""
        weights = []
        for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:]):
            limit = np.sqrt(6.0 / (fan_in + fan_out))
            weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        return cls(
            layer_sizes=list(layer_sizes),
            weights=weights,
            biases=[np.zeros(b) for b in layer_sizes[1:]],
            activation=activation,
        )
