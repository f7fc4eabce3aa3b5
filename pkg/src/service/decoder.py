"""
Feed-forward decoder mapping measurement distributions to (sin, cos) of the phase
"""
from typing import Callable, Dict, List, NamedTuple, Tuple, Union

import numpy as np

from src.models.network import ActivationKind, DecoderParams
from src.models.quantum import ProbabilityVector


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def _elu(x: np.ndarray) -> np.ndarray:
    return np.where(x > 0, x, np.expm1(np.minimum(x, 0.0)))


def _elu_grad(x: np.ndarray) -> np.ndarray:
    return np.where(x > 0, 1.0, np.exp(np.minimum(x, 0.0)))


def _softsign_grad(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.abs(x)) ** 2


# (f, f') per activation
ACTIVATIONS: Dict[ActivationKind, Tuple[Callable, Callable]] = {
    ActivationKind.SOFTSIGN: (lambda x: x / (1.0 + np.abs(x)), _softsign_grad),
    ActivationKind.SOFTSIGN_SHIFT: (lambda x: x / (1.0 + np.abs(x)) + 1.0, _softsign_grad),
    ActivationKind.TANH: (np.tanh, lambda x: 1.0 - np.tanh(x) ** 2),
    ActivationKind.ARCTAN: (np.arctan, lambda x: 1.0 / (1.0 + x ** 2)),
    ActivationKind.SIGMOID: (_sigmoid, lambda x: _sigmoid(x) * (1.0 - _sigmoid(x))),
    ActivationKind.ELU: (_elu, _elu_grad),
    ActivationKind.IDENTITY: (lambda x: np.asarray(x, dtype=float), lambda x: np.ones_like(x, dtype=float)),
}


def activate(kind: Union[ActivationKind, str], x):
    """Apply an activation elementwise; scalars in, scalars out"""
    fn, _ = ACTIVATIONS[ActivationKind(kind)]
    out = fn(np.asarray(x, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


def activation_grad(kind: Union[ActivationKind, str], x):
    _, grad = ACTIVATIONS[ActivationKind(kind)]
    out = grad(np.asarray(x, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


class DecoderOutput(NamedTuple):
    s: np.ndarray
    c: np.ndarray
    latent: np.ndarray
    # inputs of every layer and pre-activations of the hidden layers
    inputs: List[np.ndarray]
    pre_activations: List[np.ndarray]


class DecoderGradients(NamedTuple):
    weights: List[np.ndarray]
    biases: List[np.ndarray]
    inputs: np.ndarray

    def arrays(self) -> List[np.ndarray]:
        out = []
        for weight, bias in zip(self.weights, self.biases):
            out.extend([weight, bias])
        return out


def _as_batch(params: DecoderParams, p) -> Tuple[np.ndarray, bool]:
    if isinstance(p, ProbabilityVector):
        p = p.values
    x = np.asarray(p, dtype=float)
    single = x.ndim == 1
    x = np.atleast_2d(x)
    if x.ndim != 2 or x.shape[1] != params.input_width:
        raise ValueError(f"decoder expects inputs of width {params.input_width}, got shape {np.shape(p)}")
    return x, single


def forward(params: DecoderParams, p) -> DecoderOutput:
    """Hidden layers are affine + activation, the output layer is affine only.

    Accepts a ProbabilityVector, a single row or a batch of rows. For a single
    input s and c are scalars and latent is a vector.
    """
    x, single = _as_batch(params, p)
    fn, _ = ACTIVATIONS[params.activation]
    inputs, pre_activations = [], []
    hidden = x
    n_layers = len(params.weights)
    for index, (weight, bias) in enumerate(zip(params.weights, params.biases)):
        inputs.append(hidden)
        z = hidden @ weight + bias
        if index == n_layers - 1:
            hidden = z
        else:
            pre_activations.append(z)
            hidden = fn(z)
    latent = inputs[-1]
    s, c = hidden[:, 0], hidden[:, 1]
    if single:
        return DecoderOutput(float(s[0]), float(c[0]), latent[0], inputs, pre_activations)
    return DecoderOutput(s, c, latent, inputs, pre_activations)


def backward(params: DecoderParams, output: DecoderOutput, upstream: np.ndarray) -> DecoderGradients:
    """Reverse-mode gradients given dL/d(s, c) with shape (batch, 2) or (2,)"""
    _, grad_fn = ACTIVATIONS[params.activation]
    delta = np.atleast_2d(np.asarray(upstream, dtype=float))
    n_layers = len(params.weights)
    weight_grads: List[np.ndarray] = [None] * n_layers
    bias_grads: List[np.ndarray] = [None] * n_layers
    for index in range(n_layers - 1, -1, -1):
        weight_grads[index] = output.inputs[index].T @ delta
        bias_grads[index] = delta.sum(axis=0)
        delta = delta @ params.weights[index].T
        if index > 0:
            delta = delta * grad_fn(output.pre_activations[index - 1])
    inputs = delta[0] if np.ndim(upstream) == 1 else delta
    return DecoderGradients(weight_grads, bias_grads, inputs)


def phase_estimate(s, c):
    """atan2(s, c) mapped into [-pi, pi); (0, 0) maps to 0"""
    phase = np.arctan2(s, c)
    phase = np.where(phase >= np.pi, phase - 2 * np.pi, phase)
    return float(phase) if np.ndim(phase) == 0 else phase


def phase_estimate_grad(s, c) -> Tuple[np.ndarray, np.ndarray]:
    """Partials of atan2(s, c); zero at the degenerate origin"""
    s = np.asarray(s, dtype=float)
    c = np.asarray(c, dtype=float)
    radius2 = s ** 2 + c ** 2
    safe = np.where(radius2 > 0, radius2, 1.0)
    return np.where(radius2 > 0, c / safe, 0.0), np.where(radius2 > 0, -s / safe, 0.0)
