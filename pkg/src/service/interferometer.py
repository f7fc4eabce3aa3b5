"""
Ramsey-type variational interferometer

U_R(phi) = R_x(readout) U_De(vartheta) R_z(phi) U_En(theta) R_y(prep), read out
projectively in the J_z basis.
"""
import logging
from typing import List, Sequence, Tuple, Union

import numpy as np

from src.constants import defaults
from src.models.quantum import CircuitParams, ProbabilityVector
from src.service.spin_algebra import SpinAlgebra

logger = logging.getLogger(__name__)

# (kind, axis) for [beta_z, beta_x, chi_x, chi_y, beta_y], in product order
LAYER_TEMPLATE: Tuple[Tuple[str, str], ...] = (
    ("rotation", "z"),
    ("rotation", "x"),
    ("twisting", "x"),
    ("twisting", "y"),
    ("rotation", "y"),
)

Phases = Union[float, Sequence[float], np.ndarray]


def _chain_with_derivatives(factors: List[np.ndarray], derivatives: List[np.ndarray]) -> Tuple[np.ndarray, List[np.ndarray]]:
    """Product F_0 F_1 ... F_{n-1} and its derivative with respect to each factor's angle"""
    dim = factors[0].shape[0]
    prefix = [np.eye(dim, dtype=complex)]
    for factor in factors:
        prefix.append(prefix[-1] @ factor)
    suffix = [np.eye(dim, dtype=complex)]
    for factor in reversed(factors):
        suffix.append(factor @ suffix[-1])
    suffix.reverse()
    grads = [prefix[k] @ derivatives[k] @ suffix[k + 1] for k in range(len(factors))]
    return prefix[-1], grads


class Interferometer:
    """Exact and finite-shot measurement statistics of the variational circuit.

    All methods are pure functions of their arguments; the sampler takes an
    explicit seed on every call.
    """

    def __init__(self, algebra: SpinAlgebra, prep_angle: float = defaults.PREP_ANGLE,
                 readout_angle: float = defaults.READOUT_ANGLE):
        self.algebra = algebra
        self.prep_angle = prep_angle
        self.readout_angle = readout_angle
        self._prep = algebra.rotation_matrix("y", prep_angle)
        self._readout = algebra.rotation_matrix("x", readout_angle)
        self._jz = np.real(np.diag(algebra.operators["z"].matrix))

    @classmethod
    def for_particles(cls, n_particles: int, **kwargs) -> "Interferometer":
        return cls(SpinAlgebra(n_particles), **kwargs)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def labels(self) -> np.ndarray:
        return self.algebra.labels

    # ------------------------------------------------------------------
    # circuit pieces
    # ------------------------------------------------------------------

    def initial_state(self) -> np.ndarray:
        """|m = -N/2>, the last basis vector in descending order"""
        state = np.zeros(self.dim, dtype=complex)
        state[-1] = 1.0
        return state

    def _layer_gates(self, layers: np.ndarray) -> Tuple[List[np.ndarray], List[np.ndarray]]:
        """Gate matrices and angle-derivatives of a layer stack, in product order.

        Layer 0 is applied first, so it appears last in the product. The
        returned lists are ordered to match layers[::-1].ravel().
        """
        factors, derivatives = [], []
        for row in layers[::-1]:
            for (kind, axis), angle in zip(LAYER_TEMPLATE, row):
                matrix = (self.algebra.rotation_matrix(axis, angle) if kind == "rotation"
                          else self.algebra.twisting_matrix(axis, angle))
                generator = self.algebra.generator(axis, squared=(kind == "twisting"))
                factors.append(matrix)
                derivatives.append(-1j * generator @ matrix)
        return factors, derivatives

    def _stack(self, layers: np.ndarray, with_grad: bool = False):
        factors, derivatives = self._layer_gates(layers)
        product, grads = _chain_with_derivatives(factors, derivatives)
        if not with_grad:
            return product
        # reorder gradients from product order back to layers.ravel() order
        n_layers, width = layers.shape
        ordered = [None] * len(grads)
        for position, grad in enumerate(grads):
            layer = n_layers - 1 - position // width
            ordered[layer * width + position % width] = grad
        return product, ordered

    def encoder_unitary(self, params: CircuitParams) -> np.ndarray:
        return self._stack(params.encoding)

    def decoder_unitary(self, params: CircuitParams) -> np.ndarray:
        return self._stack(params.decoding)

    def phase_unitary(self, phi: float) -> np.ndarray:
        return np.diag(np.exp(-1j * phi * self._jz))

    def full_unitary(self, phi: float, params: CircuitParams) -> np.ndarray:
        return (self._readout @ self.decoder_unitary(params) @ self.phase_unitary(phi)
                @ self.encoder_unitary(params) @ self._prep)

    def probe_state(self, params: CircuitParams) -> np.ndarray:
        """U_En R_y(prep) |0>, the state that carries the phase"""
        return self.encoder_unitary(params) @ (self._prep @ self.initial_state())

    # ------------------------------------------------------------------
    # measurement statistics
    # ------------------------------------------------------------------

    def amplitudes(self, phases: Phases, params: CircuitParams) -> np.ndarray:
        """Final amplitudes, one row per phase"""
        phases = np.atleast_1d(np.asarray(phases, dtype=float))
        probe = self.probe_state(params)
        readout = self._readout @ self.decoder_unitary(params)
        encoded = np.exp(-1j * np.outer(phases, self._jz)) * probe
        return encoded @ readout.T

    def probability_table(self, phases: Phases, params: CircuitParams) -> np.ndarray:
        """Exact p(m|phi) for each phase, shape (n_phases, N+1)"""
        return np.abs(self.amplitudes(phases, params)) ** 2

    def probabilities(self, phi: float, params: CircuitParams) -> ProbabilityVector:
        values = self.probability_table(phi, params)[0]
        return ProbabilityVector(values=values, kind="exact", shots=0)

    def probability_jacobian(self, phases: Phases, params: CircuitParams) -> np.ndarray:
        """Exact partial derivatives of p(m|phi).

        Returns shape (n_phases, n_params + 1, N+1) with parameters ordered as
        encoding.ravel(), decoding.ravel(), then phi. A scalar phase drops the
        leading axis.
        """
        scalar = np.ndim(phases) == 0
        _, jacobian = self.table_and_jacobian(phases, params)
        return jacobian[0] if scalar else jacobian

    def table_and_jacobian(self, phases: Phases, params: CircuitParams) -> Tuple[np.ndarray, np.ndarray]:
        """probability_table and probability_jacobian from one pass over the circuit"""
        phases = np.atleast_1d(np.asarray(phases, dtype=float))
        start = self._prep @ self.initial_state()
        encoder, encoder_grads = self._stack(params.encoding, with_grad=True)
        decoder, decoder_grads = self._stack(params.decoding, with_grad=True)
        readout = self._readout @ decoder
        phase_factors = np.exp(-1j * np.outer(phases, self._jz))

        probe = encoder @ start
        encoded = phase_factors * probe
        amps = encoded @ readout.T

        d_amps = []
        for grad in encoder_grads:
            d_amps.append((phase_factors * (grad @ start)) @ readout.T)
        for grad in decoder_grads:
            d_amps.append(encoded @ (self._readout @ grad).T)
        d_amps.append((-1j * self._jz * encoded) @ readout.T)

        d_amps = np.stack(d_amps, axis=1)
        jacobian = 2 * np.real(np.conj(amps)[:, None, :] * d_amps)
        return np.abs(amps) ** 2, jacobian

    def sample(self, probabilities: ProbabilityVector, shots: int,
               rng_seed: Union[int, Sequence[int]]) -> ProbabilityVector:
        """Multinomial frequencies of `shots` projective measurements"""
        return sample(probabilities, shots, rng_seed)

    # ------------------------------------------------------------------
    # quantum Fisher information
    # ------------------------------------------------------------------

    def qfi_of_state(self, state: np.ndarray) -> float:
        """4 Var(J_z) of a pure state"""
        weights = np.abs(np.asarray(state)) ** 2
        weights = weights / weights.sum()
        mean = weights @ self._jz
        return float(4 * (weights @ self._jz ** 2 - mean ** 2))

    def qfi(self, params: CircuitParams) -> float:
        """QFI of the encoded probe with respect to the phase generator J_z"""
        return self.qfi_of_state(self.probe_state(params))


def sample(probabilities: ProbabilityVector, shots: int,
           rng_seed: Union[int, Sequence[int]]) -> ProbabilityVector:
    """Empirical distribution from a seeded multinomial draw"""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if probabilities.kind != "exact":
        raise ValueError("sampling needs an exact distribution")
    values = probabilities.values
    if abs(values.sum() - 1.0) > 1e-6:
        raise ValueError(f"distribution sums to {values.sum()!r}, expected 1")
    return ProbabilityVector(
        values=sample_frequencies(values, shots, rng_seed), kind="empirical", shots=shots)


def sample_frequencies(values: np.ndarray, shots: int,
                       rng_seed: Union[int, Sequence[int]]) -> np.ndarray:
    """counts / shots for one exact probability row"""
    rng = np.random.default_rng(rng_seed)
    values = np.clip(values, 0.0, None)
    counts = rng.multinomial(shots, values / values.sum())
    return counts / shots
