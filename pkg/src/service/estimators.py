"""
End-to-end phase estimators: circuit + classical post-processing
"""
from typing import Optional

import numpy as np

from src.models.network import DecoderParams
from src.models.quantum import CircuitParams
from src.service.decoder import forward, phase_estimate
from src.service.interferometer import Interferometer, sample_frequencies
from src.util.metrics import wrap_phase


class PhaseEstimator:
    """Maps true phases to estimates through measurement statistics"""

    def __init__(self, interferometer: Interferometer, circuit: CircuitParams):
        self.interferometer = interferometer
        self.circuit = circuit

    def probability_table(self, phases: np.ndarray, shots: int = 0, seed: int = 0) -> np.ndarray:
        """Exact rows, or counts/shots rows with row i drawn from seed [seed, i]"""
        table = self.interferometer.probability_table(phases, self.circuit)
        if shots == 0:
            return table
        return np.stack([sample_frequencies(row, shots, [seed, index]) for index, row in enumerate(table)])

    def decode(self, table: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def predict(self, phases, shots: int = 0, seed: int = 0) -> np.ndarray:
        phases = np.atleast_1d(np.asarray(phases, dtype=float))
        return self.decode(self.probability_table(phases, shots, seed))

    def qfi(self) -> float:
        return self.interferometer.qfi(self.circuit)


class NetworkEstimator(PhaseEstimator):
    """Circuit followed by the neural decoder and atan2"""

    def __init__(self, interferometer: Interferometer, circuit: CircuitParams, decoder: DecoderParams):
        super().__init__(interferometer, circuit)
        self.decoder = decoder

    def decode(self, table: np.ndarray) -> np.ndarray:
        out = forward(self.decoder, np.atleast_2d(table))
        return phase_estimate(out.s, out.c)

    def latent(self, phases) -> np.ndarray:
        phases = np.atleast_1d(np.asarray(phases, dtype=float))
        return forward(self.decoder, self.probability_table(phases)).latent


class AffineEstimator(PhaseEstimator):
    """phi_est(m) = a*m + b averaged over outcomes, then wrapped"""

    def __init__(self, interferometer: Interferometer, circuit: CircuitParams, a: float, b: float):
        super().__init__(interferometer, circuit)
        self.a = float(a)
        self.b = float(b)

    def decode(self, table: np.ndarray) -> np.ndarray:
        mean_outcome = np.atleast_2d(table) @ self.interferometer.labels
        return wrap_phase(self.a * mean_outcome + self.b)

    def latent(self, phases) -> Optional[np.ndarray]:
        return None
