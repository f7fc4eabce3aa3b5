"""
Collective spin operators and parameterized unitaries on the Dicke subspace
"""
import logging
from typing import Dict, Tuple

import numpy as np

from src.models.quantum import CollectiveOperator, DickeSpace, UnitaryGate

logger = logging.getLogger(__name__)

AXES = ("x", "y", "z")


def build_operators(space: DickeSpace) -> Dict[str, CollectiveOperator]:
    """Return J_x, J_y, J_z for spin j = N/2 in descending-m order"""
    j = space.spin
    m = space.basis_labels
    # <m+1|J_+|m> sits one row above m in descending order
    ladder = np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1))
    j_plus = np.diag(ladder, k=1).astype(complex)
    j_minus = j_plus.conj().T
    return {
        "x": CollectiveOperator(axis="x", matrix=(j_plus + j_minus) / 2),
        "y": CollectiveOperator(axis="y", matrix=(j_plus - j_minus) / 2j),
        "z": CollectiveOperator(axis="z", matrix=np.diag(m).astype(complex)),
    }


class SpinAlgebra:
    """Operator tables and cached eigendecompositions for one particle number.

    Everything is computed once in the constructor and never mutated, so a
    single instance can be shared by concurrent workers.
    """

    def __init__(self, n_particles: int):
        if isinstance(n_particles, np.integer):
            n_particles = int(n_particles)
        self.space = DickeSpace(n_particles=n_particles)
        self.operators = build_operators(self.space)
        self._eigen: Dict[str, Tuple[np.ndarray, np.ndarray]] = {}
        for axis in AXES:
            values, vectors = np.linalg.eigh(self.operators[axis].matrix)
            # spectrum is known to be spaced by exactly 1 (half-integers for odd N)
            values = np.round(2 * values) / 2
            self._eigen[axis] = (values, vectors)
        logger.debug("built spin algebra for N=%d", n_particles)

    @property
    def n_particles(self) -> int:
        return self.space.n_particles

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def labels(self) -> np.ndarray:
        return self.space.basis_labels

    def generator(self, axis: str, squared: bool = False) -> np.ndarray:
        op = self.operators[axis].matrix
        return op @ op if squared else op

    def _exponentiate(self, axis: str, angle: float, squared: bool) -> np.ndarray:
        values, vectors = self._eigen[axis]
        spectrum = values ** 2 if squared else values
        return (vectors * np.exp(-1j * angle * spectrum)) @ vectors.conj().T

    def rotation_matrix(self, axis: str, angle: float) -> np.ndarray:
        return self._exponentiate(axis, angle, squared=False)

    def twisting_matrix(self, axis: str, angle: float) -> np.ndarray:
        return self._exponentiate(axis, angle, squared=True)

    def rotation(self, axis: str, angle: float) -> UnitaryGate:
        """exp(-i angle J_axis)"""
        return UnitaryGate(
            kind="rotation", axis=axis, angle=float(angle),
            generator=self.generator(axis),
            matrix=self.rotation_matrix(axis, angle),
        )

    def twisting(self, axis: str, angle: float) -> UnitaryGate:
        """exp(-i angle J_axis^2)"""
        return UnitaryGate(
            kind="twisting", axis=axis, angle=float(angle),
            generator=self.generator(axis, squared=True),
            matrix=self.twisting_matrix(axis, angle),
        )

    def gate(self, kind: str, axis: str, angle: float) -> UnitaryGate:
        if kind == "rotation":
            return self.rotation(axis, angle)
        if kind == "twisting":
            return self.twisting(axis, angle)
        raise ValueError(f"unknown gate kind {kind!r}")


def gate_derivative(gate: UnitaryGate) -> np.ndarray:
    """d/d(angle) of exp(-i angle G), which is -i G U because G commutes with U"""
    return -1j * gate.generator @ gate.matrix
