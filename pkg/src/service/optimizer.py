"""
Adam adaptive moment estimation over a list of parameter arrays
"""
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np

from src.constants import defaults


class AdamState(NamedTuple):
    step: int
    m: List[np.ndarray]
    v: List[np.ndarray]

    @classmethod
    def create(cls, params: Sequence[np.ndarray]) -> "AdamState":
        return cls(0, [np.zeros_like(p, dtype=float) for p in params],
                   [np.zeros_like(p, dtype=float) for p in params])


def adam_step(state: AdamState, params: Sequence[np.ndarray], grads: Sequence[np.ndarray],
              learning_rate: float, betas: Tuple[float, float] = defaults.ADAM_BETAS,
              epsilon: float = defaults.ADAM_EPSILON) -> Tuple[List[np.ndarray], AdamState]:
    """One bias-corrected Adam update; returns new arrays and a new state"""
    b1, b2 = betas
    t = state.step + 1
    new_params, new_m, new_v = [], [], []
    for p, g, m, v in zip(params, grads, state.m, state.v):
        m = b1 * m + (1 - b1) * g
        v = b2 * v + (1 - b2) * g ** 2
        m_hat = m / (1 - b1 ** t)
        v_hat = v / (1 - b2 ** t)
        new_params.append(p - learning_rate * m_hat / (np.sqrt(v_hat) + epsilon))
        new_m.append(m)
        new_v.append(v)
    return new_params, AdamState(t, new_m, new_v)
