"""Annotated numpy array types that survive a JSON round trip through pydantic"""
from typing import Annotated, Any

import numpy as np
from pydantic import PlainSerializer, PlainValidator


def _as_float_array(value: Any) -> np.ndarray:
    array = np.array(value, dtype=float)
    if not np.all(np.isfinite(array)):
        raise ValueError("array entries must be finite")
    return array


def _as_complex_array(value: Any) -> np.ndarray:
    if isinstance(value, dict):
        return np.array(value["real"], dtype=float) + 1j * np.array(value["imag"], dtype=float)
    return np.array(value, dtype=complex)


FloatArray = Annotated[
    np.ndarray,
    PlainValidator(_as_float_array),
    PlainSerializer(lambda a: a.tolist(), return_type=list, when_used="json"),
]

ComplexArray = Annotated[
    np.ndarray,
    PlainValidator(_as_complex_array),
    PlainSerializer(
        lambda a: {"real": a.real.tolist(), "imag": a.imag.tolist()},
        return_type=dict,
        when_used="json",
    ),
]
