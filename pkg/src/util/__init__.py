from .metrics import decoding_jacobian, evaluate_swpe, phase_sweep, swpe_db, wrap_phase, wrapped_error

__all__ = [
    "decoding_jacobian",
    "evaluate_swpe",
    "phase_sweep",
    "swpe_db",
    "wrap_phase",
    "wrapped_error",
]
