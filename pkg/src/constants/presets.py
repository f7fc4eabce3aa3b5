"""
Experiment presets for the four studies: global estimation, representation
geometry, training dynamics and the activation ablation
"""
from pathlib import Path
from typing import Dict, Optional

from src.constants import defaults
from src.constants.env import OUTPUT_DIR
from src.models.errors import ConfigError
from src.models.experiment import ExperimentConfig, ModelKind, Preset
from src.models.network import ABLATION_ACTIVATIONS, ActivationKind


def _fig2_global(output_dir: str) -> Preset:
    root = str(Path(output_dir) / "fig2_global")
    return Preset(
        name="fig2_global",
        description="Global estimation over [-pi, pi): VQ-CNNI (Softsign) against the BMSE-trained VQI, "
                    f"{defaults.RUNS} runs, {defaults.SHOTS} shots per phase",
        experiments=[
            ExperimentConfig(name="vqcnni", model_kind=ModelKind.VQCNNI, activation=ActivationKind.SOFTSIGN,
                             output_dir=root),
            ExperimentConfig(name="vqi", model_kind=ModelKind.VQI, output_dir=root),
        ],
    )


def _fig3_representation(output_dir: str) -> Preset:
    root = str(Path(output_dir) / "fig3_representation")
    vqi = ExperimentConfig(name="vqi", model_kind=ModelKind.VQI, shots=0, output_dir=root)
    return Preset(
        name="fig3_representation",
        description="Quantum feature and latent manifolds of VQI, VQ-CNNI and VQ-CNNI-fixed, exact evaluation",
        experiments=[
            vqi,
            ExperimentConfig(name="vqcnni", model_kind=ModelKind.VQCNNI, shots=0, output_dir=root),
            ExperimentConfig(name="vqcnni_fixed", model_kind=ModelKind.VQCNNI_FIXED, shots=0,
                             reference_dir=str(vqi.experiment_dir), output_dir=root),
        ],
    )


def _fig4_dynamics(output_dir: str) -> Preset:
    root = str(Path(output_dir) / "fig4_dynamics")
    return Preset(
        name="fig4_dynamics",
        description="QFI and SWPE trajectories of joint training with heatmap and manifold snapshots",
        experiments=[
            ExperimentConfig(name="vqcnni", model_kind=ModelKind.VQCNNI, shots=0, snapshots=True, output_dir=root),
        ],
    )


def _fig5_activations(output_dir: str) -> Preset:
    root = str(Path(output_dir) / "fig5_activations")
    experiments = [
        ExperimentConfig(name=f"vqcnni_{kind.value.lower()}", model_kind=ModelKind.VQCNNI, activation=kind,
                         output_dir=root)
        for kind in ABLATION_ACTIVATIONS
    ]
    experiments.append(ExperimentConfig(name="vqi", model_kind=ModelKind.VQI, output_dir=root))
    return Preset(
        name="fig5_activations",
        description="Activation ablation: six decoder nonlinearities plus the VQI reference, "
                    "SWPE and decoding-Jacobian statistics",
        experiments=experiments,
    )


_BUILDERS = {
    "fig2_global": _fig2_global,
    "fig3_representation": _fig3_representation,
    "fig4_dynamics": _fig4_dynamics,
    "fig5_activations": _fig5_activations,
}

# accepted spelling variants
ALIASES = {
    "global": "fig2_global",
    "representation": "fig3_representation",
    "dynamics": "fig4_dynamics",
    "activation-ablation": "fig5_activations",
}


def presets(output_dir: Optional[str] = None) -> Dict[str, Preset]:
    """All presets, writing under `output_dir` (defaults to VQCNNI_OUTPUT_DIR)"""
    output_dir = output_dir or OUTPUT_DIR
    return {name: build(output_dir) for name, build in _BUILDERS.items()}


def get_preset(name: str, output_dir: Optional[str] = None) -> Preset:
    key = ALIASES.get(name, name)
    if key not in _BUILDERS:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(_BUILDERS)}")
    return _BUILDERS[key](output_dir or OUTPUT_DIR)
