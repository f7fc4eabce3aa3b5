from .errors import ArtifactError, ConfigError, TrainingDivergedError, VqcnniError
from .quantum import CircuitParams, CollectiveOperator, DickeSpace, ProbabilityVector, UnitaryGate
from .network import ABLATION_ACTIVATIONS, ActivationKind, DecoderParams
from .training import EvalRecord, GaussianPrior, TrainConfig, TrainResult, TrainTrace
from .evaluation import EvalGrid, FeatureMatrix, JacobianStats, Projection2D, Snapshot
from .experiment import ExperimentConfig, ModelKind, Preset, RunArtifact

__all__ = [
    "ArtifactError",
    "ConfigError",
    "TrainingDivergedError",
    "VqcnniError",
    "CircuitParams",
    "CollectiveOperator",
    "DickeSpace",
    "ProbabilityVector",
    "UnitaryGate",
    "ABLATION_ACTIVATIONS",
    "ActivationKind",
    "DecoderParams",
    "EvalRecord",
    "GaussianPrior",
    "TrainConfig",
    "TrainResult",
    "TrainTrace",
    "EvalGrid",
    "FeatureMatrix",
    "JacobianStats",
    "Projection2D",
    "Snapshot",
    "ExperimentConfig",
    "ModelKind",
    "Preset",
    "RunArtifact",
]
