"""Exception types raised across the toolkit"""


class VqcnniError(Exception):
    """Base class for toolkit errors"""


class ConfigError(VqcnniError):
    """Invalid experiment configuration or a missing referenced artifact"""


class TrainingDivergedError(VqcnniError):
    """Raised when an epoch produces a non-finite loss"""

    def __init__(self, epoch: int, loss: float):
        super().__init__(f"non-finite loss {loss!r} at epoch {epoch}")
        self.epoch = epoch
        self.loss = loss


class ArtifactError(VqcnniError):
    """Unreadable or incomplete run artifact"""
