"""Exception types shared across the package."""


class DatasetError(ValueError):
    """Raised when an input dataset file or dataset object is invalid."""


class DegenerateProjectionError(RuntimeError):
    """Raised when the subsequence sample has no variance to project."""


class PipelineError(RuntimeError):
    """Pipeline failure carrying the stage where it happened."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
