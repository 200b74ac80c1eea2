"""Exception types shared across the pipeline."""


class PipelineError(Exception):
    """Base class for errors raised by pipeline stages."""


class ConfigError(PipelineError):
    """Invalid, conflicting, or malformed configuration."""


class GeneratorError(PipelineError):
    """Base class for external-generator failures."""


class GeneratorFailed(GeneratorError):
    """The external command exited with a nonzero status."""


class GeneratorOutputMissing(GeneratorError):
    """The external command exited 0 but produced no output file."""


class GeneratorOutputMismatch(GeneratorError):
    """The external command produced an image of the wrong size."""


class StageError(PipelineError):
    """Wraps a failure with the name of the pipeline stage it occurred in."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
