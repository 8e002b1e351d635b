"""Exception and warning types shared across the toolkit."""


class DomainError(ValueError):
    """An input lies outside the mathematical domain of an operation."""

    def __init__(self, param: str, value, requirement: str):
        self.param = param
        self.value = value
        super().__init__(f"{param}={value!r} is invalid: {requirement}")


class NoSolutionError(ValueError):
    """A root-finding target is not reachable inside the search bracket."""


class ConfigurationError(ValueError):
    """Inputs are individually valid but inconsistent with each other."""


class ValidationError(ValueError):
    """A design configuration failed validation before any computation ran."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


class PipelineError(RuntimeError):
    """A pipeline stage failed; ``stage`` names the stage that raised."""

    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")


class UnvalidatedDesignWarning(UserWarning):
    """The design is computed outside the configurations covered by tests."""
