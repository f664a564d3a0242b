"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain where a formula is defined."""


class SizeError(ValueError):
    """A requested finite-dimensional construction exceeds its size budget."""


class NumericError(RuntimeError):
    """A root finder or quadrature failed to reach its tolerance.

    The achieved residual is kept on ``residual`` so callers can report it.
    """

    def __init__(self, message, residual=float("nan")):
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual


class ConsistencyError(RuntimeError):
    """Two analytically equal routes disagree beyond round-off."""


class ConfigError(ValueError):
    """Malformed or incomplete run configuration."""


class ModelViolationWarning(UserWarning):
    """The solution left the window where the model's assumptions hold."""


class RenderError(ValueError):
    """A curve cannot be drawn (for example it has no rows)."""
