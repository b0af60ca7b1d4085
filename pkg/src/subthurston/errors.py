"""Exception types shared across the package."""


class SubthurstonError(Exception):
    """Base class; ``reason`` is a short machine-readable tag."""

    reason = "error"


class BudgetExceeded(SubthurstonError):
    """A requested enumeration or iteration would exceed its budget."""

    reason = "budget_exceeded"


class AssumptionViolation(SubthurstonError):
    """Input breaks a standing hypothesis (surjectivity, irreducibility, ...)."""

    reason = "assumption_violation"


class ConvergenceError(SubthurstonError):
    """An iterative solver stopped before reaching its tolerance."""

    reason = "not_converged"


class ConfigError(SubthurstonError):
    """Malformed configuration."""

    reason = "invalid_config"
