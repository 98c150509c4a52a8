"""Exception types shared across the toolkit."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SingularInputError(DomainError):
    """Inputs make a closed-form expression singular (e.g. a vanishing
    marginal exponent in a denominator)."""


class ConfigError(ValueError):
    """A run configuration violates the schema.

    ``field`` names the offending key (``section.key``) so CLI diagnostics
    can point at it.
    """

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"config field '{field}': {message}")


class TruncationBudgetError(RuntimeError):
    """Path extension hit its resource cap more often than the run allows."""
