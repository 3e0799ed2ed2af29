"""Exception types raised across the package."""


class InvalidParameterError(ValueError):
    """A parameter is outside its admissible range (e.g. a rate <= 0)."""


class OutOfRangeError(ValueError):
    """A query point lies outside the simulated window."""


class DegeneratePathError(ValueError):
    """A path statistic needed in a denominator is zero."""


class TruncationError(ValueError):
    """A series truncation leaves too much probability mass unaccounted for."""

    def __init__(self, message: str, tail_mass: float):
        super().__init__(message)
        self.tail_mass = tail_mass


class UndefinedBaselineError(ValueError):
    """Percentage variation requested against a zero baseline error."""


class ConfigError(ValueError):
    """Experiment configuration rejected; carries every violation found."""

    def __init__(self, violations: list[str]):
        super().__init__("invalid configuration:\n" + "\n".join(f"  - {v}" for v in violations))
        self.violations = list(violations)
