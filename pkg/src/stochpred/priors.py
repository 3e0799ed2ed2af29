"""Prior families used by the Bayesian predictors."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidParameterError


@dataclass(frozen=True)
class GammaPrior:
    """Gamma(a, b) with shape ``a`` and rate ``b``; prior mean ``a / b``."""

    a: float
    b: float

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise InvalidParameterError(f"Gamma prior needs a, b > 0, got a={self.a}, b={self.b}")

    @property
    def mean(self) -> float:
        return self.a / self.b


@dataclass(frozen=True)
class GaussianPrior:
    """Normal prior with given mean and variance (> 0)."""

    mean: float
    variance: float

    def __post_init__(self):
        if self.variance <= 0:
            raise InvalidParameterError(f"Gaussian prior needs variance > 0, got {self.variance}")


@dataclass(frozen=True)
class TranslatedExpPrior:
    """Exponential(eta) shifted to start at ``theta0 >= 0``."""

    eta: float
    theta0: float = 0.0

    def __post_init__(self):
        if self.eta <= 0:
            raise InvalidParameterError(f"translated exponential needs eta > 0, got {self.eta}")
        if self.theta0 < 0:
            raise InvalidParameterError(f"translated exponential needs theta0 >= 0, got {self.theta0}")
