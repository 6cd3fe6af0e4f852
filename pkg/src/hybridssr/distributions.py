"""Weibull and extreme-value building blocks.

The Weibull law is used in the ``(alpha, theta)`` parameterisation

    F(x) = 1 - exp(-x**alpha / theta),

so ``theta`` is a scale on the ``x**alpha`` axis rather than on ``x``.  If
``X ~ W(alpha, theta)`` then ``log X`` follows a (minimum) extreme-value law
with location ``log(theta) / alpha`` and scale ``1 / alpha``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .errors import DomainError

# ev_hazard saturates here instead of overflowing to inf.
HAZARD_CAP = 1e300
_LOG_HAZARD_CAP = math.log(HAZARD_CAP)



def as_generator(seed) -> np.random.Generator:
    """Return a Generator for ``seed``; Generators are passed through untouched."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _check_positive(**kwargs):
    for name, value in kwargs.items():
        if not (value > 0) or not math.isfinite(value):
            raise DomainError(f"{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class WeibullParams:
    """Common shape ``alpha`` with scales ``theta1`` (strength X) and ``theta2`` (stress Y)."""

    alpha: float
    theta1: float
    theta2: float

    def __post_init__(self):
        _check_positive(alpha=self.alpha, theta1=self.theta1, theta2=self.theta2)

    @property
    def reliability(self) -> float:
        return stress_strength_r(self.theta1, self.theta2)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.alpha, self.theta1, self.theta2)


@dataclass(frozen=True)
class ExtremeValueParams:
    mu: float
    sigma: float

    def __post_init__(self):
        _check_positive(sigma=self.sigma)

    @classmethod
    def from_weibull(cls, alpha: float, theta: float) -> "ExtremeValueParams":
        _check_positive(alpha=alpha, theta=theta)
        return cls(mu=math.log(theta) / alpha, sigma=1.0 / alpha)

    def to_weibull(self) -> tuple[float, float]:
        """Return ``(alpha, theta)``."""
        alpha = 1.0 / self.sigma
        return alpha, math.exp(self.mu / self.sigma)


def weibull_cdf(x, alpha: float, theta: float):
    _check_positive(alpha=alpha, theta=theta)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("weibull_cdf is defined for x >= 0")
    out = -np.expm1(-(x**alpha) / theta)
    return float(out) if out.ndim == 0 else out


def weibull_pdf(x, alpha: float, theta: float):
    _check_positive(alpha=alpha, theta=theta)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("weibull_pdf is defined for x >= 0")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = alpha / theta * x ** (alpha - 1.0) * np.exp(-(x**alpha) / theta)
    return float(out) if out.ndim == 0 else out


def weibull_quantile(p, alpha: float, theta: float):
    _check_positive(alpha=alpha, theta=theta)
    p = np.asarray(p, dtype=float)
    if np.any((p < 0) | (p >= 1)):
        raise DomainError("weibull_quantile needs 0 <= p < 1")
    out = (-theta * np.log1p(-p)) ** (1.0 / alpha)
    return float(out) if out.ndim == 0 else out


def weibull_sample(n: int, alpha: float, theta: float, seed=None) -> np.ndarray:
    """Draw ``n`` iid lifetimes by inverse transform of the cdf."""
    if n < 1:
        raise DomainError(f"sample size must be >= 1, got {n}")
    _check_positive(alpha=alpha, theta=theta)
    rng = as_generator(seed)
    # -log(1 - U) is a unit exponential; invert F on it.
    e = rng.standard_exponential(n)
    return (theta * e) ** (1.0 / alpha)


def stress_strength_r(theta1: float, theta2: float) -> float:
    """P(X > Y) for Weibull X, Y sharing a shape parameter."""
    _check_positive(theta1=theta1, theta2=theta2)
    return theta1 / (theta1 + theta2)


def ev_cdf(z):
    return -np.expm1(-np.exp(z))


def ev_hazard(z: float) -> float:
    """g(z) / (1 - G(z)) = exp(z) for the standard extreme-value law.

    Saturates at ``HAZARD_CAP`` for ``z`` beyond ``log(HAZARD_CAP)``.
    """
    if z > _LOG_HAZARD_CAP:
        return HAZARD_CAP
    return math.exp(z)


def ev_score(z: float) -> float:
    """g'(z) / g(z) = 1 - exp(z); uses the saturated hazard."""
    return 1.0 - ev_hazard(z)


def gamma_sample(shape: float, rate: float, seed=None, size=None):
    _check_positive(shape=shape, rate=rate)
    rng = as_generator(seed)
    return rng.gamma(shape, 1.0 / rate, size=size)


def inverse_gamma_sample(a: float, b: float, seed=None, size=None):
    """Draw from IG(a, b), i.e. the reciprocal of a Gamma(a, rate=b) variate."""
    _check_positive(a=a, b=b)
    rng = as_generator(seed)
    return b / rng.standard_gamma(a, size=size)


def std_normal_quantile(p: float) -> float:
    if not (0.0 < p < 1.0):
        raise DomainError(f"normal quantile needs 0 < p < 1, got {p!r}")
    return float(ndtri(p))
