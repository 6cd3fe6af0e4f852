"""Confidence intervals for R: delta-method (asymptotic) and bootstrap."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .amle import AmleFit
from .censoring import HybridSample, HybridScheme, CaseTag, PairedData, recensor
from .distributions import WeibullParams, std_normal_quantile
from .errors import (
    BootstrapFailure,
    DegenerateData,
    DomainError,
    HybridSSRError,
    NonfiniteStudentization,
    SingularInformation,
)
from .mle import MleFit, power_sums, solve_alpha_fixed_point
from .rng import derive_rng

DEFAULT_NBOOT = 250
MAX_FAILED_FRACTION = 0.2


class Method(str, enum.Enum):
    ASYMPTOTIC = "Asymptotic"
    BOOT_P = "BootP"
    BOOT_T = "BootT"
    CREDIBLE = "Credible"


@dataclass(frozen=True)
class Interval:
    lower: float
    upper: float
    level: float
    method: Method
    clamped: bool = False

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"interval bounds out of order: {self.lower} > {self.upper}")

    @property
    def length(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper


def clamp_unit(lower: float, upper: float, level: float, method: Method) -> Interval:
    lo, hi = max(lower, 0.0), min(upper, 1.0)
    return Interval(lo, hi, level, method, clamped=(lo != lower or hi != upper))


def _check_gamma(gamma):
    if not (0.0 < gamma < 1.0):
        raise DomainError(f"gamma must lie in (0, 1), got {gamma!r}")


@dataclass(frozen=True)
class InformationMatrix:
    """Observed information (negative Hessian) in (alpha, theta1, theta2)."""

    matrix: np.ndarray

    @property
    def u(self) -> float:
        I = self.matrix
        return float(
            I[0, 0] * I[1, 1] * I[2, 2]
            - I[0, 1] * I[1, 0] * I[2, 2]
            - I[0, 2] * I[2, 0] * I[1, 1]
        )

    def leading_minors(self) -> tuple[float, float, float]:
        I = self.matrix
        return (
            float(I[0, 0]),
            float(I[0, 0] * I[1, 1] - I[0, 1] * I[1, 0]),
            self.u,
        )

    @property
    def positive_definite(self) -> bool:
        return all(m > 0 for m in self.leading_minors())

    def covariance(self) -> np.ndarray:
        """Inverse via the adjugate, using I23 = I32 = 0."""
        I = self.matrix
        u = self.u
        if u == 0 or not math.isfinite(u):
            raise SingularInformation("observed information is singular")
        adj = np.array(
            [
                [I[1, 1] * I[2, 2], -I[0, 1] * I[2, 2], -I[1, 1] * I[0, 2]],
                [-I[1, 0] * I[2, 2], I[0, 0] * I[2, 2] - I[0, 2] * I[2, 0], I[1, 0] * I[0, 2]],
                [-I[1, 1] * I[2, 0], I[0, 1] * I[2, 0], I[0, 0] * I[1, 1] - I[0, 1] * I[1, 0]],
            ]
        )
        return adj / u


def observed_information(params: WeibullParams, data: PairedData) -> InformationMatrix:
    a, t1, t2 = params.as_tuple()
    p1, p2 = power_sums(a, data.x), power_sums(a, data.y)
    d1, d2 = data.x.d, data.y.d
    I11 = (d1 + d2) / a**2 + p1.d2S / t1 + p2.d2S / t2
    I22 = -d1 / t1**2 + 2.0 * p1.S / t1**3
    I33 = -d2 / t2**2 + 2.0 * p2.S / t2**3
    I12 = -p1.dS / t1**2
    I13 = -p2.dS / t2**2
    m = np.array([[I11, I12, I13], [I12, I22, 0.0], [I13, 0.0, I33]])
    if not np.all(np.isfinite(m)):
        raise SingularInformation("observed information has non-finite entries")
    return InformationMatrix(m)


def _gradient_r(theta1: float, theta2: float) -> np.ndarray:
    return np.array([0.0, theta2, -theta1]) / (theta1 + theta2) ** 2


def delta_variance(params: WeibullParams, info: InformationMatrix) -> float:
    """Delta-method variance of R = theta1 / (theta1 + theta2)."""
    _, t1, t2 = params.as_tuple()
    I = info.matrix
    u = info.u
    if u == 0 or not math.isfinite(u):
        raise SingularInformation("observed information is singular")
    I11, I12, I13, I22, I33 = I[0, 0], I[0, 1], I[0, 2], I[1, 1], I[2, 2]
    num = (
        (I11 * I22 - I12**2) * t1**2
        - 2.0 * I12 * I13 * t1 * t2
        + (I11 * I33 - I13**2) * t2**2
    )
    B = float(num / (u * (t1 + t2) ** 4))
    if not (B > 0 and math.isfinite(B)):
        raise SingularInformation(f"delta-method variance is not positive ({B!r})")
    return B


def delta_variance_generic(params: WeibullParams, info: InformationMatrix) -> float:
    """Same quantity as :func:`delta_variance`, as b' I^-1 b by a linear solve."""
    b = _gradient_r(params.theta1, params.theta2)
    try:
        return float(b @ np.linalg.solve(info.matrix, b))
    except np.linalg.LinAlgError as exc:
        raise SingularInformation(str(exc)) from exc


def r_variance(fit: MleFit | AmleFit, data: PairedData) -> float:
    params = fit.params
    return delta_variance(params, observed_information(params, data))


def asymptotic_ci(fit: MleFit | AmleFit, data: PairedData, gamma: float = 0.05) -> Interval:
    """``R +- z_{1-gamma/2} sqrt(B)`` with B from the information at the fit."""
    _check_gamma(gamma)
    half = std_normal_quantile(1.0 - gamma / 2.0) * math.sqrt(r_variance(fit, data))
    return clamp_unit(fit.r - half, fit.r + half, 1.0 - gamma, Method.ASYMPTOTIC)


def resample_failures(sample: HybridSample, rng: np.random.Generator, recensor_on: bool = True) -> HybridSample:
    """Draw ``d`` failures with replacement from the observed ones.

    With ``recensor_on`` the original (n, r, T) design is applied again to the
    resampled failures; otherwise the resample is a complete sample of size d.
    """
    draw = np.sort(rng.choice(sample.times, size=sample.d, replace=True))
    if recensor_on:
        return recensor(draw, sample.scheme)
    d = sample.d
    return HybridSample(HybridScheme(d, d), draw, d, float(draw[-1]), CaseTag.CASE_I)


@dataclass(frozen=True)
class BootstrapResult:
    r_hat: float
    var_hat: float | None
    r_star: np.ndarray
    t_star: np.ndarray | None
    failed_fits: int
    failed_studentizations: int = 0
    nboot: int = 0


def _check_failures(failed: int, nboot: int, what: str):
    if failed > MAX_FAILED_FRACTION * nboot:
        raise BootstrapFailure(f"{failed} of {nboot} bootstrap resamples could not be {what}")


def bootstrap_replicates(
    data: PairedData,
    nboot: int = DEFAULT_NBOOT,
    seed=None,
    studentize: bool = True,
    recensor_on: bool = True,
    fit: MleFit | None = None,
) -> BootstrapResult:
    """Refit the MLE of R on ``nboot`` resamples.

    Resample ``b`` draws from a generator keyed on ``(seed, b)``, so results
    do not depend on evaluation order.  With ``studentize`` each replicate also
    carries ``(R* - R) / sqrt(Var(R*))`` with the delta-method variance at the
    replicate's own fit.
    """
    if nboot < 2:
        raise DomainError("nboot must be >= 2")
    if fit is None:
        fit = solve_alpha_fixed_point(data)
    var_hat = r_variance(fit, data) if studentize else None
    r_star, t_star = [], []
    failed = failed_t = 0
    for b in range(nboot):
        rng = derive_rng(seed, b)
        try:
            boot = PairedData(
                resample_failures(data.x, rng, recensor_on),
                resample_failures(data.y, rng, recensor_on),
            )
            bfit = solve_alpha_fixed_point(boot)
        except HybridSSRError:
            failed += 1
            continue
        r_star.append(bfit.r)
        if studentize:
            try:
                v = r_variance(bfit, boot)
                t = (bfit.r - fit.r) / math.sqrt(v)
                if not math.isfinite(t):
                    raise NonfiniteStudentization("non-finite studentized replicate")
            except (SingularInformation, NonfiniteStudentization):
                failed_t += 1
                continue
            t_star.append(t)
    _check_failures(failed, nboot, "fitted")
    if studentize:
        _check_failures(failed + failed_t, nboot, "studentized")
    return BootstrapResult(
        fit.r, var_hat, np.array(r_star),
        np.array(t_star) if studentize else None,
        failed, failed_t, nboot,
    )


def empirical_quantile(values, prob: float) -> float:
    """Inverse of the empirical cdf: the ceil(prob * B)-th smallest value."""
    v = np.sort(np.asarray(values, dtype=float))
    k = math.ceil(prob * v.size - 1e-9)
    return float(v[min(max(k, 1), v.size) - 1])


def boot_p_from(result: BootstrapResult, gamma: float) -> Interval:
    lo = empirical_quantile(result.r_star, gamma / 2.0)
    hi = empirical_quantile(result.r_star, 1.0 - gamma / 2.0)
    return clamp_unit(lo, hi, 1.0 - gamma, Method.BOOT_P)


def boot_t_from(result: BootstrapResult, gamma: float) -> Interval:
    if result.t_star is None:
        raise ValueError("bootstrap result was not studentized")
    sd = math.sqrt(result.var_hat)
    lo = result.r_hat + empirical_quantile(result.t_star, gamma / 2.0) * sd
    hi = result.r_hat + empirical_quantile(result.t_star, 1.0 - gamma / 2.0) * sd
    return clamp_unit(lo, hi, 1.0 - gamma, Method.BOOT_T)


def boot_p_ci(data: PairedData, nboot: int = DEFAULT_NBOOT, gamma: float = 0.05, seed=None,
              recensor_on: bool = True) -> Interval:
    """Percentile bootstrap interval for R."""
    _check_gamma(gamma)
    res = bootstrap_replicates(data, nboot, seed, studentize=False, recensor_on=recensor_on)
    return boot_p_from(res, gamma)


def boot_t_ci(data: PairedData, nboot: int = DEFAULT_NBOOT, gamma: float = 0.05, seed=None,
              recensor_on: bool = True) -> Interval:
    """Studentized (bootstrap-t) interval for R."""
    _check_gamma(gamma)
    res = bootstrap_replicates(data, nboot, seed, studentize=True, recensor_on=recensor_on)
    return boot_t_from(res, gamma)


def bootstrap_cis(data: PairedData, nboot: int = DEFAULT_NBOOT, gamma: float = 0.05, seed=None,
                  recensor_on: bool = True, fit: MleFit | None = None) -> tuple[Interval, Interval]:
    """Boot-p and Boot-t intervals from one shared set of resamples."""
    _check_gamma(gamma)
    res = bootstrap_replicates(data, nboot, seed, studentize=True, recensor_on=recensor_on, fit=fit)
    return boot_p_from(res, gamma), boot_t_from(res, gamma)
