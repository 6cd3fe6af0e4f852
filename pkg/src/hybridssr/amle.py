"""Approximate MLE of R from the linearised extreme-value likelihood.

On the log scale each sample is extreme-value with location ``mu_k`` and a
common scale ``sigma = 1/alpha``.  The score ``1 - exp(z)`` of each observed
failure and the hazard ``exp(z)`` of the censored units are replaced by their
tangent lines at the expected standardized order statistics
``log(-log(q_i))``, ``q_i = 1 - i/(N+1)``.  The linearised equations give
``mu_k = A_k + B_k * sigma`` and a quadratic in ``sigma``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .censoring import CaseTag, HybridSample, PairedData
from .errors import DegenerateData, NegativeDiscriminant, NonpositiveSigma


@dataclass(frozen=True)
class TaylorCoeffs:
    """Tangent-line coefficients for one sample.

    ``alpha_i + beta_i * z`` approximates the score at the i-th failure and
    ``1 - alpha_c - beta_c * z`` the hazard at the censor point.
    """

    alpha: np.ndarray
    beta: np.ndarray
    mu: np.ndarray
    alpha_c: float
    beta_c: float
    mu_c: float


def _coeffs_at(q):
    beta = np.log(q)
    mu = np.log(-beta)
    return 1.0 + beta * (1.0 - mu), beta, mu


def taylor_coeffs(sample_size: int, d: int, case: CaseTag) -> TaylorCoeffs:
    if not (1 <= d <= sample_size):
        raise ValueError(f"need 1 <= d <= sample size, got d={d}, N={sample_size}")
    p = np.arange(1, d + 1) / (sample_size + 1)
    a, b, mu = _coeffs_at(1.0 - p)
    if case is CaseTag.CASE_II and d < sample_size:
        p_star = (d + 0.5) / (sample_size + 1)  # midpoint of p_d and p_{d+1}
        a_c, b_c, mu_c = _coeffs_at(1.0 - p_star)
    else:
        a_c, b_c, mu_c = a[-1], b[-1], mu[-1]
    return TaylorCoeffs(a, b, mu, float(a_c), float(b_c), float(mu_c))


@dataclass(frozen=True)
class SampleTerms:
    """Per-sample pieces of the AMLE: ``mu = A + B sigma`` and its D, E shares."""

    A: float
    B: float
    D: float
    E: float
    d: int


def sample_terms(sample: HybridSample) -> SampleTerms:
    c = taylor_coeffs(sample.n, sample.d, sample.case)
    t = sample.log_times
    t_c = math.log(sample.u)  # log x_(d) in Case I, log T in Case II
    k = sample.n_censored
    denom = c.beta.sum() + k * c.beta_c
    A = (c.beta @ t + k * c.beta_c * t_c) / denom
    B = (c.alpha.sum() - k * (1.0 - c.alpha_c)) / denom
    D = (
        c.alpha @ (t - 3.0 * A)
        - k * (1.0 - c.alpha_c) * (t_c - 3.0 * A)
        + 2.0 * A * B * c.beta.sum()
        + 2.0 * A * B * k * c.beta_c
    )
    E = c.beta @ (t * (t - A)) + k * c.beta_c * t_c**2 - k * A * c.beta_c * t_c
    return SampleTerms(float(A), float(B), float(D), float(E), sample.d)


@dataclass(frozen=True)
class AmleFit:
    mu1: float
    mu2: float
    sigma: float
    theta1: float
    theta2: float
    r: float
    A1: float
    B1: float
    A2: float
    B2: float
    D: float
    E: float

    @property
    def alpha(self) -> float:
        return 1.0 / self.sigma

    @property
    def params(self):
        from .distributions import WeibullParams

        return WeibullParams(self.alpha, self.theta1, self.theta2)


def positive_sigma_root(D: float, E: float, d: int) -> float:
    disc = D * D - 4.0 * d * E
    if disc < 0:
        raise NegativeDiscriminant(f"D^2 - 4(d1+d2)E = {disc:.6g} < 0")
    sigma = (-D + math.sqrt(disc)) / (2.0 * d)
    if not sigma > 0:
        raise NonpositiveSigma(f"linearised scale root is {sigma:.6g}")
    return sigma


def _combine(tx: SampleTerms, ty: SampleTerms, D: float, E: float) -> AmleFit:
    d = tx.d + ty.d
    if d < 2:
        raise DegenerateData("need at least two observed failures in total")
    sigma = positive_sigma_root(D, E, d)
    mu1 = tx.A + tx.B * sigma
    mu2 = ty.A + ty.B * sigma
    theta1 = math.exp(mu1 / sigma)
    theta2 = math.exp(mu2 / sigma)
    return AmleFit(mu1, mu2, sigma, theta1, theta2, theta1 / (theta1 + theta2),
                   tx.A, tx.B, ty.A, ty.B, D, E)


def amle_fit(data: PairedData) -> AmleFit:
    """Closed-form AMLE of (alpha, theta1, theta2) and R.

    Each sample uses the expansion point that matches how its test stopped:
    the last failure (Case I) or the midpoint plotting position beyond it
    (Case II, censor log-time ``log T``).
    """
    tx, ty = sample_terms(data.x), sample_terms(data.y)
    return _combine(tx, ty, tx.D + ty.D, tx.E + ty.E)


def amle_mixed_cases(data: PairedData) -> AmleFit:
    """AMLE assembled from per-sample terms, whatever the pair of stopping cases.

    Identical to :func:`amle_fit`, kept as the explicit per-sample dispatch entry.
    """
    parts = [sample_terms(s) for s in (data.x, data.y)]
    D = sum(p.D for p in parts)
    E = sum(p.E for p in parts)
    return _combine(parts[0], parts[1], D, E)
