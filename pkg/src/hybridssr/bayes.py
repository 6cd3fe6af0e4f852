"""Bayes estimation of R by Gibbs sampling with a Metropolis-Hastings step for the shape.

Priors: ``theta_j ~ IG(a_j, b_j)`` for the scales and ``alpha ~ Gamma(a3, b3)``.
Given alpha the scale conditionals are inverse gamma,

    theta1 | alpha ~ IG(d1 + a1, b1 + S1(alpha)),

and alpha is updated by a random-walk Metropolis step with a normal proposal.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numba
import numpy as np

from .censoring import PairedData
from .errors import DomainError, EmptyChain, ImproperPosterior, InsufficientDraws
from .intervals import Interval, Method
from .mle import _points, power_sums, solve_alpha_fixed_point
from .rng import derive_rng

DEFAULT_DRAWS = 10_000
DEFAULT_BURN_IN = 1_000
DEFAULT_PROPOSAL_SD = 1.0


@dataclass(frozen=True)
class PriorSpec:
    """Hyperparameters; all zeros is the improper non-informative limit."""

    a1: float = 0.0
    b1: float = 0.0
    a2: float = 0.0
    b2: float = 0.0
    a3: float = 0.0
    b3: float = 0.0

    def __post_init__(self):
        for name in ("a1", "b1", "a2", "b2", "a3", "b3"):
            v = getattr(self, name)
            if not (v >= 0 and math.isfinite(v)):
                raise DomainError(f"prior hyperparameter {name} must be >= 0, got {v!r}")

    def swapped(self) -> "PriorSpec":
        return PriorSpec(self.a2, self.b2, self.a1, self.b1, self.a3, self.b3)


PRIOR_1 = PriorSpec()
PRIOR_2 = PriorSpec(1.0, 2.0, 1.0, 2.0, 1.0, 2.0)


def check_proper(prior: PriorSpec, data: PairedData):
    d1, d2 = data.x.d, data.y.d
    if d1 < 1 or d2 < 1:
        raise ImproperPosterior("each sample needs at least one observed failure")
    if prior.a3 + d1 + d2 <= 1:
        raise ImproperPosterior("a3 + d1 + d2 must exceed 1")


def log_conditional_alpha(alpha, theta1, theta2, prior: PriorSpec, data: PairedData) -> float:
    """Log full conditional of alpha, up to an additive constant."""
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    d = data.x.d + data.y.d
    W = float(data.x.log_times.sum() + data.y.log_times.sum())
    S1 = power_sums(alpha, data.x).S
    S2 = power_sums(alpha, data.y).S
    return (d + prior.a3 - 1.0) * math.log(alpha) + alpha * W - prior.b3 * alpha - S1 / theta1 - S2 / theta2


def _accept(log_fx: float, log_fy: float, u: float) -> bool:
    # symmetric proposal: acceptance probability min(1, f(y)/f(x))
    diff = log_fy - log_fx
    return diff >= 0 or (u > 0 and math.log(u) < diff)


def mh_step_alpha(current, proposal_sd, theta1, theta2, prior: PriorSpec, data: PairedData, seed=None):
    """One random-walk Metropolis update of alpha; returns ``(next, accepted)``."""
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    y = current + proposal_sd * rng.standard_normal()
    u = rng.random()
    if y <= 0:
        return current, False
    fx = log_conditional_alpha(current, theta1, theta2, prior, data)
    fy = log_conditional_alpha(y, theta1, theta2, prior, data)
    if _accept(fx, fy, u):
        return y, True
    return current, False


@dataclass(frozen=True, eq=False)
class PosteriorDraws:
    alpha: np.ndarray
    theta1: np.ndarray
    theta2: np.ndarray
    r: np.ndarray
    burn_in: int
    acceptance_rate: float
    seed: int | None = None

    def __len__(self):
        return len(self.r)

    def to_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["sweep", "alpha", "theta1", "theta2", "r"])
            for i in range(len(self.r)):
                w.writerow([self.burn_in + i + 1, repr(float(self.alpha[i])), repr(float(self.theta1[i])),
                            repr(float(self.theta2[i])), repr(float(self.r[i]))])


@numba.njit(cache=True)
def _log_s(alpha, logs, weights):
    s = 0.0
    for i in range(logs.size):
        if weights[i] > 0:
            s += weights[i] * math.exp(alpha * logs[i])
    return s


@numba.njit(cache=True)
def _log_f(alpha, t1, t2, lx, wx, ly, wy, c_log, W, b3):
    return c_log * math.log(alpha) + alpha * W - b3 * alpha - _log_s(alpha, lx, wx) / t1 - _log_s(alpha, ly, wy) / t2


@numba.njit(cache=True)
def _gibbs_kernel(alpha0, t10, t20, lx, wx, ly, wy, d, W, a1, b1, a2, b2, a3, b3,
                  proposal_sd, z, u, g1, g2, theta_given_current):
    n = z.size
    out_a = np.empty(n)
    out_t1 = np.empty(n)
    out_t2 = np.empty(n)
    c_log = d + a3 - 1.0
    alpha, t1, t2 = alpha0, t10, t20
    accepted = 0
    for t in range(n):
        prev = alpha
        y = prev + proposal_sd * z[t]
        if y > 0:
            fx = _log_f(prev, t1, t2, lx, wx, ly, wy, c_log, W, b3)
            fy = _log_f(y, t1, t2, lx, wx, ly, wy, c_log, W, b3)
            diff = fy - fx
            if diff >= 0 or (u[t] > 0 and math.log(u[t]) < diff):
                alpha = y
                accepted += 1
        a_scale = alpha if theta_given_current else prev
        t1 = (b1 + _log_s(a_scale, lx, wx)) / g1[t]
        t2 = (b2 + _log_s(a_scale, ly, wy)) / g2[t]
        out_a[t] = alpha
        out_t1[t] = t1
        out_t2[t] = t2
    return out_a, out_t1, out_t2, accepted


def _python_kernel(alpha0, t10, t20, prior, data, proposal_sd, z, u, g1, g2, theta_given_current):
    """Reference implementation of the chain, one sweep at a time."""
    n = z.size
    out = np.empty((3, n))
    alpha, t1, t2 = alpha0, t10, t20
    accepted = 0
    for t in range(n):
        prev = alpha
        y = prev + proposal_sd * z[t]
        if y > 0:
            fx = log_conditional_alpha(prev, t1, t2, prior, data)
            fy = log_conditional_alpha(y, t1, t2, prior, data)
            if _accept(fx, fy, u[t]):
                alpha = y
                accepted += 1
        a_scale = alpha if theta_given_current else prev
        t1 = (prior.b1 + power_sums(a_scale, data.x).S) / g1[t]
        t2 = (prior.b2 + power_sums(a_scale, data.y).S) / g2[t]
        out[:, t] = alpha, t1, t2
    return out[0], out[1], out[2], accepted


def gibbs_chain(
    data: PairedData,
    prior: PriorSpec = PRIOR_1,
    m: int = DEFAULT_DRAWS,
    burn_in: int = DEFAULT_BURN_IN,
    init: tuple[float, float, float] | None = None,
    seed=None,
    proposal_sd: float = DEFAULT_PROPOSAL_SD,
    theta_given_current: bool = False,
    engine: str = "numba",
) -> PosteriorDraws:
    """Run ``burn_in + m`` sweeps and keep the last ``m``.

    Each sweep updates alpha by Metropolis, then draws theta1 and theta2 from
    their inverse-gamma conditionals.  By default the scale draws condition on
    the shape value from the start of the sweep; ``theta_given_current=True``
    uses the freshly updated one (systematic-scan Gibbs).  ``init`` defaults
    to the MLE.
    """
    if m < 1 or burn_in < 0:
        raise DomainError("need m >= 1 and burn_in >= 0")
    if proposal_sd < 0:
        raise DomainError("proposal_sd must be >= 0")
    check_proper(prior, data)
    if init is None:
        fit = solve_alpha_fixed_point(data)
        init = (fit.alpha, fit.theta1, fit.theta2)
    total = m + burn_in
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    z = rng.standard_normal(total)
    u = rng.random(total)
    g1 = rng.standard_gamma(data.x.d + prior.a1, total)
    g2 = rng.standard_gamma(data.y.d + prior.a2, total)
    if engine == "numba":
        lx, wx = _points(data.x)
        ly, wy = _points(data.y)
        W = float(data.x.log_times.sum() + data.y.log_times.sum())
        a, t1, t2, acc = _gibbs_kernel(
            float(init[0]), float(init[1]), float(init[2]), lx, wx, ly, wy,
            float(data.x.d + data.y.d), W, prior.a1, prior.b1, prior.a2, prior.b2,
            prior.a3, prior.b3, float(proposal_sd), z, u, g1, g2, theta_given_current,
        )
    elif engine == "python":
        a, t1, t2, acc = _python_kernel(*init, prior, data, proposal_sd, z, u, g1, g2, theta_given_current)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    keep = slice(burn_in, None)
    a, t1, t2 = a[keep].copy(), t1[keep].copy(), t2[keep].copy()
    seed_record = seed if isinstance(seed, int) else None
    return PosteriorDraws(a, t1, t2, t1 / (t1 + t2), burn_in, acc / total, seed_record)


def _r_values(draws) -> np.ndarray:
    r = draws.r if isinstance(draws, PosteriorDraws) else draws
    return np.asarray(r, dtype=float)


def posterior_summary(draws) -> tuple[float, float]:
    """Posterior mean and (1/M) variance of R."""
    r = _r_values(draws)
    if r.size == 0:
        raise EmptyChain("no draws to summarise")
    mean = float(r.mean())
    return mean, float(np.mean((r - mean) ** 2))


def credible_interval(draws, gamma: float = 0.05) -> Interval:
    """Equal-tail interval between the [gamma M/2]-th and [(1-gamma/2) M]-th smallest draws."""
    if not 0 < gamma < 1:
        raise DomainError(f"gamma must lie in (0, 1), got {gamma!r}")
    r = np.sort(_r_values(draws))
    M = r.size
    lo = math.floor(gamma / 2.0 * M + 1e-9)
    hi = math.floor((1.0 - gamma / 2.0) * M + 1e-9)
    if lo < 1:
        raise InsufficientDraws(f"{M} draws are too few for gamma={gamma}")
    return Interval(float(r[lo - 1]), float(r[hi - 1]), 1.0 - gamma, Method.CREDIBLE)


def hpd_interval(draws, gamma: float = 0.05) -> Interval:
    """Shortest interval containing a (1 - gamma) share of the draws."""
    r = np.sort(_r_values(draws))
    M = r.size
    k = math.floor((1.0 - gamma) * M + 1e-9)
    if k < 1 or k >= M:
        raise InsufficientDraws(f"{M} draws are too few for gamma={gamma}")
    widths = r[k:] - r[: M - k]
    i = int(np.argmin(widths))
    return Interval(float(r[i]), float(r[i + k]), 1.0 - gamma, Method.CREDIBLE)


def split_half_means(draws) -> tuple[float, float]:
    """Mean of R over the first and second halves of the chain."""
    r = _r_values(draws)
    h = r.size // 2
    return float(r[:h].mean()), float(r[h:].mean())


def bayes_estimate(data: PairedData, prior: PriorSpec = PRIOR_1, gamma: float = 0.05, seed=None, **kwargs):
    """Posterior mean of R with its credible interval."""
    draws = gibbs_chain(data, prior, seed=seed, **kwargs)
    return posterior_summary(draws)[0], credible_interval(draws, gamma), draws
