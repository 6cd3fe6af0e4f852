"""Maximum likelihood for two hybrid-censored Weibull samples with a common shape.

With the scales profiled out, ``theta_k(alpha) = S_k(alpha) / d_k`` where

    S_k(alpha) = sum(t_i**alpha) + (n_k - d_k) * u_k**alpha

over the observed failures ``t_i`` of sample ``k``.  The shape estimate is the
fixed point of ``k(alpha) = (d1 + d2) / (U(alpha) + V(alpha) - W)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .censoring import HybridSample, PairedData
from .distributions import WeibullParams, _check_positive
from .errors import DegenerateData, DomainError, NonConvergence

DEFAULT_INIT = 1.0
DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 500
CYCLE_WINDOW = 10


@dataclass(frozen=True)
class PowerSums:
    """``S(alpha)`` and its first two alpha-derivatives for one sample.

    Values are stored as ``exp(log_scale) * (s0, s1, s2)`` so that large
    ``alpha * log(t)`` does not overflow ratios such as ``S'/S``.
    """

    log_scale: float
    s0: float
    s1: float
    s2: float

    @property
    def S(self) -> float:
        return math.exp(self.log_scale) * self.s0

    @property
    def dS(self) -> float:
        return math.exp(self.log_scale) * self.s1

    @property
    def d2S(self) -> float:
        return math.exp(self.log_scale) * self.s2

    @property
    def log_S(self) -> float:
        return self.log_scale + math.log(self.s0)

    @property
    def mean_log(self) -> float:
        """S'/S, a weighted mean of the log-times."""
        return self.s1 / self.s0


def _points(sample: HybridSample) -> tuple[np.ndarray, np.ndarray]:
    """Log-times and weights entering S: the failures plus the censor point."""
    logs = np.append(sample.log_times, math.log(sample.u))
    weights = np.ones(logs.size)
    weights[-1] = sample.n_censored
    return logs, weights


def power_sums(alpha: float, sample: HybridSample) -> PowerSums:
    logs, weights = _points(sample)
    return _power_sums(alpha, logs, weights)


def _power_sums(alpha, logs, weights) -> PowerSums:
    a = alpha * logs
    shift = float(a.max())
    # keep exp(shift) representable when the sums themselves are moderate
    if shift < 600.0:
        shift = 0.0
    e = weights * np.exp(a - shift)
    le = e * logs
    return PowerSums(shift, float(e.sum()), float(le.sum()), float((le * logs).sum()))


@dataclass(frozen=True)
class ProfileStats:
    """Profile quantities at one value of the shape parameter."""

    alpha: float
    S1: float
    dS1: float
    S2: float
    dS2: float
    W: float


def profile_stats(alpha: float, data: PairedData) -> ProfileStats:
    _check_positive(alpha=alpha)
    p1 = power_sums(alpha, data.x)
    p2 = power_sums(alpha, data.y)
    W = float(data.x.log_times.sum() + data.y.log_times.sum())
    return ProfileStats(alpha, p1.S, p1.dS, p2.S, p2.dS, W)


def log_likelihood(params: WeibullParams, data: PairedData) -> float:
    """Hybrid-censored log-likelihood without the combinatorial constant."""
    a, t1, t2 = params.as_tuple()
    x, y = data.x, data.y
    S1 = power_sums(a, x).S
    S2 = power_sums(a, y).S
    W = x.log_times.sum() + y.log_times.sum()
    return float(
        (x.d + y.d) * math.log(a)
        - x.d * math.log(t1)
        - y.d * math.log(t2)
        + (a - 1.0) * W
        - S1 / t1
        - S2 / t2
    )


def score(params: WeibullParams, data: PairedData) -> np.ndarray:
    """Gradient of ``log_likelihood`` in (alpha, theta1, theta2)."""
    a, t1, t2 = params.as_tuple()
    x, y = data.x, data.y
    p1, p2 = power_sums(a, x), power_sums(a, y)
    W = x.log_times.sum() + y.log_times.sum()
    return np.array(
        [
            (x.d + y.d) / a + W - p1.dS / t1 - p2.dS / t2,
            -x.d / t1 + p1.S / t1**2,
            -y.d / t2 + p2.S / t2**2,
        ]
    )


def profile_scales(alpha: float, data: PairedData) -> tuple[float, float]:
    """Scale estimates maximising the likelihood for fixed ``alpha``."""
    _check_positive(alpha=alpha)
    return power_sums(alpha, data.x).S / data.x.d, power_sums(alpha, data.y).S / data.y.d


def known_alpha_mle(alpha: float, data: PairedData) -> float:
    """Explicit MLE of R when the common shape is known."""
    _check_positive(alpha=alpha)
    S1 = power_sums(alpha, data.x).S
    S2 = power_sums(alpha, data.y).S
    return S1 / (S1 + data.x.d / data.y.d * S2)


@dataclass(frozen=True)
class MleFit:
    alpha: float
    theta1: float
    theta2: float
    r: float
    iterations: int
    converged: bool
    method: str = "fixed-point"

    @property
    def params(self) -> WeibullParams:
        return WeibullParams(self.alpha, self.theta1, self.theta2)


class _Profile:
    """Precomputed per-sample arrays for repeated evaluation in alpha."""

    def __init__(self, data: PairedData):
        self.data = data
        self.lx, self.wx = _points(data.x)
        self.ly, self.wy = _points(data.y)
        self.d1, self.d2 = data.x.d, data.y.d
        self.d = self.d1 + self.d2
        self.W = float(data.x.log_times.sum() + data.y.log_times.sum())

    def weighted_means(self, alpha):
        px = _power_sums(alpha, self.lx, self.wx)
        py = _power_sums(alpha, self.ly, self.wy)
        return px.mean_log, py.mean_log

    def k(self, alpha: float) -> float:
        mx, my = self.weighted_means(alpha)
        return self.d / (self.d1 * mx + self.d2 * my - self.W)

    def score(self, alpha: float) -> float:
        """Derivative of the profile log-likelihood; strictly decreasing in alpha."""
        mx, my = self.weighted_means(alpha)
        return self.d / alpha + self.W - self.d1 * mx - self.d2 * my

    def score_limit(self) -> float:
        """Limit of ``score`` as alpha -> infinity (always <= 0)."""
        out = self.W
        for logs, w, d in ((self.lx, self.wx, self.d1), (self.ly, self.wy, self.d2)):
            out -= d * logs[w > 0].max()
        return out


def _check_identifiable(prof: _Profile):
    if prof.d < 2:
        raise DegenerateData("need at least two observed failures in total")
    scale = 1.0 + abs(prof.W)
    if prof.score_limit() > -1e-12 * scale:
        raise DegenerateData("all observations coincide; the shape is not identifiable")


def _finish(prof: _Profile, alpha: float, iterations: int, method: str) -> MleFit:
    t1, t2 = profile_scales(alpha, prof.data)
    return MleFit(alpha, t1, t2, t1 / (t1 + t2), iterations, True, method)


def _bracketed_root(prof: _Profile, init: float, max_iter: int) -> tuple[float, int]:
    lo = hi = init
    for _ in range(200):
        if prof.score(lo) > 0:
            break
        lo *= 0.5
    else:
        raise NonConvergence("could not bracket the shape estimate from below")
    for _ in range(200):
        if prof.score(hi) < 0:
            break
        hi *= 2.0
    else:
        raise NonConvergence("could not bracket the shape estimate from above")
    try:
        root, res = brentq(prof.score, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps,
                           maxiter=max_iter, full_output=True)
    except RuntimeError as exc:
        raise NonConvergence(str(exc)) from exc
    if not res.converged:
        raise NonConvergence("Brent search did not converge")
    return root, res.iterations


def moment_init(data: PairedData) -> float:
    """Starting shape from the slope of a Weibull probability plot.

    Each sample contributes ``(log t_i, log(-log(1 - i/(n+1))))`` pairs; a
    common slope is fitted with per-sample intercepts.
    """
    xs, ys = [], []
    for s in (data.x, data.y):
        p = np.arange(1, s.d + 1) / (s.n + 1)
        lx = s.log_times
        ly = np.log(-np.log1p(-p))
        xs.append(lx - lx.mean())
        ys.append(ly - ly.mean())
    xs, ys = np.concatenate(xs), np.concatenate(ys)
    sxx = float(xs @ xs)
    slope = float(xs @ ys) / sxx if sxx > 0 else DEFAULT_INIT
    return slope if slope > 0 and math.isfinite(slope) else DEFAULT_INIT


def solve_alpha_fixed_point(
    data: PairedData,
    init: float | str = DEFAULT_INIT,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> MleFit:
    """MLE of (alpha, theta1, theta2, R) by iterating ``alpha <- k(alpha)``.

    If the iteration stops contracting (``|step|`` not smaller than it was
    ``CYCLE_WINDOW`` steps earlier), leaves the positive axis, or runs out of
    iterations, the root of the profile score is found by bracketing and
    Brent's method instead.
    """
    prof = _Profile(data)
    _check_identifiable(prof)
    if init == "moment":
        init = moment_init(data)
    if not (isinstance(init, (int, float)) and init > 0):
        raise DomainError(f"init must be positive or 'moment', got {init!r}")
    alpha = float(init)
    steps: list[float] = []
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        for it in range(1, max_iter + 1):
            new = prof.k(alpha)
            if not (math.isfinite(new) and new > 0):
                break
            step = abs(new - alpha)
            alpha = new
            if step <= tol:
                return _finish(prof, alpha, it, "fixed-point")
            steps.append(step)
            if len(steps) > CYCLE_WINDOW and step >= steps[-1 - CYCLE_WINDOW]:
                break
        root, n_brent = _bracketed_root(prof, float(init), max_iter)
    return _finish(prof, root, len(steps) + n_brent, "bracketed")


def profile_score_root(data: PairedData, init: float = DEFAULT_INIT) -> float:
    """Shape estimate from the bracketed root of the profile score alone."""
    prof = _Profile(data)
    _check_identifiable(prof)
    return _bracketed_root(prof, init, DEFAULT_MAX_ITER)[0]


def fixed_point_map(alpha: float, data: PairedData) -> float:
    """The map ``k(alpha)`` whose fixed point is the shape MLE."""
    _check_positive(alpha=alpha)
    return _Profile(data).k(alpha)
