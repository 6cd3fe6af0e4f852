"""Hybrid (Type-I / Type-II) censoring.

A life test on ``n`` units stops at ``min(X_(r), T)``.  Case I: the ``r``-th
failure came first, so ``d = r`` failures are seen and the test ends at
``u = X_(r)``.  Case II: time ``T`` came first, so ``d < r`` failures are seen
and ``u = T``.  The remaining ``n - d`` units are right-censored at ``u``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .distributions import as_generator, weibull_sample
from .errors import DomainError, SizeMismatch, ZeroFailures


class CaseTag(str, enum.Enum):
    CASE_I = "CaseI"
    CASE_II = "CaseII"


@dataclass(frozen=True)
class HybridScheme:
    """Design of one life test: ``n`` units, stop at ``r`` failures or time ``T``."""

    n: int
    r: int
    T: float = math.inf

    def __post_init__(self):
        if not (1 <= self.r <= self.n):
            raise DomainError(f"need 1 <= r <= n, got r={self.r}, n={self.n}")
        if not self.T > 0:
            raise DomainError(f"T must be positive, got {self.T!r}")


@dataclass(frozen=True, eq=False)
class HybridSample:
    """Observed failures of one hybrid-censored life test.

    ``times`` holds the ``d`` observed failures in nondecreasing order (ties are
    kept); ``u`` is the time at which the test stopped.
    """

    scheme: HybridScheme
    times: np.ndarray
    d: int
    u: float
    case: CaseTag
    log_times: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        times.setflags(write=False)
        object.__setattr__(self, "times", times)
        d = self.d
        if d < 1:
            raise ZeroFailures("hybrid sample has no observed failures")
        if len(times) != d:
            raise SizeMismatch(f"d={d} but {len(times)} failure times given")
        if d > self.scheme.n:
            raise SizeMismatch(f"d={d} exceeds n={self.scheme.n}")
        if np.any(times <= 0) or not np.all(np.isfinite(times)):
            raise DomainError("failure times must be positive and finite")
        if np.any(np.diff(times) < 0):
            raise DomainError("failure times must be sorted")
        if self.case is CaseTag.CASE_I:
            if d != self.scheme.r or self.u != times[-1]:
                raise DomainError("Case I requires d = r and u = last failure")
        else:
            if d >= self.scheme.r or self.u != self.scheme.T or times[-1] > self.scheme.T:
                raise DomainError("Case II requires d < r, u = T and all failures <= T")
        logs = np.log(times)
        logs.setflags(write=False)
        object.__setattr__(self, "log_times", logs)

    @property
    def n(self) -> int:
        return self.scheme.n

    @property
    def n_censored(self) -> int:
        return self.scheme.n - self.d

    def __eq__(self, other):
        if not isinstance(other, HybridSample):
            return NotImplemented
        return (
            self.scheme == other.scheme
            and self.d == other.d
            and self.u == other.u
            and self.case is other.case
            and np.array_equal(self.times, other.times)
        )

    def __hash__(self):
        return hash((self.scheme, self.d, self.u, self.case, self.times.tobytes()))

    def scaled(self, c: float) -> "HybridSample":
        """The same test on lifetimes multiplied by ``c`` (T scales too)."""
        scheme = HybridScheme(self.scheme.n, self.scheme.r, self.scheme.T * c)
        u = scheme.T if self.case is CaseTag.CASE_II else self.times[-1] * c
        return HybridSample(scheme, self.times * c, self.d, u, self.case)


@dataclass(frozen=True)
class PairedData:
    """Strength sample ``x`` and stress sample ``y``."""

    x: HybridSample
    y: HybridSample

    def swapped(self) -> "PairedData":
        return PairedData(self.y, self.x)


def _censor_sorted(ordered: np.ndarray, scheme: HybridScheme) -> HybridSample:
    r, T = scheme.r, scheme.T
    x_r = ordered[r - 1]
    if x_r <= T and math.isfinite(x_r):
        return HybridSample(scheme, ordered[:r], r, float(x_r), CaseTag.CASE_I)
    if not math.isfinite(T):
        raise DomainError("fewer than r failures recorded and no finite time budget")
    d = int(np.searchsorted(ordered, T, side="right"))
    if d == 0:
        raise ZeroFailures(f"no failure observed before T={T}")
    return HybridSample(scheme, ordered[:d], d, float(T), CaseTag.CASE_II)


def apply_scheme(raw, scheme: HybridScheme) -> HybridSample:
    """Censor a full set of ``n`` lifetimes according to ``scheme``."""
    raw = np.asarray(raw, dtype=float)
    if raw.ndim != 1 or raw.size != scheme.n:
        raise SizeMismatch(f"scheme expects n={scheme.n} lifetimes, got {raw.size}")
    if np.any(~(raw > 0)) or not np.all(np.isfinite(raw)):
        raise DomainError("lifetimes must be positive and finite")
    return _censor_sorted(np.sort(raw, kind="stable"), scheme)


def recensor(failures, scheme: HybridScheme) -> HybridSample:
    """Apply ``scheme`` to ``failures`` with the other ``n - len(failures)`` units unfailed.

    Units without a recorded failure are treated as surviving past every
    observed time, which is what ``apply_scheme`` would see for units censored
    at the stopping time.
    """
    ordered = np.sort(np.asarray(failures, dtype=float), kind="stable")
    if ordered.size > scheme.n:
        raise SizeMismatch("more failures than units on test")
    padded = np.concatenate([ordered, np.full(scheme.n - ordered.size, np.inf)])
    return _censor_sorted(padded, scheme)


def generate_hybrid_sample(
    scheme: HybridScheme, alpha: float, theta: float, seed=None, retries: int = 0
) -> HybridSample:
    """Simulate one hybrid-censored Weibull sample.

    ``retries`` extra draws are attempted (from the same generator) when a
    draw has no failure before ``T``; with ``retries=0`` ZeroFailures is raised
    at once.
    """
    rng = as_generator(seed)
    for attempt in range(retries + 1):
        raw = weibull_sample(scheme.n, alpha, theta, rng)
        try:
            return apply_scheme(raw, scheme)
        except ZeroFailures:
            if attempt == retries:
                raise
    raise AssertionError("unreachable")
