"""Monte Carlo study of the estimators over a grid of censoring schemes."""
from __future__ import annotations

import configparser
import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .amle import amle_fit
from .bayes import PRIOR_1, PRIOR_2, PriorSpec, credible_interval, gibbs_chain, posterior_summary
from .censoring import HybridScheme, PairedData, generate_hybrid_sample
from .distributions import WeibullParams
from .errors import CellAborted, DomainError, HybridSSRError
from .intervals import (
    asymptotic_ci,
    bootstrap_replicates,
    boot_p_from,
    boot_t_from,
    delta_variance,
    delta_variance_generic,
    observed_information,
)
from .mle import solve_alpha_fixed_point
from .rng import derive_rng, derive_seed

MAX_RETRIES = 3
MAX_DISCARD_FRACTION = 0.10
B_AGREEMENT_RTOL = 1e-10

# Default design: n = m = 30, (alpha, theta1, theta2) = (1.5, 1, 1).
DEFAULT_SCHEMES = ((20, 1.0), (25, 1.0), (20, 2.0), (25, 2.0), (30, 2.0))


@dataclass(frozen=True)
class ExperimentConfig:
    n: int = 30
    m: int = 30
    true_params: WeibullParams = WeibullParams(1.5, 1.0, 1.0)
    scheme_grid: tuple[tuple[tuple[int, float], tuple[int, float]], ...] = tuple(
        (s1, s2) for s1 in DEFAULT_SCHEMES for s2 in DEFAULT_SCHEMES
    )
    replications: int = 500
    nboot: int = 250
    priors: tuple[tuple[str, PriorSpec], ...] = (("Prior1", PRIOR_1), ("Prior2", PRIOR_2))
    gamma: float = 0.05
    master_seed: int = 20240601
    draws: int = 10_000
    burn_in: int = 1_000
    recensor_on: bool = True

    def __post_init__(self):
        if self.replications < 1:
            raise DomainError("replications must be >= 1")
        if not self.scheme_grid:
            raise DomainError("scheme grid is empty")

    def schemes(self, cell: int) -> tuple[HybridScheme, HybridScheme]:
        (r1, t1), (r2, t2) = self.scheme_grid[cell]
        return HybridScheme(self.n, r1, t1), HybridScheme(self.m, r2, t2)

    @property
    def true_r(self) -> float:
        return self.true_params.reliability

    def estimator_names(self) -> list[str]:
        return ["MLE", "AMLE"] + [f"Bayes{name}" for name, _ in self.priors]

    def interval_names(self) -> list[str]:
        names = ["MLE asymptotic", "AMLE asymptotic"]
        if self.nboot:
            names += ["Boot-t", "Boot-p"]
        return names + [f"Credible{name}" for name, _ in self.priors]


def _parse_pairs(text: str) -> list[tuple[int, float]]:
    out = []
    for item in text.replace("\n", ";").split(";"):
        item = item.strip()
        if not item:
            continue
        r, t = item.split(",")
        out.append((int(r), float(t)))
    return out


def load_config(path) -> ExperimentConfig:
    """Read an INI-style experiment file.

    ``[experiment]`` holds scalars, ``schemes1``/``schemes2`` are ``r,T`` lists
    separated by ``;`` whose product forms the grid (first list varies
    slowest), and each ``[prior.NAME]`` section gives a1..b3.
    """
    cp = configparser.ConfigParser()
    with open(path, encoding="utf-8") as fh:
        cp.read_file(fh)
    e = cp["experiment"]
    s1 = _parse_pairs(e.get("schemes1", ""))
    s2 = _parse_pairs(e.get("schemes2", e.get("schemes1", "")))
    priors = []
    for sec in cp.sections():
        if sec.startswith("prior."):
            p = cp[sec]
            priors.append((sec[len("prior."):], PriorSpec(**{k: p.getfloat(k, 0.0) for k in
                                                          ("a1", "b1", "a2", "b2", "a3", "b3")})))
    return ExperimentConfig(
        n=e.getint("n", 30),
        m=e.getint("m", 30),
        true_params=WeibullParams(e.getfloat("alpha", 1.5), e.getfloat("theta1", 1.0), e.getfloat("theta2", 1.0)),
        scheme_grid=tuple((a, b) for a in s1 for b in s2),
        replications=e.getint("replications", 500),
        nboot=e.getint("nboot", 250),
        priors=tuple(priors),
        gamma=e.getfloat("gamma", 0.05),
        master_seed=e.getint("master_seed", 20240601),
        draws=e.getint("draws", 10_000),
        burn_in=e.getint("burn_in", 1_000),
        recensor_on=e.getboolean("boot_recensor", True),
    )


@dataclass
class Replication:
    """Everything one successful replication contributes to its cell."""

    estimates: dict[str, float]
    lengths: dict[str, float]
    covers: dict[str, bool]
    amle_E: float
    b_mismatch: bool
    credible_holds_mean: dict[str, bool]
    attempts: int


def _one_replication(config: ExperimentConfig, cell: int, rep: int, attempt: int) -> Replication:
    s1, s2 = config.schemes(cell)
    p = config.true_params
    rng = derive_rng(config.master_seed, cell, rep, attempt)
    data = PairedData(
        generate_hybrid_sample(s1, p.alpha, p.theta1, rng),
        generate_hybrid_sample(s2, p.alpha, p.theta2, rng),
    )
    R, g = config.true_r, config.gamma
    mle = solve_alpha_fixed_point(data)
    amle = amle_fit(data)
    est = {"MLE": mle.r, "AMLE": amle.r}
    ivs = {"MLE asymptotic": asymptotic_ci(mle, data, g), "AMLE asymptotic": asymptotic_ci(amle, data, g)}

    info = observed_information(mle.params, data)
    b_closed = delta_variance(mle.params, info)
    b_generic = delta_variance_generic(mle.params, info)
    mismatch = abs(b_closed - b_generic) > B_AGREEMENT_RTOL * abs(b_generic)

    if config.nboot:
        boot = bootstrap_replicates(data, config.nboot, derive_seed(config.master_seed, cell, rep, attempt, 1),
                                    studentize=True, recensor_on=config.recensor_on, fit=mle)
        ivs["Boot-t"] = boot_t_from(boot, g)
        ivs["Boot-p"] = boot_p_from(boot, g)
    holds = {}
    for k, (name, prior) in enumerate(config.priors):
        chain = gibbs_chain(data, prior, config.draws, config.burn_in,
                            seed=derive_seed(config.master_seed, cell, rep, attempt, 2, k))
        mean = posterior_summary(chain)[0]
        est[f"Bayes{name}"] = mean
        ci = credible_interval(chain, g)
        ivs[f"Credible{name}"] = ci
        holds[name] = ci.contains(mean)
    return Replication(
        est,
        {k: v.length for k, v in ivs.items()},
        {k: v.contains(R) for k, v in ivs.items()},
        amle.E,
        mismatch,
        holds,
        attempt + 1,
    )


def run_replication(config: ExperimentConfig, cell: int, rep: int) -> Replication | None:
    """One replication with up to ``MAX_RETRIES`` fresh draws; None if all fail."""
    for attempt in range(MAX_RETRIES + 1):
        try:
            return _one_replication(config, cell, rep, attempt)
        except HybridSSRError:
            continue
    return None


def _replication_task(args):
    return run_replication(*args)


@dataclass
class CellResult:
    cell: int
    scheme1: tuple[int, float]
    scheme2: tuple[int, float]
    replications: int
    average_estimate: dict[str, float]
    mse: dict[str, float]
    average_length: dict[str, float]
    coverage: dict[str, float]
    discarded: int = 0
    retried: int = 0
    amle_nonnegative_E: int = 0
    b_mismatches: int = 0
    credible_misses_mean: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


def _reduce(config: ExperimentConfig, cell: int, outcomes: list[Replication | None]) -> CellResult:
    good = [o for o in outcomes if o is not None]
    discarded = len(outcomes) - len(good)
    if discarded > MAX_DISCARD_FRACTION * len(outcomes) or not good:
        raise CellAborted(f"cell {cell}: {discarded} of {len(outcomes)} replications failed")
    R = config.true_r
    ae, mse, length, cov = {}, {}, {}, {}
    for name in config.estimator_names():
        v = np.array([o.estimates[name] for o in good])
        ae[name] = float(v.mean())
        mse[name] = float(np.mean((v - R) ** 2))
    for name in config.interval_names():
        length[name] = float(np.mean([o.lengths[name] for o in good]))
        cov[name] = float(np.mean([o.covers[name] for o in good]))
    return CellResult(
        cell, tuple(config.scheme_grid[cell][0]), tuple(config.scheme_grid[cell][1]), len(good),
        ae, mse, length, cov, discarded,
        sum(o.attempts > 1 for o in good),
        sum(o.amle_E >= 0 for o in good),
        sum(o.b_mismatch for o in good),
        sum(not all(o.credible_holds_mean.values()) for o in good),
    )


def run_cell(config: ExperimentConfig, cell: int, workers: int = 1, executor=None) -> CellResult:
    """Simulate one grid cell.

    Replication ``i`` draws from a stream keyed on ``(master_seed, cell, i)``,
    so the result does not depend on ``workers``.
    """
    tasks = [(config, cell, i) for i in range(config.replications)]
    if executor is not None:
        outcomes = list(executor.map(_replication_task, tasks, chunksize=8))
    elif workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            outcomes = list(ex.map(_replication_task, tasks, chunksize=8))
    else:
        outcomes = [run_replication(*t) for t in tasks]
    return _reduce(config, cell, outcomes)


@dataclass
class TableResult:
    config: ExperimentConfig
    cells: list[CellResult] = field(default_factory=list)

    CSV_COLUMNS = ("cell", "r1", "T1", "r2", "T2", "kind", "name", "average_estimate", "mse",
                   "average_length", "coverage", "replications", "discarded")

    def rows(self) -> list[dict]:
        out = []
        for c in self.cells:
            base = {"cell": c.cell, "r1": c.scheme1[0], "T1": c.scheme1[1], "r2": c.scheme2[0],
                    "T2": c.scheme2[1], "replications": c.replications, "discarded": c.discarded}
            for name in c.average_estimate:
                out.append({**base, "kind": "estimator", "name": name,
                            "average_estimate": c.average_estimate[name], "mse": c.mse[name],
                            "average_length": "", "coverage": ""})
            for name in c.average_length:
                out.append({**base, "kind": "interval", "name": name, "average_estimate": "", "mse": "",
                            "average_length": c.average_length[name], "coverage": c.coverage[name]})
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=self.CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for row in self.rows():
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"true_r": self.config.true_r, "cells": [c.to_dict() for c in self.cells]}, indent=2)

    def render(self) -> str:
        """Fixed-width text version of the two result tables."""
        est = self.config.estimator_names()
        ivs = self.config.interval_names()
        head = f"{'(r1,T1)':>9} {'(r2,T2)':>9}      " + "".join(f"{e:>13}" for e in est)
        lines = ["Average estimates (A.E) and MSE of R", head, "-" * len(head)]
        for c in self.cells:
            s1 = f"({c.scheme1[0]},{c.scheme1[1]:g})"
            s2 = f"({c.scheme2[0]},{c.scheme2[1]:g})"
            lines.append(f"{s1:>9} {s2:>9}  A.E " + "".join(f"{c.average_estimate[e]:>13.4f}" for e in est))
            lines.append(f"{'':>9} {'':>9}  MSE " + "".join(f"{c.mse[e]:>13.4f}" for e in est))
        head2 = f"{'(r1,T1)':>9} {'(r2,T2)':>9} " + "".join(f"{n:>17}" for n in ivs)
        lines += ["", "Average interval lengths", head2, "-" * len(head2)]
        for c in self.cells:
            s1 = f"({c.scheme1[0]},{c.scheme1[1]:g})"
            s2 = f"({c.scheme2[0]},{c.scheme2[1]:g})"
            lines.append(f"{s1:>9} {s2:>9} " + "".join(f"{c.average_length[n]:>17.4f}" for n in ivs))
        return "\n".join(lines)


def run_table(config: ExperimentConfig, cells=None, workers: int = 1) -> TableResult:
    """Run every cell (or the listed cell indices) of the grid."""
    indices = range(len(config.scheme_grid)) if cells is None else cells
    result = TableResult(config)
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            for i in indices:
                result.cells.append(run_cell(config, i, executor=ex))
    else:
        for i in indices:
            result.cells.append(run_cell(config, i))
    return result


def casestudy(scheme_id: int, seed: int = 0, nboot: int = 250, draws: int = 10_000, burn_in: int = 1_000,
              gamma: float = 0.05):
    """All estimates for the embedded fibre-strength data under scheme 1 or 2."""
    from .datasets import casestudy_data
    from .report import estimate_all

    data = casestudy_data(scheme_id)
    rep = estimate_all(data, gamma=gamma, nboot=nboot, seed=seed, draws=draws, burn_in=burn_in)
    rep.info["scheme"] = scheme_id
    rep.info["seed"] = seed
    return rep
