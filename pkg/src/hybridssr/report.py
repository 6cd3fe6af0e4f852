"""Bundle every estimate of R for one data set."""
from __future__ import annotations

from dataclasses import dataclass, field

from .amle import amle_fit
from .bayes import PRIOR_1, PriorSpec, credible_interval, gibbs_chain, posterior_summary
from .censoring import PairedData
from .intervals import Interval, asymptotic_ci, bootstrap_cis
from .mle import solve_alpha_fixed_point
from .rng import derive_seed


@dataclass
class EstimateReport:
    """Point estimates and intervals keyed by label (``"MLE"``, ``"AMLE"``, ...)."""

    estimates: dict[str, float] = field(default_factory=dict)
    intervals: dict[str, Interval] = field(default_factory=dict)
    parameters: dict[str, dict[str, float]] = field(default_factory=dict)
    info: dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "estimates": dict(self.estimates),
            "intervals": {
                k: {"lower": v.lower, "upper": v.upper, "level": v.level,
                    "method": v.method.value, "clamped": v.clamped}
                for k, v in self.intervals.items()
            },
            "parameters": {k: dict(v) for k, v in self.parameters.items()},
            "info": dict(self.info),
        }

    def render(self, digits: int = 4) -> str:
        lines = []
        for k, v in self.estimates.items():
            lines.append(f"{k:<22s} R = {v:.{digits}f}")
        for k, iv in self.intervals.items():
            flag = "  (clamped)" if iv.clamped else ""
            lines.append(f"{k:<22s} {100 * iv.level:.0f}% ({iv.lower:.{digits}f}, {iv.upper:.{digits}f}){flag}")
        for k, p in self.parameters.items():
            vals = ", ".join(f"{n}={x:.{digits}f}" for n, x in p.items())
            lines.append(f"{k:<22s} {vals}")
        return "\n".join(lines)


def estimate_all(
    data: PairedData,
    gamma: float = 0.05,
    nboot: int = 250,
    seed=None,
    bayes: bool = True,
    prior: PriorSpec = PRIOR_1,
    draws: int = 10_000,
    burn_in: int = 1_000,
    recensor_on: bool = True,
) -> EstimateReport:
    """MLE, AMLE, asymptotic and bootstrap intervals and, optionally, the Bayes estimate."""
    rep = EstimateReport()
    mle = solve_alpha_fixed_point(data)
    amle = amle_fit(data)
    rep.estimates["MLE"] = mle.r
    rep.estimates["AMLE"] = amle.r
    rep.parameters["MLE"] = {"alpha": mle.alpha, "theta1": mle.theta1, "theta2": mle.theta2}
    rep.parameters["AMLE"] = {"alpha": amle.alpha, "theta1": amle.theta1, "theta2": amle.theta2}
    rep.intervals["MLE asymptotic"] = asymptotic_ci(mle, data, gamma)
    rep.intervals["AMLE asymptotic"] = asymptotic_ci(amle, data, gamma)
    rep.info["mle_iterations"] = mle.iterations
    rep.info["mle_method"] = mle.method
    if nboot:
        bp, bt = bootstrap_cis(data, nboot, gamma, derive_seed(seed, 0), recensor_on, fit=mle)
        rep.intervals["Boot-p"] = bp
        rep.intervals["Boot-t"] = bt
        rep.info["nboot"] = nboot
    if bayes:
        chain = gibbs_chain(data, prior, draws, burn_in, seed=derive_seed(seed, 1))
        rep.estimates["Bayes"] = posterior_summary(chain)[0]
        rep.intervals["Bayes credible"] = credible_interval(chain, gamma)
        rep.info["acceptance_rate"] = chain.acceptance_rate
    return rep
