"""Estimation of R = P(X > Y) for Weibull strength and stress under hybrid censoring."""

__version__ = "0.1.0"

from .amle import AmleFit, amle_fit, amle_mixed_cases, taylor_coeffs
from .bayes import (
    PRIOR_1,
    PRIOR_2,
    PosteriorDraws,
    PriorSpec,
    credible_interval,
    gibbs_chain,
    posterior_summary,
)
from .censoring import CaseTag, HybridSample, HybridScheme, PairedData, apply_scheme, generate_hybrid_sample
from .distributions import WeibullParams, stress_strength_r
from .intervals import Interval, asymptotic_ci, boot_p_ci, boot_t_ci, delta_variance, observed_information
from .mle import MleFit, known_alpha_mle, log_likelihood, profile_scales, solve_alpha_fixed_point
from .report import EstimateReport, estimate_all
