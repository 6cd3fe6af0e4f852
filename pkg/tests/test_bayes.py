import csv
import math

import numpy as np
import pytest
from scipy import integrate, stats

from hybridssr.bayes import (
    PRIOR_1,
    PRIOR_2,
    PriorSpec,
    credible_interval,
    gibbs_chain,
    hpd_interval,
    log_conditional_alpha,
    mh_step_alpha,
    posterior_summary,
    split_half_means,
)
from hybridssr.bayes import _accept
from hybridssr.censoring import PairedData
from hybridssr.distributions import WeibullParams, inverse_gamma_sample
from hybridssr.errors import DomainError, EmptyChain, ImproperPosterior, InsufficientDraws
from hybridssr.mle import log_likelihood, power_sums, solve_alpha_fixed_point

from conftest import complete, simulated_pair


@pytest.fixture(scope="module")
def small():
    return simulated_pair(21)


def test_conditional_tracks_likelihood(small):
    prior = PriorSpec(a3=1.0)
    diffs = [
        log_conditional_alpha(a, 0.9, 1.1, prior, small) - log_likelihood(WeibullParams(a, 0.9, 1.1), small)
        for a in (0.3, 0.8, 1.5, 3.0)
    ]
    np.testing.assert_allclose(diffs, diffs[0], atol=1e-9)


def test_conditional_finite_over_range(small):
    for a in np.geomspace(1e-6, 50, 25):
        assert math.isfinite(log_conditional_alpha(a, 1.0, 1.0, PRIOR_1, small))
    with pytest.raises(DomainError):
        log_conditional_alpha(0.0, 1.0, 1.0, PRIOR_1, small)


def test_accept_rule():
    assert _accept(-3.0, -3.0, 0.999999)
    assert _accept(-3.0, -1.0, 0.5)
    assert not _accept(0.0, math.log(0.25), 0.3)
    assert _accept(0.0, math.log(0.25), 0.2)


def test_mh_rejects_nonpositive(small):
    moves = [mh_step_alpha(1e-3, 5.0, 1.0, 1.0, PRIOR_1, small, seed=s) for s in range(200)]
    for value, accepted in moves:
        assert value > 0
        if not accepted:
            assert value == 1e-3


def test_acceptance_rate_reasonable(small):
    draws = gibbs_chain(small, PRIOR_1, m=2000, burn_in=200, seed=1, proposal_sd=0.3)
    assert 0.05 < draws.acceptance_rate < 0.95


def test_scale_draw_with_fixed_shape(small):
    a = 1.5
    draws = gibbs_chain(small, PRIOR_2, m=100_000, burn_in=0, init=(a, 1.0, 1.0), seed=2, proposal_sd=0.0)
    assert np.all(draws.alpha == a)
    S1 = power_sums(a, small.x).S
    expected = (PRIOR_2.b1 + S1) / (small.x.d + PRIOR_2.a1 - 1)
    assert draws.theta1.mean() == pytest.approx(expected, rel=0.02)


def test_inverse_gamma_quartiles():
    a, b = 7.0, 3.0
    v = inverse_gamma_sample(a, b, seed=0, size=200_000)
    for q in (0.25, 0.5, 0.75):
        x = stats.invgamma.ppf(q, a, scale=b)
        assert np.mean(v <= x) == pytest.approx(q, abs=0.01)


def quadrature_posterior_mean_r(data, prior):
    # theta1, theta2 integrate out in closed form given alpha; R then needs a 1-D inner integral
    d1, d2 = data.x.d, data.y.d
    W = float(data.x.log_times.sum() + data.y.log_times.sum())
    k1, k2 = d1 + prior.a1, d2 + prior.a2

    def log_marginal(a):
        c1 = prior.b1 + power_sums(a, data.x).S
        c2 = prior.b2 + power_sums(a, data.y).S
        return (d1 + d2 + prior.a3 - 1) * math.log(a) + a * W - prior.b3 * a - k1 * math.log(c1) - k2 * math.log(c2)

    def mean_r(a):
        c1 = prior.b1 + power_sums(a, data.x).S
        c2 = prior.b2 + power_sums(a, data.y).S
        # theta_i = c_i / G_i with G_i ~ Gamma(k_i); R = c1 G2 / (c1 G2 + c2 G1)
        f = lambda w: w / (w + (1 - w) * c2 / c1)
        # w = G2 / (G1 + G2) ~ Beta(k2, k1)
        return integrate.quad(lambda w: f(w) * stats.beta.pdf(w, k2, k1), 0, 1)[0]

    grid = np.linspace(0.2, 5.0, 400)
    lm = np.array([log_marginal(a) for a in grid])
    w = np.exp(lm - lm.max())
    mr = np.array([mean_r(a) for a in grid])
    return float(np.trapezoid(w * mr, grid) / np.trapezoid(w, grid))


def test_posterior_mean_matches_quadrature(small):
    truth = quadrature_posterior_mean_r(small, PRIOR_2)
    draws = gibbs_chain(small, PRIOR_2, m=40_000, burn_in=2000, seed=8, proposal_sd=0.3,
                        theta_given_current=True)
    assert posterior_summary(draws)[0] == pytest.approx(truth, abs=0.005)


def test_label_symmetry(small):
    a = gibbs_chain(small, PRIOR_2, m=20_000, seed=3, proposal_sd=0.3)
    b = gibbs_chain(small.swapped(), PRIOR_2.swapped(), m=20_000, seed=4, proposal_sd=0.3)
    assert posterior_summary(a)[0] + posterior_summary(b)[0] == pytest.approx(1.0, abs=0.01)


def test_deterministic(small):
    a = gibbs_chain(small, PRIOR_1, m=500, burn_in=50, seed=12)
    b = gibbs_chain(small, PRIOR_1, m=500, burn_in=50, seed=12)
    np.testing.assert_array_equal(a.r, b.r)
    np.testing.assert_array_equal(a.alpha, b.alpha)


@pytest.mark.parametrize("current", [False, True])
def test_engines_agree(small, current):
    kw = dict(m=300, burn_in=30, seed=5, proposal_sd=0.4, theta_given_current=current)
    a = gibbs_chain(small, PRIOR_2, engine="numba", **kw)
    b = gibbs_chain(small, PRIOR_2, engine="python", **kw)
    np.testing.assert_allclose(a.r, b.r, rtol=1e-12)
    np.testing.assert_allclose(a.alpha, b.alpha, rtol=1e-12)
    assert a.acceptance_rate == b.acceptance_rate


def test_summary_examples():
    mean, var = posterior_summary(np.array([0.2, 0.6]))
    assert mean == pytest.approx(0.4, abs=1e-15)
    assert var == pytest.approx(0.04, abs=1e-15)
    r = np.random.default_rng(0).random(10_001)
    running = 0.0
    for i, v in enumerate(r, 1):
        running += (v - running) / i
    assert posterior_summary(r)[0] == pytest.approx(running, abs=1e-14)


def test_credible_interval_indices():
    r = np.arange(1, 101) / 100
    ci = credible_interval(r, 0.05)
    assert (ci.lower, ci.upper) == (0.02, 0.97)
    with pytest.raises(InsufficientDraws):
        credible_interval(np.array([0.1, 0.2, 0.3]), 0.05)
    with pytest.raises(EmptyChain):
        posterior_summary(np.array([]))


def test_hpd_is_no_longer_than_equal_tail(small):
    draws = gibbs_chain(small, PRIOR_1, m=4000, seed=6)
    assert hpd_interval(draws).length <= credible_interval(draws).length + 1e-15


def test_chain_mixes(small):
    draws = gibbs_chain(small, PRIOR_1, m=10_000, seed=7)
    first, second = split_half_means(draws)
    assert abs(first - second) < 0.02


def test_improper_posterior():
    from types import SimpleNamespace

    from hybridssr.bayes import check_proper

    stub = SimpleNamespace(x=SimpleNamespace(d=0), y=SimpleNamespace(d=1))
    with pytest.raises(ImproperPosterior):
        check_proper(PRIOR_1, stub)
    with pytest.raises(DomainError):
        PriorSpec(a3=-1.0)


def test_csv_export(tmp_path, small):
    draws = gibbs_chain(small, PRIOR_1, m=10, burn_in=5, seed=0)
    path = tmp_path / "draws.csv"
    draws.to_csv(path)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["sweep", "alpha", "theta1", "theta2", "r"]
    assert len(rows) == 11
    assert int(rows[1][0]) == 6
    assert float(rows[-1][4]) == draws.r[-1]
