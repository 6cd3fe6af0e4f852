import math

import numpy as np
import pytest

import hybridssr.intervals as iv
from hybridssr.censoring import PairedData
from hybridssr.distributions import WeibullParams
from hybridssr.errors import DegenerateData
from hybridssr.intervals import (
    Interval,
    Method,
    asymptotic_ci,
    boot_p_ci,
    boot_t_ci,
    bootstrap_cis,
    bootstrap_replicates,
    delta_variance,
    delta_variance_generic,
    empirical_quantile,
    observed_information,
)
from hybridssr.mle import score, solve_alpha_fixed_point

from conftest import complete, simulated_pair


def fd_information(params, data, h=1e-6):
    x = np.array(params.as_tuple())
    out = np.empty((3, 3))
    for j in range(3):
        step = h * x[j]
        up, dn = x.copy(), x.copy()
        up[j] += step
        dn[j] -= step
        out[:, j] = -(score(WeibullParams(*up), data) - score(WeibullParams(*dn), data)) / (2 * step)
    return out


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_information_matches_finite_differences(seed):
    data = simulated_pair(seed)
    p = WeibullParams(1.3, 0.8, 1.2)
    I = observed_information(p, data).matrix
    fd = fd_information(p, data)
    assert I[1, 2] == 0.0 and I[2, 1] == 0.0
    np.testing.assert_allclose(I, fd, rtol=1e-5, atol=1e-8)


def test_scale_curvature_at_mle(scheme1_data):
    fit = solve_alpha_fixed_point(scheme1_data)
    I = observed_information(fit.params, scheme1_data).matrix
    assert I[1, 1] == pytest.approx(scheme1_data.x.d / fit.theta1**2, rel=1e-9)
    assert I[2, 2] == pytest.approx(scheme1_data.y.d / fit.theta2**2, rel=1e-9)


def test_closed_form_variance_matches_generic():
    rng = np.random.default_rng(5)
    for _ in range(100):
        data = simulated_pair(int(rng.integers(1 << 31)))
        fit = solve_alpha_fixed_point(data)
        info = observed_information(fit.params, data)
        B = delta_variance(fit.params, info)
        assert B > 0
        assert B == pytest.approx(delta_variance_generic(fit.params, info), rel=1e-10)


def test_equal_scales_formula():
    data = simulated_pair(9)
    p = WeibullParams(1.4, 1.0, 1.0)
    I = observed_information(p, data).matrix
    u = np.linalg.det(I)
    expected = (I[0, 0] * (I[1, 1] + I[2, 2]) - (I[0, 1] + I[0, 2]) ** 2) / (16 * u)
    assert delta_variance(p, observed_information(p, data)) == pytest.approx(expected, rel=1e-10)


def test_information_positive_definite(scheme1_data, scheme2_data):
    for data in (scheme1_data, scheme2_data):
        info = observed_information(solve_alpha_fixed_point(data).params, data)
        assert info.positive_definite
        assert all(m > 0 for m in info.leading_minors())


def test_asymptotic_intervals_nest(scheme1_data):
    fit = solve_alpha_fixed_point(scheme1_data)
    wide = asymptotic_ci(fit, scheme1_data, 0.01)
    narrow = asymptotic_ci(fit, scheme1_data, 0.10)
    assert wide.lower <= narrow.lower <= fit.r <= narrow.upper <= wide.upper
    assert wide.method is Method.ASYMPTOTIC


def test_clamped_to_unit_interval():
    ci = iv.clamp_unit(-0.1, 0.4, 0.95, Method.ASYMPTOTIC)
    assert ci.lower == 0.0 and ci.clamped
    assert ci.length == pytest.approx(0.4)


def test_degenerate_data_raises():
    s = complete([1.0, 1.0, 1.0])
    with pytest.raises(DegenerateData):
        boot_p_ci(PairedData(s, s), nboot=10, seed=0)


def test_empirical_quantile_is_order_statistic():
    v = np.arange(1, 251, dtype=float)
    assert empirical_quantile(v, 0.025) == 7.0  # ceil(6.25)
    assert empirical_quantile(v, 0.975) == 244.0  # ceil(243.75)


def test_bootstrap_endpoints_are_replicates(scheme1_data):
    res = bootstrap_replicates(scheme1_data, nboot=100, seed=3, studentize=False)
    ci = boot_p_ci(scheme1_data, nboot=100, seed=3)
    assert ci.lower in res.r_star and ci.upper in res.r_star


def test_bootstrap_deterministic(scheme2_data):
    a = bootstrap_cis(scheme2_data, nboot=50, seed=11)
    b = bootstrap_cis(scheme2_data, nboot=50, seed=11)
    assert a == b
    assert a[1].lower <= a[1].upper


def test_shared_resamples_match_separate_calls(scheme1_data):
    p, t = bootstrap_cis(scheme1_data, nboot=60, seed=4)
    assert p == boot_p_ci(scheme1_data, nboot=60, seed=4)
    assert t == boot_t_ci(scheme1_data, nboot=60, seed=4)


def test_boot_t_collapses_without_resampling(monkeypatch, scheme1_data):
    monkeypatch.setattr(iv, "resample_failures", lambda sample, rng, recensor_on=True: sample)
    r_hat = solve_alpha_fixed_point(scheme1_data).r
    ci = boot_t_ci(scheme1_data, nboot=20, seed=0)
    assert ci.lower == pytest.approx(r_hat, abs=1e-12)
    assert ci.upper == pytest.approx(r_hat, abs=1e-12)


def test_resample_without_recensoring_is_complete(scheme2_data):
    rng = np.random.default_rng(0)
    s = iv.resample_failures(scheme2_data.x, rng, recensor_on=False)
    assert s.d == s.n == scheme2_data.x.d
    assert set(s.times) <= set(scheme2_data.x.times)


def test_interval_validation():
    with pytest.raises(ValueError):
        Interval(0.6, 0.4, 0.95, Method.BOOT_P)


@pytest.mark.slow
def test_asymptotic_coverage():
    rng = np.random.default_rng(2024)
    hits = 0
    for _ in range(500):
        data = simulated_pair(int(rng.integers(1 << 31)), n=30, m=30, s1=(25, 2.0), s2=(25, 2.0))
        fit = solve_alpha_fixed_point(data)
        hits += asymptotic_ci(fit, data).contains(0.5)
    assert 0.90 <= hits / 500 <= 0.99
