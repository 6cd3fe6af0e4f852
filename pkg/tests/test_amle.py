import math

import numpy as np
import pytest

from hybridssr.amle import amle_fit, amle_mixed_cases, positive_sigma_root, sample_terms, taylor_coeffs
from hybridssr.censoring import CaseTag, HybridSample, HybridScheme, PairedData
from hybridssr.distributions import ev_hazard, ev_score
from hybridssr.errors import NegativeDiscriminant
from hybridssr.mle import solve_alpha_fixed_point

from conftest import complete, simulated_pair


def test_coefficient_at_inverse_e():
    # q = exp(-1): beta = -1, alpha = 1 + (-1)(1 - log 1) = 0
    q = math.exp(-1)
    beta = math.log(q)
    assert beta == -1.0
    assert 1 + beta * (1 - math.log(-beta)) == 0.0


def test_coefficient_arithmetic():
    c = taylor_coeffs(30, 20, CaseTag.CASE_I)
    assert c.beta[14] == pytest.approx(math.log(16 / 31), rel=1e-15)
    assert np.all(c.beta < 0)


@pytest.mark.parametrize("n", [5, 30, 100])
def test_tangency(n):
    for case in (CaseTag.CASE_I, CaseTag.CASE_II):
        d = max(1, n - 2)
        c = taylor_coeffs(n, d, case)
        for a, b, mu in zip(c.alpha, c.beta, c.mu):
            assert a + b * mu == pytest.approx(ev_score(mu), abs=1e-12)
        assert 1 - c.alpha_c - c.beta_c * c.mu_c == pytest.approx(ev_hazard(c.mu_c), abs=1e-12)


def test_case_two_expansion_point():
    c = taylor_coeffs(10, 4, CaseTag.CASE_II)
    q_star = 1 - (4 / 11 + 5 / 11) / 2
    assert c.beta_c == pytest.approx(math.log(q_star), rel=1e-15)
    full = taylor_coeffs(10, 10, CaseTag.CASE_II)
    assert full.beta_c == full.beta[-1]


def case_two_oracle(x_times, n, T1, y_times, m, T2):
    """Both samples stopped at their time budgets, evaluated term by term."""

    def coeffs(i, N):
        q = 1 - i / (N + 1)
        return 1 + math.log(q) * (1 - math.log(-math.log(q))), math.log(q)

    def star(r, N):
        q = 1 - (r / (N + 1) + (r + 1) / (N + 1)) / 2
        return 1 + math.log(q) * (1 - math.log(-math.log(q))), math.log(q)

    def parts(times, N, T):
        r = len(times)
        t = [math.log(v) for v in times]
        al = [coeffs(i, N)[0] for i in range(1, r + 1)]
        be = [coeffs(i, N)[1] for i in range(1, r + 1)]
        a_s, b_s = star(r, N)
        lT = math.log(T)
        den = sum(be) + (N - r) * b_s
        A = (sum(b * ti for b, ti in zip(be, t)) + (N - r) * b_s * lT) / den
        B = (sum(al) - (N - r) * (1 - a_s)) / den
        D = (sum(a * (ti - 3 * A) for a, ti in zip(al, t)) - (N - r) * (1 - a_s) * (lT - 3 * A)
             + 2 * A * B * sum(be) + 2 * A * B * (N - r) * b_s)
        E = (sum(b * ti * (ti - A) for b, ti in zip(be, t)) + (N - r) * b_s * lT**2
             - (N - r) * A * b_s * lT)
        return A, B, D, E, r

    A1, B1, D1, E1, r1 = parts(x_times, n, T1)
    A2, B2, D2, E2, r2 = parts(y_times, m, T2)
    D, E, R = D1 + D2, E1 + E2, r1 + r2
    sigma = (-D + math.sqrt(D * D - 4 * R * E)) / (2 * R)
    th1 = math.exp((A1 + B1 * sigma) / sigma)
    th2 = math.exp((A2 + B2 * sigma) / sigma)
    return sigma, th1 / (th1 + th2), D, E


def test_case_two_both_matches_term_by_term_oracle():
    x = HybridSample(HybridScheme(6, 5, 1.3), [0.4, 0.9, 1.2], 3, 1.3, CaseTag.CASE_II)
    y = HybridSample(HybridScheme(5, 4, 1.0), [0.3, 0.55, 0.8], 3, 1.0, CaseTag.CASE_II)
    fit = amle_mixed_cases(PairedData(x, y))
    sigma, r, D, E = case_two_oracle([0.4, 0.9, 1.2], 6, 1.3, [0.3, 0.55, 0.8], 5, 1.0)
    assert fit.sigma == pytest.approx(sigma, rel=1e-13)
    assert fit.r == pytest.approx(r, rel=1e-13)
    assert fit.D == pytest.approx(D, rel=1e-13)
    assert fit.E == pytest.approx(E, rel=1e-13)


def test_fit_invariants(scheme1_data, scheme2_data):
    for data in (scheme1_data, scheme2_data):
        f = amle_fit(data)
        d = data.x.d + data.y.d
        assert f.sigma == (-f.D + math.sqrt(f.D**2 - 4 * d * f.E)) / (2 * d)
        assert f.theta1 == math.exp(f.mu1 / f.sigma)
        assert f.r == f.theta1 / (f.theta1 + f.theta2)
        assert f.E < 0


def test_dispatch_identity(scheme1_data, scheme2_data):
    for data in (scheme1_data, scheme2_data):
        assert amle_fit(data) == amle_mixed_cases(data)


def test_decomposition_is_exact(scheme2_data):
    tx, ty = sample_terms(scheme2_data.x), sample_terms(scheme2_data.y)
    f = amle_fit(scheme2_data)
    assert f.D == tx.D + ty.D
    assert f.E == tx.E + ty.E


def test_symmetric_data():
    s = complete([0.3, 0.8, 1.1, 1.9, 2.4])
    assert amle_fit(PairedData(s, s)).r == pytest.approx(0.5, abs=1e-15)


def test_mixed_case_label_symmetry(scheme2_data):
    # scheme 2 pairs a Case II x-sample with a Case I y-sample
    assert scheme2_data.x.case is CaseTag.CASE_II and scheme2_data.y.case is CaseTag.CASE_I
    a = amle_fit(scheme2_data)
    b = amle_fit(scheme2_data.swapped())
    assert b.r == pytest.approx(1 - a.r, abs=1e-14)


def test_scale_shift():
    data = simulated_pair(4, n=20, m=20, s1=(15, 1.5), s2=(14, 1.2))
    c = math.e
    f = amle_fit(data)
    g = amle_fit(PairedData(data.x.scaled(c), data.y.scaled(c)))
    assert g.A1 == pytest.approx(f.A1 + 1, abs=1e-12)
    assert g.A2 == pytest.approx(f.A2 + 1, abs=1e-12)
    assert g.B1 == pytest.approx(f.B1, abs=1e-12)
    assert g.sigma == pytest.approx(f.sigma, rel=1e-12)
    assert g.r == pytest.approx(f.r, abs=1e-12)


def test_negative_discriminant():
    with pytest.raises(NegativeDiscriminant):
        positive_sigma_root(0.0, 1.0, 4)


def test_tracks_mle_at_n100():
    rng = np.random.default_rng(77)
    close = 0
    for _ in range(200):
        data = simulated_pair(int(rng.integers(1 << 31)), n=100, m=100, s1=(80, 1.5), s2=(80, 1.5))
        close += abs(amle_fit(data).r - solve_alpha_fixed_point(data).r) < 0.05
    assert close >= 190
