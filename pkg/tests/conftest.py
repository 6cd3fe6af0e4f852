import math

import numpy as np
import pytest

from hybridssr.censoring import CaseTag, HybridSample, HybridScheme, PairedData, apply_scheme, generate_hybrid_sample
from hybridssr.datasets import casestudy_data


@pytest.fixture(scope="session")
def scheme1_data():
    return casestudy_data(1)


@pytest.fixture(scope="session")
def scheme2_data():
    return casestudy_data(2)


def complete(values):
    v = np.sort(np.asarray(values, dtype=float))
    return HybridSample(HybridScheme(v.size, v.size), v, v.size, float(v[-1]), CaseTag.CASE_I)


def simulated_pair(seed, n=15, m=15, s1=(12, 1.5), s2=(12, 1.5), params=(1.5, 1.0, 1.0)):
    rng = np.random.default_rng(seed)
    a, t1, t2 = params
    return PairedData(
        generate_hybrid_sample(HybridScheme(n, *s1), a, t1, rng, retries=20),
        generate_hybrid_sample(HybridScheme(m, *s2), a, t2, rng, retries=20),
    )
