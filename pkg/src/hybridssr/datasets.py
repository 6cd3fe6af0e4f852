"""Carbon-fibre strength data (GPa) used for the worked example.

Single fibres tested under tension at gauge lengths 20 mm (``GAUGE_20MM``) and
10 mm (``GAUGE_10MM``), Badar and Priest (1982).  The Weibull fit is made after
subtracting ``CASESTUDY_SHIFT`` from every value.
"""
import numpy as np

from .censoring import HybridScheme, PairedData, apply_scheme

GAUGE_20MM = (
    1.312, 1.314, 1.479, 1.552, 1.700, 1.803, 1.861, 1.865, 1.944, 1.958,
    1.966, 1.997, 2.006, 2.021, 2.027, 2.055, 2.063, 2.098, 2.140, 2.179,
    2.224, 2.240, 2.253, 2.270, 2.272, 2.274, 2.301, 2.301, 2.359, 2.382,
    2.382, 2.426, 2.434, 2.435, 2.478, 2.490, 2.511, 2.514, 2.535, 2.554,
    2.566, 2.570, 2.586, 2.629, 2.633, 2.642, 2.648, 2.684, 2.697, 2.726,
    2.770, 2.773, 2.800, 2.809, 2.818, 2.821, 2.848, 2.880, 2.954, 3.012,
    3.067, 3.084, 3.090, 3.096, 3.128, 3.233, 3.433, 3.585, 3.585,
)

GAUGE_10MM = (
    1.901, 2.132, 2.203, 2.228, 2.257, 2.350, 2.361, 2.396, 2.397, 2.445,
    2.454, 2.474, 2.518, 2.522, 2.525, 2.532, 2.575, 2.614, 2.616, 2.618,
    2.624, 2.659, 2.675, 2.738, 2.740, 2.856, 2.917, 2.928, 2.937, 2.937,
    2.977, 2.996, 3.030, 3.125, 3.139, 3.145, 3.220, 3.223, 3.235, 3.243,
    3.264, 3.272, 3.294, 3.332, 3.346, 3.377, 3.408, 3.435, 3.493, 3.501,
    3.537, 3.554, 3.562, 3.628, 3.852, 3.871, 3.886, 3.971, 4.024, 4.027,
    4.225, 4.395, 5.020,
)

CASESTUDY_SHIFT = 0.75

# (r1, T1), (r2, T2) for the two illustrative censoring schemes.
CASESTUDY_SCHEMES = {
    1: ((45, 2.5), (40, 2.5)),
    2: ((35, 1.7), (25, 2.2)),
}


def shifted_strengths() -> tuple[np.ndarray, np.ndarray]:
    """Both data sets with the location shift removed: (20 mm, 10 mm)."""
    x = np.array(GAUGE_20MM) - CASESTUDY_SHIFT
    y = np.array(GAUGE_10MM) - CASESTUDY_SHIFT
    return x, y


def casestudy_data(scheme_id: int) -> PairedData:
    (r1, t1), (r2, t2) = CASESTUDY_SCHEMES[scheme_id]
    x, y = shifted_strengths()
    return PairedData(
        apply_scheme(x, HybridScheme(len(x), r1, t1)),
        apply_scheme(y, HybridScheme(len(y), r2, t2)),
    )
