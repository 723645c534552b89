import math

import numpy as np

from kovatlas.algebra import OrbitParams, PencilParams, sample_orbit
from kovatlas.curves import param_curve_hk
from kovatlas.levels import (
    circle_kind, critical_circles_over, critical_points_over, has_critical_preimage, nearest_starts, solve_from,
)
from kovatlas.topology import image_cloud

P = PencilParams(1.0, 1.0)
ORBIT = OrbitParams(2.5, 1.0)


def test_rank0_point_is_its_own_solution():
    y = np.array([1.0, math.sqrt(0.5), 0, 1, 0, 0])
    s = solve_from(y, ORBIT, P, (3.5, 2.25))
    assert s is not None
    assert np.allclose(s[0], y, atol=1e-8)
    assert circle_kind(s[0], s[1], P)[0] == "rank0"


def test_curve_value_has_critical_preimage():
    cl = image_cloud(ORBIT, P, 20000, seed=2)
    h, k = (float(v) for v in param_curve_hk(1.5, 2.5, 1, 1, 1))
    starts = nearest_starts(cl.points, cl.momenta, (h, k), 40)
    assert has_critical_preimage(ORBIT, P, (h, k), starts)
    circles = critical_circles_over(ORBIT, P, (h, k), starts)
    assert circles and all(c.kind in ("elliptic", "hyperbolic") for c in circles)


def test_regular_value_has_none():
    cl = image_cloud(ORBIT, P, 20000, seed=2)
    # a chamber interior point, away from every curve
    hk = (3.5, 1.2)
    starts = nearest_starts(cl.points, cl.momenta, hk, 20)
    assert critical_points_over(ORBIT, P, hk, starts) == []


def test_nearest_starts_sorted():
    pts = sample_orbit(ORBIT, P, 500, seed=1)
    from kovatlas.algebra import momentum_map

    m = momentum_map(pts, P)
    s = nearest_starts(pts, m, (3.0, 1.0), 10)
    assert s.shape == (10, 6)
