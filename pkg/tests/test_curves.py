import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from kovatlas.config import ComplexDiscriminant, ZeroParameter
from kovatlas.curves import (
    ZERO_CROSSING_TABLE, CurveId, asymptote_line, count_zero_crossings, curve_descriptor, curve_extrema_kind,
    curve_k, curves_b_zero, curves_kappa_zero, cusp_refined_grid, discriminant_root, f_k, param_curve,
    param_curve_concavity, param_curve_derivatives, param_curve_hk, param_curve_k0_hk, param_curve_polyline,
    param_curve_slope, parabola_intersection, parabola_value, special_points, tabulated_zero_crossings,
    tangency_check, zero_crossing_report,
)


def sign_changes(a, b, kappa=1.0, c1=1.0):
    # independent oracle: sign changes of k on a dense log grid, plus touching zeros
    z = np.geomspace(1e-3, 1e3, 400_001)
    _, k = param_curve_hk(z, a, b, kappa, c1)
    return int(np.sum(np.sign(k[:-1]) * np.sign(k[1:]) < 0))


def test_curve_point_example():
    assert param_curve(1.0, 2, 1, 1, 1) == pytest.approx(param_curve(1.0, 2, 1, 1, 1))
    m = param_curve(1.0, 2, 1, 1, 1)
    assert (m.h, m.k) == pytest.approx((3, 0), abs=1e-14)


def test_zero_parameter():
    with pytest.raises(ZeroParameter):
        param_curve(0.0, 2, 1, 1, 1)


def test_cusp_parameter():
    assert special_points(2.5, 1, 1, 1).z_cusp == pytest.approx(1.0)
    dh, dk = param_curve_derivatives(1.0, 2.5, 1, 1, 1)
    assert dh == pytest.approx(0) and dk == pytest.approx(0)


def test_asymptote():
    for z in (1e3, 1e4, 1e5):
        h, k = param_curve_hk(z, 2, 1, 1, 1)
        assert abs(k - asymptote_line(h, 2, 1, 1)) < 10 / z


def test_parabolas_example():
    assert parabola_value("left", 2.0, 2.5, 1, 1, 1) == 0
    assert parabola_value("left", 4.0, 2.5, 1, 1, 1) == pytest.approx(4)
    assert parabola_value("right", 4.0, 2.5, 1, 1, 1) == pytest.approx(1)
    m = parabola_intersection(2.5, 1, 1, 1)
    assert (m.h, m.k) == pytest.approx((3.5, 2.25))
    assert parabola_value("left", 3.5, 2.5, 1, 1, 1) == pytest.approx(2.25)
    assert parabola_value("right", 3.5, 2.5, 1, 1, 1) == pytest.approx(2.25)


def test_complex_discriminant():
    with pytest.raises(ComplexDiscriminant):
        discriminant_root(1.0, 1.0, 1.0)


def test_special_points_example():
    sp = special_points(2, 0.5, 1, 1)
    assert sp.z_lt == pytest.approx((2 - math.sqrt(3)) / 2)
    assert sp.z_rt == pytest.approx((2 + math.sqrt(3)) / 2)
    assert sp.z_plus_l == pytest.approx(1.3660, abs=1e-4)
    assert sp.z_plus_r == pytest.approx(0.3660, abs=1e-4)
    assert sp.z_cusp == pytest.approx(0.25 ** (1 / 3))
    assert sp.z_plus_ext == pytest.approx(0.5)
    assert sp.z_minus_l == -sp.z_plus_l
    assert set(sp.as_dict()) >= {"z_cusp", "z_lt", "z_rt"}


def test_extrema_kind():
    assert curve_extrema_kind(5, 2, 1, 1)["plus_ext_is"] == "max"
    assert curve_extrema_kind(1, 0.5, 1, 1)["plus_ext_is"] == "min"
    assert curve_extrema_kind(3, 1, 1, 1)["plus_ext_is"] == "cusp"
    assert curve_extrema_kind(3, 1, 1, 1)["minus_ext_is"] == "min"


@pytest.mark.parametrize("b", [0.5, 2.0])
def test_extrema_kind_by_sampling(b):
    kind = curve_extrema_kind(6, b, 1, 1)["plus_ext_is"]
    z = b * np.array([0.99, 1.0, 1.01])
    _, k = param_curve_hk(z, 6, b, 1, 1)
    assert (k[1] > max(k[0], k[2])) == (kind == "max")
    assert (k[1] < min(k[0], k[2])) == (kind == "min")


def test_f_k_value():
    assert f_k(2, 1, 1) == pytest.approx(4.0210, abs=1e-4)
    # k at the cusp is 4 c1^2 (a - f_k)
    for a in (3.0, 4.0, 5.0):
        _, k = param_curve_hk(2 ** (2 / 3), a, 2, 1, 1)
        assert k == pytest.approx(4 * (a - f_k(2, 1, 1)), abs=1e-12)


def test_zero_crossing_table_verbatim():
    assert ZERO_CROSSING_TABLE[(1, 1)] == 3
    assert ZERO_CROSSING_TABLE[(-1, 1)] == 1
    assert ZERO_CROSSING_TABLE[(-1, -1)] == 3
    assert ZERO_CROSSING_TABLE[(1, -1)] == 1
    assert tabulated_zero_crossings(5, 2, 1, 1) == 3
    assert tabulated_zero_crossings(4.01, 2, 1, 1) == 1
    assert tabulated_zero_crossings(7, 1, 1, 1) == 1


@pytest.mark.parametrize("a,b,expected", [(5, 2, 1), (4.01, 2, 3), (3, 1, 1), (7, 1, 1), (2, 0.5, 1), (7, 3, 1)])
def test_zero_crossing_count_numeric(a, b, expected):
    assert sign_changes(a, b) == expected
    assert count_zero_crossings(a, b, 1, 1) == expected


def test_zero_crossing_report_flags_table_conflict():
    rep = zero_crossing_report(5, 2, 1, 1)
    assert rep == {"numeric": 1, "table": 3, "agree": False}
    assert zero_crossing_report(3, 1, 1, 1)["agree"]


@given(st.floats(0.2, 3), st.floats(0.05, 4))
def test_crossings_match_oracle(b, ratio):
    a = 2 * b + ratio
    assume(abs(a - f_k(b, 1, 1)) > 1e-3 and abs(b - 1) > 1e-3)
    assert count_zero_crossings(a, b, 1, 1) == sign_changes(a, b)


def test_tangency_examples():
    r = tangency_check("right", 2.5, 1, 1, 1)
    assert r["z"] == pytest.approx(2.0)
    assert r["h"] == pytest.approx(4.25)
    assert r["k_curve"] == pytest.approx(0.5625)
    assert r["ok"]
    l = tangency_check("left", 2.5, 1, 1, 1)
    assert l["z"] == pytest.approx(0.5)
    assert (l["h"], l["k_curve"]) == pytest.approx((5, 9))
    assert l["ok"]


def test_degenerate_discriminant():
    sp = special_points(2, 1, 1, 1)
    assert sp.z_lt == sp.z_rt == pytest.approx(1)
    assert parabola_value("left", 3.3, 2, 1, 1, 1) == parabola_value("right", 3.3, 2, 1, 1, 1)


@given(st.floats(0.1, 3), st.floats(0.1, 3), st.sampled_from(["left", "right"]))
def test_tangency_everywhere(b, extra, which):
    a = 2 * b + extra
    assert tangency_check(which, a, b, 1, 1)["ok"]


@given(st.floats(0.1, 3), st.floats(0.05, 10))
def test_convex_below_cusp(b, t):
    zc = b ** (2 / 3)
    assert param_curve_concavity(zc / (1 + t), b, 1) > 0
    assert param_curve_concavity(zc * (1 + t), b, 1) < 0


def test_slope_matches_derivatives():
    z = np.array([0.3, 0.7, 2.0, 5.0])
    dh, dk = param_curve_derivatives(z, 3, 1.2, 1, 1)
    assert np.allclose(dk / dh, param_curve_slope(z, 1.2, 1, 1))


def test_b_zero_curves():
    c = curves_b_zero(0.0, 1, 1, 1)
    assert c[CurveId.UpParabolaB0] == pytest.approx(5)
    assert c[CurveId.TangentLineB0] == pytest.approx(5)
    assert curve_descriptor(CurveId.RightParabolaB0, 1, 0, 1, 1)["coefficients"]["h0"] == pytest.approx(3)
    # the tangent line meets k = 0 at kappa c1^2 / 2 + 2a / kappa
    assert curves_b_zero(2.5, 1, 1, 1)[CurveId.TangentLineB0] == pytest.approx(0)


def test_kappa_zero_curves():
    c = curves_kappa_zero(2.0, 1, 0, 1)
    assert c[CurveId.ParabolaK0B0] == pytest.approx(4)
    assert c[CurveId.UpParabolaK0B0] == pytest.approx(8)
    assert c[CurveId.TangentLineK0B0] == pytest.approx(4)
    h, k = curves_kappa_zero(1.0, 1, 1, 1)[CurveId.ParamCurveK0]
    assert (h, k) == pytest.approx((3, 1))
    with pytest.raises(ValueError):
        curves_kappa_zero(1.0, 0, 1, 1)


@pytest.mark.parametrize("kappa", [1e-3, 1e-6])
def test_kappa_limit_pointwise(kappa):
    for z in (0.4, 1.0, 2.5):
        h, k = param_curve_hk(z, 1, 1, kappa, 1)
        h0, k0 = param_curve_k0_hk(z, 1, 1, 1)
        assert h == h0
        assert abs(k - k0) <= 2 * abs(h0) * kappa + kappa ** 2 + 1e-12


def test_curve_k_graph_dispatch():
    assert curve_k(CurveId.LineKZero, [1.0, 2.0], 3, 1, 1, 1).tolist() == [0, 0]
    assert curve_k(CurveId.LeftParabola, 3.0, 2.5, 1, 1, 1) == pytest.approx(1)
    with pytest.raises(ValueError):
        curve_k(CurveId.ParamCurve, 1.0, 3, 1, 1, 1)


def test_cusp_grid_and_polyline():
    g = cusp_refined_grid(1.0, 0.1, 10.0, 101)
    assert g[0] == pytest.approx(0.1) and g[-1] == pytest.approx(10.0)
    assert np.all(np.diff(g) > 0)
    assert np.min(np.abs(g - 1.0)) < 1e-4
    pl = param_curve_polyline(3, 1, 1, 1, 0.1, 10, n=50)
    assert pl.shape == (50, 2)
    with pytest.raises(ValueError):
        param_curve_polyline(3, 1, 1, 1, -1, 1)
