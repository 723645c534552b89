import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from kovatlas.config import BoundaryCase, InvalidParameters
from kovatlas.regions import (
    ORDERING_TABLE, REGION_TAGS, Region, alpha0, classify, classify_any, classify_kappa0, numeric_ordering,
    ordering, region_atlas, tabulated_ordering, thresholds, thresholds_kappa0,
)


def f_t_oracle(b):
    # kappa = c1 = 1: t^3 + t = 2b, then f_t = ((1 + t^2)/2)^2 + t^2
    t = max(r.real for r in np.roots([1, 0, 1, -2 * b]) if abs(r.imag) < 1e-9)
    return ((1 + t * t) / 2) ** 2 + t * t


def test_thresholds_meet_at_m():
    th = thresholds(1, 1, 1)
    for name in ("f_k", "f_r", "f_m", "f_t", "f_l"):
        assert getattr(th, name) == pytest.approx(2.0, abs=1e-12)
    assert th.b_M == 1


def test_thresholds_large_b():
    th = thresholds(2, 1, 1)
    assert th.f_l == 4 and th.f_m == 5
    assert th.f_t == pytest.approx(f_t_oracle(2), abs=1e-12)
    assert th.f_t == pytest.approx(4.005147, abs=1e-6)
    assert th.f_k == pytest.approx(4.0210, abs=1e-4)
    assert th.f_r == pytest.approx(4.1072, abs=1e-4)
    assert th.f_l < th.f_t < th.f_k < th.f_r < th.f_m


def test_thresholds_small_b():
    th = thresholds(0.1, 1, 1)
    assert th.f_l == pytest.approx(0.2)
    assert th.f_r == pytest.approx(0.2619, abs=1e-4)
    assert th.f_t == pytest.approx(f_t_oracle(0.1), abs=1e-12)
    assert th.f_m == pytest.approx(1.01)
    assert th.f_k < th.f_l < th.f_r < th.f_t < th.f_m


def test_thresholds_reject_bad_params():
    with pytest.raises(InvalidParameters):
        thresholds(1, 0, 1)
    with pytest.raises(InvalidParameters):
        thresholds(1, 1, -1)


def test_alpha0():
    r = alpha0()
    assert r == pytest.approx(0.5436890126920763, abs=1e-14)
    assert abs(r ** 3 + r ** 2 + r - 1) < 1e-13
    th = thresholds(r ** 3, 1, 1)
    assert th.f_r == pytest.approx(th.f_t, abs=1e-9)


@given(st.floats(0.05, 4))
def test_f_t_oracle_agreement(b):
    assert thresholds(b, 1, 1).f_t == pytest.approx(f_t_oracle(b), rel=1e-12)


@pytest.mark.parametrize("a,b,tag", [
    (4.002, 2, "I"), (4.01, 2, "II"), (4.05, 2, "III"), (4.5, 2, "IV"), (6, 2, "V"), (6, 1, "V"),
    (1.01, 0.5, "VI"), (2, 0.5, "V"), (1.1, 0.5, "VII"), (1.001, 0.5, "VIII"),
    (2, 0, "X"), (0.5, 0, "XI"), (0.2, 0, "XII"),
])
def test_classify_examples(a, b, tag):
    assert classify(a, b, 1, 1) == Region(tag)


def test_classify_region_ix():
    # f_r < f_t only for b below the crossover alpha0^3
    b = 0.05
    th = thresholds(b, 1, 1)
    assert th.f_r < th.f_t
    assert classify((th.f_r + th.f_t) / 2, b, 1, 1) == Region("IX")


def test_classify_boundaries():
    th = thresholds(2, 1, 1)
    assert classify(th.f_k, 2, 1, 1) == Region("Boundary", "f_k")
    assert classify(1.0, 0, 1, 1) == Region("Boundary", "kappa^2c^2")
    assert classify(3.0, 2, 1, 1) == Region("Invalid")
    # M also lies on a = f_l, where the orbit is singular
    assert classify(2.0, 1, 1, 1) == Region("Invalid")
    assert classify(3.0, 1, 1, 1) == Region("V")
    assert not classify(th.f_r, 2, 1, 1).is_open
    with pytest.raises(InvalidParameters):
        classify(1, 1, 0, 1)


@given(st.floats(0.05, 3), st.floats(0.0, 4))
def test_classify_mirror(b, da):
    a = 2 * b + da + 1e-3
    assert classify(a, b, 1, 1) == classify(a, -b, 1, 1)


@given(st.floats(0.05, 3), st.floats(1e-3, 4))
def test_classify_always_some_region(b, da):
    r = classify(2 * b + da, b, 1, 1)
    assert r.is_open or r.tag == "Boundary"
    assert r.tag in REGION_TAGS + ("Boundary",)


def test_classify_kappa0():
    assert classify_kappa0(1, np.sqrt(3), 1) == Region("I'")
    assert classify_kappa0(1, np.sqrt(1.8), 1) == Region("II'")
    assert classify_kappa0(1, np.sqrt(1.5), 1) == Region("III'")
    assert classify_kappa0(1, 0, 1) == Region("V'")
    assert classify_any(1, 0, 0, 1) == Region("V'")
    g = thresholds_kappa0(np.sqrt(2), 1)
    assert g["g1"] == pytest.approx(1.0)
    assert g["g3"] == pytest.approx(2 ** (2 / 3))


def test_ordering_examples():
    assert ordering(2, 0.5, 1, 1) == ("z_rt", "z_plus_l", "z_cusp", "z_plus_ext", "z_plus_r", "z_lt")
    assert ordering(4.5, 2, 1, 1) == ("z_rt", "z_plus_ext", "z_plus_l", "z_cusp", "z_lt", "z_plus_r")
    with pytest.raises(BoundaryCase):
        tabulated_ordering(thresholds(0.5, 1, 1).f_r, 0.5, 1, 1)


@pytest.mark.parametrize("col,b", [("small", 0.5), ("large", 2.0)])
def test_orderings_all_rows(col, b):
    th = thresholds(b, 1, 1)
    for row, a in (("above_f_m", th.f_m + 1), ("f_r_to_f_m", (th.f_r + th.f_m) / 2),
                   ("below_f_r", (th.f_l + th.f_r) / 2)):
        assert numeric_ordering(a, b, 1, 1) == ORDERING_TABLE[(col, row)]


def test_region_atlas():
    at = region_atlas(1, 1, 3, n=31)
    assert len(at["b"]) == 31 and len(at["curves"]["f_t"]) == 31
    assert at["points"]["M"] == pytest.approx([1, 2])
