import json
import re

import numpy as np
import pytest

from kovatlas.config import InvalidParameters
from kovatlas.diagram import (
    DiagramModel, build_diagram, chamber_probes, incidence_errors, parse_json, regime_of, render_json, render_svg,
)


@pytest.fixture(scope="module")
def model_iv():
    return build_diagram(4.5, 2.0, 1.0, 1.0)


def test_regimes():
    assert regime_of(1, 1) == "kpos_bnz"
    assert regime_of(0, 1) == "kpos_b0"
    assert regime_of(0, 0) == "k0_b0"
    assert regime_of(1, 0) == "k0_bnz"
    with pytest.raises(InvalidParameters):
        regime_of(1, -1)


def test_region_iv_model(model_iv):
    assert model_iv.region == "IV"
    assert max(incidence_errors(model_iv)) < 1e-9
    # no rank-one-rank-zero point over the parabola crossing below f_m
    assert all(not (abs(p.h - 5.5) < 1e-9 and abs(p.k - 4.25) < 1e-9) for p in model_iv.singular_points)


def test_region_x_model():
    m = build_diagram(2.0, 0.0, 1.0, 1.0, n_samples=5000)
    assert m.region == "X"
    assert any(abs(p.h - 4.5) < 1e-9 and abs(p.k) < 1e-9 for p in m.singular_points)
    assert max(incidence_errors(m)) < 1e-9


def test_kappa_zero_model():
    m = build_diagram(1.0, 0.0, 0.0, 1.0, n_samples=5000)
    tags = {c["tag"] if isinstance(c, dict) else c for c in m.curves}
    assert tags == {"LineKZero", "UpParabolaK0B0", "TangentLineK0B0", "ParabolaK0B0"}


def test_region_v_points(model_v):
    assert model_v.region == "V"
    assert len(model_v.singular_points) == 9
    assert set(model_v.labels()) == {"y1", "y2", "y3", "z1", "z2", "z4", "z5", "z6"}
    z5 = model_v.point("z5")
    assert (z5.h, z5.k) == pytest.approx((7.0, 32.0))
    assert max(incidence_errors(model_v)) < 1e-9


def test_arcs_join_points(model_v):
    n = len(model_v.singular_points)
    for ar in model_v.arcs:
        assert 0 <= ar.start < n and 0 <= ar.end < n
        assert len(ar.polyline) >= 2
    assert chamber_probes(model_v)


def test_json_round_trip(model_v):
    text = render_json(model_v)
    back = parse_json(text)
    assert render_json(back) == text
    assert json.loads(text)["params"]["a"] == 6.0


def test_svg_deterministic(model_v):
    a = render_svg(model_v)
    assert a == render_svg(parse_json(render_json(model_v)))
    assert a.startswith("<?xml") and a.rstrip().endswith("</svg>")
    assert len(re.findall(r"<path ", a)) == len([x for x in model_v.arcs if x.polyline])


def test_empty_svg():
    m = DiagramModel("kpos_bnz", "V", {"a": 1, "b": 1, "kappa": 1, "c1": 1}, [0, 1, 0, 1])
    svg = render_svg(m)
    assert 'id="axes"' in svg and "<path" not in svg
