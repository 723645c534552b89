import math

import numpy as np
import pytest

from kovatlas.algebra import OrbitParams, PencilParams, casimirs, momentum_map
from kovatlas.config import InvalidParameters
from kovatlas.curves import param_curve_hk, parabola_value
from kovatlas.diagram import containment
from kovatlas.topology import (
    AtomDelta, component_symmetry_check, fiber_components, fiber_tori, image_cloud, infer_atom,
    kappa_limit_compare, molecule, molecule_registry, momentum_scales, project_to_fiber, sigma_invariance,
    symmetry_permutation,
)

P = PencilParams(1.0, 1.0)
# an interior point of the lower chamber between the parabolas, region V
PROBE_V = (6.646, 3.363)


def test_image_cloud_bounds():
    cl = image_cloud(OrbitParams(2.5, 1), P, 100_000, seed=3)
    assert cl.momenta[:, 1].min() >= 0
    # the rightmost image point is where the curve meets k = 0
    h_right = max(float(param_curve_hk(z, 2.5, 1, 1, 1)[0]) for z in np.linspace(1.5, 3.0, 3001)
                  if abs(param_curve_hk(z, 2.5, 1, 1, 1)[1]) < 1e-2)
    assert cl.momenta[:, 0].max() <= h_right + 1e-2


def test_image_cloud_empty_and_deterministic():
    assert len(image_cloud(OrbitParams(2.5, 1), P, 0, seed=1)) == 0
    a = image_cloud(OrbitParams(2.5, 1), P, 1000, seed=4)
    b = image_cloud(OrbitParams(2.5, 1), P, 1000, seed=4)
    assert np.array_equal(a.points, b.points) and np.array_equal(a.momenta, b.momenta)
    with pytest.raises(InvalidParameters):
        image_cloud(OrbitParams(2.5, 1), PencilParams(0.0, 1.0), 10)


def test_projection_lands_on_fiber(cloud_v):
    target = PROBE_V
    pts, ok = project_to_fiber(cloud_v.points[:50], cloud_v.orbit, P, target)
    for y in pts[ok]:
        m = momentum_map(y, P)
        assert (m.h, m.k) == pytest.approx(target, abs=1e-8)
        assert casimirs(y, P) == pytest.approx((6, 1), abs=1e-8)


def test_two_tori_region_v(cloud_v):
    rep = fiber_tori(cloud_v, PROBE_V)
    assert rep.count == 2
    # sigma3 swaps the two tori, sigma2 keeps each
    assert symmetry_permutation(rep, "sigma3") == {0: [1], 1: [0]}
    assert symmetry_permutation(rep, "sigma2") == {0: [0], 1: [1]}


def test_probe_outside_image(cloud_v):
    assert fiber_components(cloud_v, (7.0, -5.0)) == 0
    assert fiber_components(cloud_v, (100.0, 100.0)) == 0


def test_sigma_invariance(cloud_v):
    counts = sigma_invariance(cloud_v, (4.345, 16.13))
    assert len(set(counts.values())) == 1


def test_fiber_count_deterministic(cloud_v):
    a = fiber_tori(cloud_v, PROBE_V, seed=3)
    b = fiber_tori(cloud_v, PROBE_V, seed=3)
    assert a.count == b.count and np.array_equal(a.labels, b.labels)


def test_four_tori_left_of_y10(model_i, cloud_i):
    y10, y13 = model_i.point("y10"), model_i.point("y13")
    h = y10.h - 0.3 * (y10.h - y13.h)
    k = 0.3 * parabola_value("left", h, 4.002, 2, 1, 1)
    assert fiber_components(cloud_i, (h, k)) == 4


def test_containment(model_v, cloud_v):
    assert containment(model_v, cloud_v.momenta[:20000])["fraction"] == 1.0


def test_y8_components_swapped(model_i, cloud_i):
    sh, sk = momentum_scales(cloud_i)
    y8 = model_i.point("y8")
    dmin = min(math.hypot((q.h - y8.h) / sh, (q.k - y8.k) / sk)
               for q in model_i.singular_points if q.label != "y8")
    for f in (0.3, 0.15):
        r = component_symmetry_check(cloud_i, (y8.h, y8.k), f * dmin)
        assert r["components"] == 2 and r["swapped"]


def test_y1_single_component(model_i, cloud_i):
    y1 = model_i.point("y1")
    r = component_symmetry_check(cloud_i, (y1.h, y1.k), 0.02)
    assert r["components"] == 1


def test_atom_delta():
    assert AtomDelta("A", 1, 0).consistent()
    assert AtomDelta("B", 1, 2).consistent()
    assert AtomDelta("2A*", 2, 2).multiplicity == 2
    assert AtomDelta("2A*", 2, 2).base == "A*"
    assert AtomDelta("2A*", 2, 2).consistent()
    assert not AtomDelta("B", 2, 1).consistent()


def test_infer_atom():
    assert infer_atom(1, 0, {"elliptic": 1}) == AtomDelta("A", 1, 0)
    assert infer_atom(2, 1, {"hyperbolic": 1}) == AtomDelta("B", 1, 2)
    assert infer_atom(2, 2, {"hyperbolic": 2}) == AtomDelta("2A*", 2, 2)
    assert infer_atom(1, 1, {"elliptic": 1, "hyperbolic": 1}) is None


def test_molecule_registry():
    y1 = molecule("y1")
    assert y1.atoms == ["A", "A"] and y1.edges[0]["r"] == 0
    y12 = molecule("y12")
    assert y12.atoms[0] == "B" and all(e["r"] == "inf" for e in y12.edges)
    assert molecule("y8").doubled
    assert len({r.singular_point for r in molecule_registry()}) == len(molecule_registry())
    with pytest.raises(KeyError):
        molecule("q9")


def test_kappa_limit():
    rep = kappa_limit_compare(1.0, 0.5, 1.0, [0.1, 0.01, 0.001])
    assert rep["monotone"] and rep["linear"]
    d = rep["distances"]
    assert d[1] < d[0] / 3 and d[2] < d[1] / 3
    with pytest.raises(InvalidParameters):
        kappa_limit_compare(0.0, 0.5, 1.0, [0.1])


def test_right_vertex_escapes():
    from kovatlas.curves import parabola_vertex

    vs = [parabola_vertex("right", 1.0, 0.5, k, 1.0) for k in (0.1, 0.01, 0.001)]
    assert vs[0] < vs[1] < vs[2] and vs[2] > 1000
