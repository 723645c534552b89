import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from kovatlas.algebra import (
    MomentumValue, OrbitParams, PencilParams, PhasePoint, apply_symmetry, casimir_gradients, casimirs,
    grad_h, grad_k, ham_vector_field, hamiltonian, integral_k, integrate_flow, linearization, momentum_map,
    on_orbit, poisson_bivector, poisson_bracket, sample_orbit, scale_point, sphere_radii, x_h, x_k,
    xh_closed_form,
)
from kovatlas.config import EmptyOrbit, SingularOrbit, StepDiverged

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)
points = arrays(np.float64, 6, elements=finite)
kappas = st.floats(-2, 2, allow_nan=False)
c1s = st.floats(0.2, 2).flatmap(lambda v: st.sampled_from([v, -v]))


def pp(J, x):
    return PhasePoint(tuple(map(float, J)), tuple(map(float, x)))


def fd_grad(f, y, h=1e-6):
    g = np.zeros(6)
    for i in range(6):
        e = np.zeros(6)
        e[i] = h
        g[i] = (f(y + e) - f(y - e)) / (2 * h)
    return g


def test_pencil_rejects_zero_c1():
    with pytest.raises(ValueError):
        PencilParams(1.0, 0.0)


def test_bivector_entries():
    assert poisson_bivector(pp((0, 0, 5), (0, 0, 0)), PencilParams(1, 1))[0, 1] == 5
    assert poisson_bivector(pp((0, 0, 1), (0, 0, 0)), PencilParams(2, 1))[3, 4] == 2


@given(points, kappas)
def test_bivector_antisymmetric(y, k):
    P = poisson_bivector(y, PencilParams(k, 1.0))
    assert np.array_equal(P + P.T, np.zeros((6, 6)))


@given(points, kappas)
def test_casimirs_in_kernel(y, k):
    params = PencilParams(k, 1.0)
    P = poisson_bivector(y, params)
    for g in casimir_gradients(y, params):
        assert np.max(np.abs(P @ g)) <= 1e-12 * max(1.0, np.max(np.abs(y))) ** 2


def test_casimir_values():
    assert casimirs(pp((1, 0, 0), (0, 1, 0)), PencilParams(1, 1)) == pytest.approx((2, 0))
    assert casimirs(pp((1, 0, 0), (1, 0, 0)), PencilParams(1, 1)) == pytest.approx((2, 1))


def test_hamiltonian_and_k_values():
    params = PencilParams(1, 1)
    p = pp((1, 0, 0), (0, 0, 0))
    assert hamiltonian(p, params) == pytest.approx(1)
    assert integral_k(p, params) == pytest.approx(4)
    q = pp((1, 0, 0), (1, 0, 0))
    assert momentum_map(q, params) == MomentumValue(pytest.approx(3), pytest.approx(0))


def test_momentum_map_batch(unit, rng):
    ys = rng.normal(size=(5, 6))
    m = momentum_map(ys, unit)
    assert m.shape == (5, 2)
    for y, row in zip(ys, m):
        one = momentum_map(y, unit)
        assert row == pytest.approx([one.h, one.k], rel=1e-14)


@given(points, kappas, c1s)
def test_k_nonnegative(y, k, c):
    assert integral_k(y, PencilParams(k, c)) >= 0


def test_vector_field_values(unit):
    p = pp((1, 1, 1), (0, 0, 0))
    v = x_h(p, unit)
    assert v[0] == pytest.approx(-2)
    assert v[4] == pytest.approx(-2)


@given(points, kappas, c1s)
def test_xh_matches_closed_form(y, k, c):
    params = PencilParams(k, c)
    assert np.allclose(x_h(y, params), xh_closed_form(y, params), atol=1e-10 * (1 + np.max(np.abs(y))) ** 2)


@given(points, kappas, c1s)
def test_integrals_commute(y, k, c):
    params = PencilParams(k, c)
    gh, gk = grad_h(y, params), grad_k(y, params)
    scale = np.linalg.norm(gh) * np.linalg.norm(gk) * max(1.0, np.max(np.abs(y)), abs(k))
    assert abs(poisson_bracket(y, params, gh, gk)) <= 1e-10 * max(scale, 1.0)


def test_gradients_match_finite_differences(rng):
    params = PencilParams(0.7, 1.3)
    for _ in range(10):
        y = rng.normal(size=6)
        assert np.allclose(grad_h(y, params), fd_grad(lambda v: hamiltonian(v, params), y), rtol=1e-6, atol=1e-6)
        gk = fd_grad(lambda v: integral_k(v, params), y)
        assert np.allclose(grad_k(y, params), gk, rtol=1e-5, atol=1e-5 * np.max(np.abs(gk)))


def test_ham_vector_field_is_bivector_times_gradient(unit, rng):
    y = rng.normal(size=6)
    g = rng.normal(size=6)
    assert np.allclose(ham_vector_field(y, unit, g), poisson_bivector(y, unit) @ g)


def test_casimir_linearization_vanishes(unit, rng):
    # the casimir flow is identically zero, so its linearization is too
    y = rng.normal(size=6)
    P = poisson_bivector(y, unit)
    g1, _ = casimir_gradients(y, unit)
    assert np.allclose(P @ g1, 0, atol=1e-12)


def test_scaling_identity(unit, rng):
    y = rng.normal(size=6)
    p2, params2, orbit2 = scale_point(y, unit, 1.0, 1.0, OrbitParams(2.0, 0.5))
    assert np.allclose(p2.as_array(), y)
    assert params2 == unit
    assert orbit2 == OrbitParams(2.0, 0.5)


def test_scaling_examples(unit, rng):
    p2, params2, _ = scale_point(pp((1, 0, 0), (0, 0, 0)), unit, 1.0, 2.0)
    assert hamiltonian(p2, params2) == pytest.approx(4)
    y = rng.normal(size=6)
    q, params3, _ = scale_point(y, unit, 0.5, 3.0)
    assert integral_k(q, params3) == pytest.approx(81 * integral_k(y, unit), rel=1e-10)


@given(points, st.floats(0.2, 3), st.floats(0.2, 3))
def test_scaling_casimirs_and_h(y, lam, mu):
    params = PencilParams(1.0, 1.0)
    orbit = OrbitParams(*casimirs(y, params))
    q, params2, orbit2 = scale_point(y, params, lam, mu, orbit)
    scale = max(1.0, np.max(np.abs(y))) ** 2 * max(1, lam, mu) ** 4
    assert casimirs(q, params2)[0] == pytest.approx(orbit2.a, abs=1e-10 * scale)
    assert casimirs(q, params2)[1] == pytest.approx(orbit2.b, abs=1e-10 * scale)
    assert hamiltonian(q, params2) == pytest.approx(mu * mu * hamiltonian(y, params), abs=1e-10 * scale)


def test_scaling_rejects_zero(unit):
    with pytest.raises(ValueError):
        scale_point(np.ones(6), unit, 0.0, 1.0)


def test_sigma3_example():
    assert apply_symmetry(pp((1, 2, 3), (4, 5, 6)), "sigma3") == pp((1, 2, -3), (4, 5, -6))


@given(points, kappas, c1s)
def test_symmetries(y, k, c):
    params = PencilParams(k, c)
    f1, f2 = casimirs(y, params)
    h, kk = hamiltonian(y, params), integral_k(y, params)
    for s in ("sigma2", "sigma3"):
        q = apply_symmetry(y, s)
        assert casimirs(q, params) == pytest.approx((f1, f2), abs=1e-12)
        assert hamiltonian(q, params) == h
        assert integral_k(q, params) == pytest.approx(kk, rel=1e-12, abs=1e-12)
    q = apply_symmetry(y, "negJ")
    assert casimirs(q, params)[1] == -f2
    assert hamiltonian(q, params) == h
    assert integral_k(q, params) == pytest.approx(kk, rel=1e-12, abs=1e-12)


def test_unknown_symmetry():
    with pytest.raises(ValueError):
        apply_symmetry(np.zeros(6), "sigma1")


def test_orbit_sampling_b_zero(unit):
    assert sphere_radii(OrbitParams(2, 0), unit) == pytest.approx((math.sqrt(2), math.sqrt(2)))
    ys = sample_orbit(OrbitParams(2, 0), unit, 500, seed=1)
    f = np.array([casimirs(y, unit) for y in ys])
    assert np.max(np.abs(f - [2, 0])) < 1e-12


def test_orbit_sampling_generic(unit):
    orbit = OrbitParams(2.5, 1.0)
    assert sphere_radii(orbit, unit) == pytest.approx((math.sqrt(4.5), math.sqrt(0.5)))
    ys = sample_orbit(orbit, unit, 500, seed=2)
    assert all(on_orbit(y, orbit, unit, 1e-12) for y in ys)


def test_orbit_sampling_errors(unit):
    with pytest.raises(SingularOrbit):
        sphere_radii(OrbitParams(2, 1), unit)
    with pytest.raises(EmptyOrbit):
        sphere_radii(OrbitParams(1, 1), unit)


def test_sampling_deterministic(unit):
    a = sample_orbit(OrbitParams(3, 1), unit, 50, seed=9)
    b = sample_orbit(OrbitParams(3, 1), unit, 50, seed=9)
    assert np.array_equal(a, b)


def test_flow_stationary_at_rank0(unit):
    y = np.array([1.0, math.sqrt(0.5), 0, 1, 0, 0])
    out = integrate_flow(y, unit, "H", 0.01, 100)
    assert np.max(np.abs(out - y)) < 1e-12


def test_flow_conservation(unit):
    y = sample_orbit(OrbitParams(2.5, 1.0), unit, 1, seed=4)[0]
    h0 = hamiltonian(y, unit)
    yh = integrate_flow(y, unit, "H", 1e-3, 2000)
    assert abs(hamiltonian(yh, unit) - h0) <= 1e-8 * abs(h0)
    yk = integrate_flow(y, unit, "K", 1e-4, 2000)
    assert np.allclose(casimirs(yk, unit), casimirs(y, unit), rtol=1e-8, atol=1e-8)


def test_flow_divergence_raises(unit):
    with np.errstate(all="ignore"), pytest.raises(StepDiverged):
        integrate_flow(np.full(6, 50.0), unit, "K", 1.0, 50, bound=1e3)


def test_linearization_is_jacobian(unit, rng):
    y = rng.normal(size=6)
    L = linearization(y, unit, 1.0, 0.5)
    f = lambda v: x_h(v, unit) + 0.5 * x_k(v, unit)
    J = np.column_stack([(f(y + 1e-6 * e) - f(y - 1e-6 * e)) / 2e-6 for e in np.eye(6)])
    assert np.allclose(L, J, rtol=1e-5, atol=1e-5 * np.max(np.abs(J)))
