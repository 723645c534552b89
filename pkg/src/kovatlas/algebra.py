"""Lie-Poisson pencil so(4)-e(3)-so(3,1) with the Kovalevskaya-type Hamiltonian.

Phase points are stored in the fixed coordinate order (J1, J2, J3, x1, x2, x3).
Most functions accept either a :class:`PhasePoint` or a float array whose last
axis has length 6; the scalar-valued ones broadcast over leading axes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .config import DEFAULT_TOL, EmptyOrbit, SingularOrbit, StepDiverged

Field = Literal["H", "K"]


@dataclass(frozen=True)
class PencilParams:
    kappa: float = 1.0
    c1: float = 1.0

    def __post_init__(self):
        if self.c1 == 0:
            raise ValueError("c1 must be non-zero")


@dataclass(frozen=True)
class OrbitParams:
    a: float
    b: float

    def discriminant(self, kappa: float) -> float:
        return self.a * self.a - 4.0 * kappa * self.b * self.b

    def is_nonsingular(self, kappa: float) -> bool:
        if kappa > 0:
            return self.a > 2.0 * math.sqrt(kappa) * abs(self.b)
        if kappa == 0:
            return self.a > 0
        return self.discriminant(kappa) > 0


@dataclass(frozen=True)
class PhasePoint:
    J: tuple[float, float, float]
    x: tuple[float, float, float]

    def as_array(self) -> np.ndarray:
        return np.array([*self.J, *self.x], dtype=float)

    @classmethod
    def from_array(cls, v) -> "PhasePoint":
        v = np.asarray(v, dtype=float).reshape(6)
        return cls(tuple(float(t) for t in v[:3]), tuple(float(t) for t in v[3:]))

    def to_list(self) -> list[float]:
        return [*self.J, *self.x]


@dataclass(frozen=True)
class MomentumValue:
    h: float
    k: float


def as_vec(p) -> np.ndarray:
    if isinstance(p, PhasePoint):
        return p.as_array()
    return np.asarray(p, dtype=float)


_EPS = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    _EPS[_i, _j, _k] = 1.0
    _EPS[_j, _i, _k] = -1.0


def structure_tensor(kappa: float) -> np.ndarray:
    """C with P_ij(y) = sum_m C[i, j, m] y_m."""
    C = np.zeros((6, 6, 6))
    C[:3, :3, :3] = _EPS
    C[:3, 3:, 3:] = _EPS
    C[3:, :3, 3:] = _EPS
    C[3:, 3:, :3] = kappa * _EPS
    return C


def poisson_bivector(p, params: PencilParams) -> np.ndarray:
    y = as_vec(p)
    return np.einsum("ijm,m->ij", structure_tensor(params.kappa), y)


def casimirs(p, params: PencilParams):
    y = as_vec(p)
    J, x = y[..., :3], y[..., 3:]
    f1 = np.sum(x * x, axis=-1) + params.kappa * np.sum(J * J, axis=-1)
    f2 = np.sum(x * J, axis=-1)
    return f1, f2


def casimir_gradients(p, params: PencilParams):
    y = as_vec(p)
    J, x = y[:3], y[3:]
    g1 = np.concatenate([2.0 * params.kappa * J, 2.0 * x])
    g2 = np.concatenate([x, J])
    return g1, g2


def on_orbit(p, orbit: OrbitParams, params: PencilParams, tol: float | None = None) -> bool:
    tol = DEFAULT_TOL.casimir_tol if tol is None else tol
    f1, f2 = casimirs(p, params)
    scale = max(1.0, abs(orbit.a))
    return abs(f1 - orbit.a) <= tol * scale and abs(f2 - orbit.b) <= tol * scale


def hamiltonian(p, params: PencilParams):
    y = as_vec(p)
    return y[..., 0] ** 2 + y[..., 1] ** 2 + 2.0 * y[..., 2] ** 2 + 2.0 * params.c1 * y[..., 3]


def _uv(y, params: PencilParams):
    c1, kappa = params.c1, params.kappa
    J1, J2, x1, x2 = y[..., 0], y[..., 1], y[..., 3], y[..., 4]
    u = J1 * J1 - J2 * J2 - 2.0 * c1 * x1 + kappa * c1 * c1
    v = 2.0 * J1 * J2 - 2.0 * c1 * x2
    return u, v


def integral_k(p, params: PencilParams):
    u, v = _uv(as_vec(p), params)
    return u * u + v * v


def momentum_map(p, params: PencilParams):
    """(H, K); returns a MomentumValue for a single point, an (n, 2) array otherwise."""
    y = as_vec(p)
    h = hamiltonian(y, params)
    k = integral_k(y, params)
    if y.ndim == 1:
        return MomentumValue(float(h), float(k))
    return np.stack([h, k], axis=-1)


def grad_h(p, params: PencilParams) -> np.ndarray:
    y = as_vec(p)
    g = np.zeros_like(y)
    g[..., 0] = 2.0 * y[..., 0]
    g[..., 1] = 2.0 * y[..., 1]
    g[..., 2] = 4.0 * y[..., 2]
    g[..., 3] = 2.0 * params.c1
    return g


def _grad_uv(y, params: PencilParams):
    c1 = params.c1
    gu = np.zeros_like(y)
    gv = np.zeros_like(y)
    gu[..., 0], gu[..., 1], gu[..., 3] = 2.0 * y[..., 0], -2.0 * y[..., 1], -2.0 * c1
    gv[..., 0], gv[..., 1], gv[..., 4] = 2.0 * y[..., 1], 2.0 * y[..., 0], -2.0 * c1
    return gu, gv


def grad_k(p, params: PencilParams) -> np.ndarray:
    y = as_vec(p)
    u, v = _uv(y, params)
    gu, gv = _grad_uv(y, params)
    return 2.0 * u[..., None] * gu + 2.0 * v[..., None] * gv


def hess_h(p=None, params: PencilParams | None = None) -> np.ndarray:
    return np.diag([2.0, 2.0, 4.0, 0.0, 0.0, 0.0])


def hess_k(p, params: PencilParams) -> np.ndarray:
    y = as_vec(p)
    u, v = _uv(y, params)
    gu, gv = _grad_uv(y, params)
    hu = np.diag([2.0, -2.0, 0.0, 0.0, 0.0, 0.0])
    hv = np.zeros((6, 6))
    hv[0, 1] = hv[1, 0] = 2.0
    return 2.0 * (np.outer(gu, gu) + u * hu + np.outer(gv, gv) + v * hv)


def _cross(u, v):
    # np.cross is slow on tiny arrays; this broadcasts the same way over leading axes
    u1, u2, u3 = u[..., 0], u[..., 1], u[..., 2]
    v1, v2, v3 = v[..., 0], v[..., 1], v[..., 2]
    return np.stack([u2 * v3 - u3 * v2, u3 * v1 - u1 * v3, u1 * v2 - u2 * v1], axis=-1)


def ham_vector_field(p, params: PencilParams, grad_f) -> np.ndarray:
    """P(p) grad_f; broadcasts over leading axes of p and grad_f."""
    y = as_vec(p)
    g = np.asarray(grad_f, dtype=float)
    J, x, gJ, gx = y[..., :3], y[..., 3:], g[..., :3], g[..., 3:]
    out_J = _cross(gJ, J) + _cross(gx, x)
    out_x = _cross(gJ, x) + params.kappa * _cross(gx, J)
    return np.concatenate([out_J, out_x], axis=-1)


def xh_closed_form(p, params: PencilParams) -> np.ndarray:
    """X_H written out component by component."""
    J1, J2, J3, x1, x2, x3 = as_vec(p)
    c1, kappa = params.c1, params.kappa
    return np.array([
        -2.0 * J2 * J3,
        2.0 * J1 * J3 - 2.0 * c1 * x3,
        2.0 * c1 * x2,
        2.0 * J2 * x3 - 4.0 * J3 * x2,
        4.0 * J3 * x1 - 2.0 * J1 * x3 - 2.0 * kappa * c1 * J3,
        2.0 * J1 * x2 - 2.0 * J2 * x1 + 2.0 * kappa * c1 * J2,
    ])


def x_h(p, params: PencilParams) -> np.ndarray:
    return ham_vector_field(p, params, grad_h(p, params))


def x_k(p, params: PencilParams) -> np.ndarray:
    return ham_vector_field(p, params, grad_k(p, params))


def poisson_bracket(p, params: PencilParams, grad_f, grad_g) -> float:
    return float(np.asarray(grad_f) @ poisson_bivector(p, params) @ np.asarray(grad_g))


def linearization_from(p, params: PencilParams, grad, hess) -> np.ndarray:
    """Jacobian of y -> P(y) grad F(y) given grad F and Hess F at p."""
    C = structure_tensor(params.kappa)
    return poisson_bivector(p, params) @ np.asarray(hess, dtype=float) + np.einsum("ijm,j->im", C, grad)


def linearization(p, params: PencilParams, alpha: float, beta: float) -> np.ndarray:
    """Jacobian of y -> P(y) grad F(y) for F = alpha*H + beta*K."""
    y = as_vec(p)
    grad = alpha * grad_h(y, params) + beta * grad_k(y, params)
    hess = alpha * hess_h() + beta * hess_k(y, params)
    return linearization_from(y, params, grad, hess)


def scale_point(p, params: PencilParams, lam: float, mu: float, orbit: OrbitParams | None = None):
    """Apply the (lambda, mu) rescaling of coordinates and constants.

    H picks up a factor mu**2 and K a factor mu**4.
    """
    if lam == 0 or mu == 0:
        raise ValueError("scaling factors must be non-zero")
    y = as_vec(p)
    y2 = np.concatenate([mu * y[:3], lam * mu * y[3:]])
    params2 = PencilParams(kappa=lam * lam * params.kappa, c1=mu / lam * params.c1)
    orbit2 = None
    if orbit is not None:
        orbit2 = OrbitParams(a=mu * mu * lam * lam * orbit.a, b=mu * mu * lam * orbit.b)
    return PhasePoint.from_array(y2), params2, orbit2


_SYMMETRY_SIGNS = {
    "sigma2": np.array([1.0, -1.0, 1.0, 1.0, -1.0, 1.0]),
    "sigma3": np.array([1.0, 1.0, -1.0, 1.0, 1.0, -1.0]),
    "negJ": np.array([-1.0, -1.0, -1.0, 1.0, 1.0, 1.0]),
}


def apply_symmetry(p, which: str):
    if which not in _SYMMETRY_SIGNS:
        raise ValueError(f"unknown symmetry {which!r}")
    y = as_vec(p) * _SYMMETRY_SIGNS[which]
    return PhasePoint.from_array(y) if isinstance(p, PhasePoint) else y


def sphere_radii(orbit: OrbitParams, params: PencilParams) -> tuple[float, float]:
    """Radii of the two spheres whose product is the orbit (kappa > 0)."""
    if params.kappa <= 0:
        raise ValueError("orbit sampling needs kappa > 0")
    s = 2.0 * math.sqrt(params.kappa) * orbit.b
    r1sq, r2sq = orbit.a + s, orbit.a - s
    lim = 2.0 * math.sqrt(params.kappa) * abs(orbit.b)
    if orbit.a < lim:
        raise EmptyOrbit(f"no orbit for a={orbit.a} < 2*sqrt(kappa)*|b|={lim}")
    if min(r1sq, r2sq) <= 0.0:
        raise SingularOrbit(f"a={orbit.a} = 2*sqrt(kappa)*|b|")
    return math.sqrt(r1sq), math.sqrt(r2sq)


def _unit_vectors(rng: np.random.Generator, n: int) -> np.ndarray:
    g = rng.standard_normal((n, 3))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def sample_orbit(orbit: OrbitParams, params: PencilParams, n: int, seed=None) -> np.ndarray:
    """Uniform samples of M_{a,b} ~ S^2 x S^2 as an (n, 6) array.

    x + sqrt(kappa) J and x - sqrt(kappa) J range independently over spheres
    of squared radius a +- 2 sqrt(kappa) b.
    """
    r1, r2 = sphere_radii(orbit, params)
    rng = np.random.default_rng(seed)
    m = r1 * _unit_vectors(rng, n)
    q = r2 * _unit_vectors(rng, n)
    sk = math.sqrt(params.kappa)
    return np.concatenate([(m - q) / (2.0 * sk), (m + q) / 2.0], axis=1)


def vector_field(p, params: PencilParams, field: Field) -> np.ndarray:
    if field == "H":
        return x_h(p, params)
    if field == "K":
        return x_k(p, params)
    raise ValueError(f"unknown field {field!r}")


def integrate_flow(p, params: PencilParams, field: Field, dt: float, steps: int,
                   bound: float = 1e6, record: bool = False):
    """Fixed-step RK4 along X_H or X_K; p may be a batch of points."""
    y = as_vec(p).copy()
    traj = [y.copy()] if record else None
    for _ in range(steps):
        k1 = vector_field(y, params, field)
        k2 = vector_field(y + 0.5 * dt * k1, params, field)
        k3 = vector_field(y + 0.5 * dt * k2, params, field)
        k4 = vector_field(y + dt * k3, params, field)
        y = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(y)) or np.max(np.abs(y), initial=0.0) > bound:
            raise StepDiverged(f"coordinates left |y| <= {bound}")
        if record:
            traj.append(y.copy())
    if record:
        return np.array(traj)
    return PhasePoint.from_array(y) if isinstance(p, PhasePoint) else y
