"""Critical points of the momentum map over a prescribed value (h, k).

A point y of the orbit is critical of rank <= 1 with image (h, k) when, for some
lambda, X_K(y) + lambda X_H(y) = 0. We solve that overdetermined system by
Levenberg-Marquardt from orbit samples whose momenta are close to (h, k), then
group the solutions into the critical circles they lie on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .algebra import (
    OrbitParams,
    PencilParams,
    grad_h,
    grad_k,
    hamiltonian,
    integral_k,
    integrate_flow,
    linearization,
    x_h,
    x_k,
)
from .config import StepDiverged
from .linalg import eigvals


@dataclass
class CriticalCircle:
    points: np.ndarray
    lam: float
    kind: str  # "elliptic", "hyperbolic", "rank0" or "degenerate"
    mu: complex

    @property
    def representative(self) -> np.ndarray:
        return self.points[0]


def _scales(orbit: OrbitParams, hk) -> np.ndarray:
    return np.array([max(1.0, abs(orbit.a)), max(1.0, abs(orbit.b)),
                     max(1.0, abs(hk[0])), max(1.0, abs(hk[1]))])


def _residual(v, orbit, params, hk, sc, sx):
    y, lam = v[:6], v[6]
    J, x = y[:3], y[3:]
    f1 = x @ x + params.kappa * (J @ J)
    f2 = x @ J
    r0 = np.array([f1 - orbit.a, f2 - orbit.b, hamiltonian(y, params) - hk[0],
                   integral_k(y, params) - hk[1]]) / sc
    r1 = (x_k(y, params) + lam * x_h(y, params)) / sx
    return np.concatenate([r0, r1])


def _jacobian(v, orbit, params, hk, sc, sx):
    y, lam = v[:6], v[6]
    J, x = y[:3], y[3:]
    top = np.stack([np.concatenate([2.0 * params.kappa * J, 2.0 * x]), np.concatenate([x, J]),
                    grad_h(y, params), grad_k(y, params)]) / sc[:, None]
    jac = np.zeros((10, 7))
    jac[:4, :6] = top
    jac[4:, :6] = linearization(y, params, lam, 1.0) / sx
    jac[4:, 6] = x_h(y, params) / sx
    return jac


def _lambda_ls(y, params) -> float:
    xh, xk = x_h(y, params), x_k(y, params)
    n = float(xh @ xh)
    return 0.0 if n == 0 else -float(xk @ xh) / n


def _is_solution(y, lam, orbit, params, hk, tol) -> bool:
    sc = _scales(orbit, hk)
    J, x = y[:3], y[3:]
    g = np.array([x @ x + params.kappa * (J @ J) - orbit.a, x @ J - orbit.b,
                  hamiltonian(y, params) - hk[0], integral_k(y, params) - hk[1]]) / sc
    xh, xk = x_h(y, params), x_k(y, params)
    sx = max(1.0, float(np.max(np.abs(xk))), abs(lam) * float(np.max(np.abs(xh))))
    return float(np.max(np.abs(g))) < tol and float(np.max(np.abs(xk + lam * xh))) < 10 * tol * sx


def solve_from(y0, orbit: OrbitParams, params: PencilParams, hk, tol: float = 1e-10):
    """One Levenberg-Marquardt run; returns (y, lam) or None."""
    y0 = np.asarray(y0, dtype=float)
    sc = _scales(orbit, hk)
    sx = max(1.0, float(np.max(np.abs(y0))) ** 3)
    v0 = np.concatenate([y0, [_lambda_ls(y0, params)]])
    try:
        sol = least_squares(_residual, v0, jac=_jacobian, args=(orbit, params, hk, sc, sx), method="lm",
                            xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=120)
    except (ValueError, FloatingPointError):
        return None
    y, lam = sol.x[:6], float(sol.x[6])
    if not np.all(np.isfinite(sol.x)):
        return None
    lam = _lambda_ls(y, params) if np.max(np.abs(x_h(y, params))) > 0 else lam
    return (y, lam) if _is_solution(y, lam, orbit, params, hk, tol) else None


def nearest_starts(samples: np.ndarray, momenta: np.ndarray, hk, n: int) -> np.ndarray:
    sh = float(np.ptp(momenta[:, 0])) or 1.0
    sk = float(np.ptp(momenta[:, 1])) or 1.0
    d = np.hypot((momenta[:, 0] - hk[0]) / sh, (momenta[:, 1] - hk[1]) / sk)
    n = min(n, len(d))
    idx = np.argpartition(d, n - 1)[:n]
    return samples[idx[np.argsort(d[idx])]]


def critical_points_over(orbit: OrbitParams, params: PencilParams, hk, starts: np.ndarray,
                         stop_after: int | None = None, tol: float = 1e-10) -> list[tuple[np.ndarray, float]]:
    """Distinct critical points found from the given starting points."""
    found: list[tuple[np.ndarray, float]] = []
    for y0 in starts:
        s = solve_from(y0, orbit, params, hk, tol)
        if s is None:
            continue
        if all(np.max(np.abs(s[0] - f[0])) > 1e-7 * max(1.0, np.max(np.abs(f[0]))) for f in found):
            found.append(s)
        if stop_after is not None and len(found) >= stop_after:
            break
    return found


def has_critical_preimage(orbit: OrbitParams, params: PencilParams, hk, starts: np.ndarray) -> bool:
    return bool(critical_points_over(orbit, params, hk, starts, stop_after=1))


def circle_kind(y, lam, params, rel: float = 1e-6) -> tuple[str, complex]:
    xh = x_h(y, params)
    scale = max(1.0, float(np.max(np.abs(y))) ** 3)
    if float(np.max(np.abs(xh))) < 1e-8 * scale and float(np.max(np.abs(x_k(y, params)))) < 1e-8 * scale:
        return "rank0", 0j
    ev = eigvals(linearization(y, params, lam, 1.0))
    mu = complex(ev[np.argmax(np.abs(ev))])
    if abs(mu) < rel * scale:
        return "degenerate", mu
    return ("hyperbolic" if abs(mu.real) > abs(mu.imag) else "elliptic"), mu


def group_circles(points: list[tuple[np.ndarray, float]], params: PencilParams,
                  steps: int = 3000) -> list[CriticalCircle]:
    """Group critical points into X_H-orbits (critical circles, or single rank-0 points)."""
    circles: list[CriticalCircle] = []
    todo = list(points)
    while todo:
        y, lam = todo.pop(0)
        kind, mu = circle_kind(y, lam, params)
        members = [y]
        if kind != "rank0" and todo:
            v = x_h(y, params)
            field = "H" if np.max(np.abs(v)) > 1e-9 else "K"
            speed = float(np.linalg.norm(v if field == "H" else x_k(y, params)))
            size = max(1e-6, float(np.linalg.norm(y)))
            dt = 0.01 * size / speed
            try:
                traj = integrate_flow(y, params, field, dt, steps, record=True)
            except StepDiverged:
                traj = y[None, :]
            keep = []
            for q in todo:
                d = float(np.min(np.linalg.norm(traj - q[0], axis=1)))
                (members if d < 0.05 * size else keep).append(q[0] if d < 0.05 * size else q)
            todo = keep
        circles.append(CriticalCircle(np.array(members), lam, kind, mu))
    return circles


def critical_circles_over(orbit: OrbitParams, params: PencilParams, hk, starts: np.ndarray) -> list[CriticalCircle]:
    return group_circles(critical_points_over(orbit, params, hk, starts), params)
