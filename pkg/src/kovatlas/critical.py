"""Critical points of the momentum map (H, K).

Rank-1 points come in six families F1..F6, rank-0 points in three families
R1..R3. For every family the proportionality coefficient lambda with
X_K + lambda X_H = 0 and the nontrivial eigenvalue mu of A_{K + lambda H} are
known in closed form; everything here is cross-checked against the numeric
linearization computed with the in-package eigen-solver.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations

import numpy as np
from scipy.linalg import qr

from .algebra import (OrbitParams, PencilParams, PhasePoint, as_vec, grad_h, grad_k, hess_h, hess_k,
                      linearization, linearization_from, momentum_map, poisson_bivector, x_h, x_k)
from .config import (DEFAULT_TOL, FamilyMismatch, InvalidParameters, NotCritical, SingularOrbit,
                     ToleranceConfig)
from .linalg import eigvals
from .roots import poly_real_roots


class Family(str, Enum):
    F1 = "F1"
    F2 = "F2"
    F3 = "F3"
    F4 = "F4"
    F5 = "F5"
    F6 = "F6"
    R1 = "R1"
    R2 = "R2"
    R3 = "R3"


RANK1_FAMILIES = (Family.F1, Family.F2, Family.F3, Family.F4, Family.F5, Family.F6)
RANK0_FAMILIES = (Family.R1, Family.R2, Family.R3)


class PointType(str, Enum):
    CenterCenter = "CenterCenter"
    CenterSaddle = "CenterSaddle"
    SaddleSaddle = "SaddleSaddle"
    FocusFocus = "FocusFocus"
    Degenerate = "Degenerate"
    Rank1Elliptic = "Rank1Elliptic"
    Rank1Hyperbolic = "Rank1Hyperbolic"


@dataclass
class CriticalRecord:
    point: PhasePoint
    rank: int
    family: Family
    lam: float | None
    mu_sq: float | None
    numeric_spectrum: np.ndarray
    type: PointType
    image: tuple[float, float]
    closed_spectrum: list[complex] = field(default_factory=list)
    z: float | None = None

    def to_json(self) -> dict:
        def cx(v):
            v = complex(v)
            return [v.real, v.imag]
        mu = None if self.mu_sq is None else cx(cmath.sqrt(self.mu_sq))
        return {
            "point": self.point.to_list(),
            "family": self.family.value,
            "rank": self.rank,
            "lambda": self.lam,
            "mu": mu,
            "spectrum": [cx(v) for v in self.numeric_spectrum],
            "type": self.type.value,
            "image": {"h": self.image[0], "k": self.image[1]},
        }


# ---------------------------------------------------------------- membership

def _family_residuals(tag: Family, y: np.ndarray, params: PencilParams):
    """Residuals of the defining equations, or None when y is in an excluded set."""
    J1, J2, J3, x1, x2, x3 = y
    k, c = params.kappa, params.c1
    if tag is Family.F1:
        return [x1 - (k * c * c + J1 * J1 - J2 * J2) / (2 * c), x2 - J1 * J2 / c]
    if tag is Family.F2:
        return [J2, x3 - J1 * J3 / c]
    if tag is Family.F3:
        if J2 == 0 or J3 == 0:
            return None
        g = J1 * J3 - c * x3
        den = g * g + J2 * J2 * J3 * J3
        # polynomial forms of the two relations
        r2 = x2 * den - J2 * ((J1 * x3 - k * c * J3) * g + J2 * J2 * J3 * x3)
        r1 = (x1 - k * c) * J2 * J3 - (J1 * J3 - c * x3) * x2
        return [r1, r2]
    if tag is Family.F4:
        return [J2, x2, J1 * x3 - J3 * x1]
    if tag is Family.F5:
        d = x1 - k * c
        cubic = (d * J1 + J2 * x2) * (J2 * d - J1 * x2) + c * x2 * (x1 * d + x2 * x2)
        return [J3, x3, cubic]
    if tag is Family.F6:
        return [J1, J3, x2]
    if tag is Family.R1:
        return [J3, x1 - k * c, x2, x3]
    if tag is Family.R2:
        return [J2, J3, x2, x3]
    if tag is Family.R3:
        return [J2, x2, x1 - (k * c * c + J1 * J1) / (2 * c), x3 - J1 * J3 / c]
    raise ValueError(tag)


_DEGREE = {Family.F3: 5, Family.F5: 3}


def in_family(tag: Family, p, params: PencilParams, tol: float = DEFAULT_TOL.membership_tol) -> bool:
    y = as_vec(p)
    res = _family_residuals(Family(tag), y, params)
    if res is None:
        return False
    scale = max(1.0, float(np.max(np.abs(y))), abs(params.kappa * params.c1)) ** _DEGREE.get(Family(tag), 2)
    return all(abs(r) <= tol * scale for r in res)


def family_membership(p, params: PencilParams, tol: float = DEFAULT_TOL.membership_tol) -> set[Family]:
    """All families (rank-1 and rank-0) whose defining equations hold at p."""
    return {f for f in Family if in_family(f, p, params, tol)}


# ---------------------------------------------------------------- minors

def minor_oracle(p, params: PencilParams) -> np.ndarray:
    """The 15 two-by-two minors of the 6x2 matrix (X_H, X_K)."""
    a, b = x_h(p, params), x_k(p, params)
    return np.array([a[i] * b[j] - a[j] * b[i] for i, j in combinations(range(6), 2)])


def delta13_closed_form(p, params: PencilParams) -> float:
    J1, J2, J3, x1, x2, x3 = as_vec(p)
    k, c = params.kappa, params.c1
    return 16 * c * (c * x2 - J1 * J2) * (J2 * J3 * (k * c - x1) + (J1 * J3 - c * x3) * x2)


def minors_scale(p, params: PencilParams) -> float:
    return float(np.linalg.norm(x_h(p, params)) * np.linalg.norm(grad_k(p, params)) + 1.0)


def is_dependent(p, params: PencilParams, tol: float = 1e-9) -> bool:
    m = minor_oracle(p, params)
    return bool(np.max(np.abs(m)) <= tol * minors_scale(p, params) ** 1)


# ---------------------------------------------------------------- lambda and mu

def lambda_mu(tag: Family, p, params: PencilParams, tol: float = DEFAULT_TOL.membership_tol):
    """(lambda, mu^2) from the closed forms; mu^2 < 0 means an imaginary pair."""
    tag = Family(tag)
    y = as_vec(p)
    if not in_family(tag, y, params, tol):
        raise FamilyMismatch(f"point is not in family {tag.value}")
    J1, J2, J3, x1, x2, x3 = y
    k, c = params.kappa, params.c1
    if tag is Family.F1:
        return 0.0, -64.0 * ((k * c * c + J1 * J1 + J2 * J2) * J3 - 2 * c * J1 * x3) ** 2
    if tag is Family.F2:
        lam = 2 * (k * c * c - J1 * J1)
        mu_sq = 64 * c * (J1 * J1 - J3 * J3 - c * x1) * ((J1 * J1 - c * x1) * (x1 - k * c) - c * x2 * x2)
        return lam, mu_sq
    if tag is Family.F3:
        lam = 2 * (k * c * c + J1 * J1 + J2 * J2 - 2 * c * J1 * x3 / J3)
        s = ((J1 * J3 - c * x3) ** 2 + ((J1 * J1 + J2 * J2) - c * J1 * x3 / J3) ** 2
             + J2 * J2 * (k * c * c + J3 * J3))
        return lam, -32 * lam * s
    if tag is Family.F4:
        lam = 2 * (k * c * c + J1 * J1 - 2 * c * x1)
        return lam, -32 * lam * ((J1 * J1 - c * x1) ** 2 + (J1 * J3 - c * x3) ** 2)
    if tag is Family.F5:
        if abs(x2) <= tol * max(1.0, float(np.max(np.abs(y)))):
            raise FamilyMismatch("F5 points with x2 = 0 belong to F6 or have rank 0")
        lam = 2 * (k * c * c - J1 * J1 + J2 * J2) + 4 * J1 * J2 * (x1 - k * c) / x2
        e = k * c * c + J1 * J1 - J2 * J2 - 2 * c * x1
        scale = max(1.0, float(np.max(np.abs(y)))) ** 2
        if abs(e) > 1e-9 * scale:
            gamma = (c * J1 * x2 * x2 - J1 * (x1 - k * c) * (J1 * J1 - J2 * J2 - c * x1)
                     - J2 * x2 * e)
            return lam, 16 * lam * lam * J2 * gamma / (x2 * e)
        # x1 on the special value: three sub-branches for x2
        if abs(x2 - J1 * J2 / c) <= 1e-9 * scale:
            return lam, 0.0
        w = (k * c * c - J1 * J1 + J2 * J2) / (2 * c)
        if abs(x2 - w) <= 1e-9 * scale:
            return lam, -32 * J2 * J2 * lam * (k * c * c + (J1 - J2) ** 2)
        if abs(x2 + w) <= 1e-9 * scale:
            return lam, -32 * J2 * J2 * lam * (k * c * c + (J1 + J2) ** 2)
        raise FamilyMismatch("F5 point on the special x1 value matches no sub-branch")
    if tag is Family.F6:
        lam = 2 * (k * c * c - J2 * J2 - 2 * c * x1)
        return lam, -32 * lam * c * c * (k * J2 * J2 + x1 * x1 + x3 * x3)
    raise FamilyMismatch(f"{tag.value} is a rank-0 family")


def criticality_residual(p, params: PencilParams, lam: float) -> float:
    """|X_K + lam X_H|_inf relative to the size of the two fields."""
    xh, xk = x_h(p, params), x_k(p, params)
    scale = max(1.0, float(np.max(np.abs(xk))), abs(lam) * float(np.max(np.abs(xh))))
    return float(np.max(np.abs(xk + lam * xh))) / scale


def numeric_linearization(p, params: PencilParams, alpha: float, beta: float,
                          tol: float = 1e-9) -> np.ndarray:
    """Eigenvalues of A_F for F = alpha H + beta K at a critical point of F."""
    y = as_vec(p)
    xf = alpha * x_h(y, params) + beta * x_k(y, params)
    scale = max(1.0, abs(alpha) * float(np.max(np.abs(x_h(y, params)))),
                abs(beta) * float(np.max(np.abs(x_k(y, params)))))
    if float(np.max(np.abs(xf))) > tol * scale:
        raise NotCritical(f"|X_F| = {np.max(np.abs(xf)):.3e} is not zero")
    L = linearization(y, params, alpha, beta)
    B, blocks = _adapted_basis(y, params)
    if B is None:
        return eigvals(L)
    T = B.T @ L @ B
    out, i = [], 0
    for m in blocks:
        out.append(eigvals(T[i:i + m, i:i + m]))
        i += m
    return np.concatenate(out)


def _adapted_basis(y, params: PencilParams):
    """Orthonormal basis in which every A_F at a critical point is block upper-triangular.

    A_F maps into the orbit tangent space T. At a rank-1 point it also kills the nonzero
    field X_g (g = H or K) and preserves T & ker dg, so the flag X_g < T & ker dg < T splits
    off the two zero eigenvalues exactly instead of leaving a defective cluster."""
    P = poisson_bivector(y, params)
    Q, R, _ = qr(P, pivoting=True)
    diag = np.abs(np.diag(R))
    r = int(np.sum(diag > 1e-10 * max(diag[0], 1e-300)))
    if r == 0 or r == len(y):
        return None, None
    T, C = Q[:, :r], Q[:, r:]
    fields = [(x_h(y, params), grad_h(y, params)), (x_k(y, params), grad_k(y, params))]
    v, g = max(fields, key=lambda f: np.linalg.norm(f[0]))
    if r != 4 or np.linalg.norm(v) <= 1e-8 * max(1.0, np.linalg.norm(g)):
        return Q, (r, len(y) - r)
    u = T.T @ v
    u /= np.linalg.norm(u)
    n = T.T @ g
    n -= (n @ u) * u
    if np.linalg.norm(n) <= 1e-12:
        return Q, (r, len(y) - r)
    n /= np.linalg.norm(n)
    mid = np.linalg.svd(np.column_stack([u, n]).T)[2][2:].T
    return np.column_stack([T @ u, T @ mid, T @ n, C]), (1, 2, 1, len(y) - r)


def casimir_linearization(p, params: PencilParams, which: int = 1) -> np.ndarray:
    """A_F for F = f1 (which=1) or f2 (which=2); both are identically zero."""
    y = as_vec(p)
    k = params.kappa
    if which == 1:
        grad = np.concatenate([2 * k * y[:3], 2 * y[3:]])
        hess = np.diag([2 * k] * 3 + [2.0] * 3)
    else:
        grad = np.concatenate([y[3:], y[:3]])
        hess = np.block([[np.zeros((3, 3)), np.eye(3)], [np.eye(3), np.zeros((3, 3))]])
    return linearization_from(y, params, grad, hess)


def rank1_spectrum_check(tag: Family, p, params: PencilParams, rel_tol: float = 1e-6) -> dict:
    """Compare numeric eigenvalues of A_{K + lam H} with {0 x4, +-mu}."""
    lam, mu_sq = lambda_mu(tag, p, params)
    ev = numeric_linearization(p, params, lam, 1.0, tol=1e-8)
    mu = cmath.sqrt(mu_sq)
    order = np.argsort(np.abs(ev))
    small, big = ev[order[:4]], ev[order[4:]]
    expected = np.array(sorted([mu, -mu], key=lambda v: (v.real, v.imag)))
    got = np.array(sorted(big, key=lambda v: (round(v.real, 9), round(v.imag, 9))))
    ref = max(abs(mu), 1.0)
    err_big = float(np.max(np.abs(np.sort_complex(got) - np.sort_complex(expected)))) / ref
    err_small = float(np.max(np.abs(small))) / ref
    return {"lambda": lam, "mu_sq": mu_sq, "spectrum": ev, "err_pair": err_big, "err_zero": err_small,
            "ok": err_big <= rel_tol and err_small <= rel_tol}


def rank1_type(mu_sq: float, scale: float = 1.0) -> PointType:
    if abs(mu_sq) <= 1e-12 * max(scale, 1.0):
        return PointType.Degenerate
    return PointType.Rank1Elliptic if mu_sq < 0 else PointType.Rank1Hyperbolic


# ---------------------------------------------------------------- rank-0 classification

def tangent_basis(p, params: PencilParams) -> np.ndarray:
    """Orthonormal basis (6 x r) of the image of the bivector at p."""
    P = poisson_bivector(p, params)
    Q, R, _ = qr(P, pivoting=True)
    diag = np.abs(np.diag(R))
    r = int(np.sum(diag > 1e-10 * max(diag[0], 1e-300)))
    return Q[:, :r]


def restricted_operators(p, params: PencilParams):
    Q = tangent_basis(p, params)
    if Q.shape[1] != 4:
        raise SingularOrbit(f"bivector has rank {Q.shape[1]} at this point")
    AH = Q.T @ linearization(p, params, 1.0, 0.0) @ Q
    AK = Q.T @ linearization(p, params, 0.0, 1.0) @ Q
    return AH, AK


def spectrum_type(ev: np.ndarray, scale: float, tol: float = 1e-6) -> PointType:
    real = [v for v in ev if abs(v.imag) <= tol * scale]
    imag = [v for v in ev if abs(v.real) <= tol * scale]
    if len(real) == 4:
        return PointType.SaddleSaddle
    if len(imag) == 4:
        return PointType.CenterCenter
    if len(real) == 2 and len(imag) == 2:
        return PointType.CenterSaddle
    if not real and not imag:
        return PointType.FocusFocus
    return PointType.Degenerate


def classify_rank0(p, params: PencilParams, tol: ToleranceConfig = DEFAULT_TOL,
                   n_dir: int = 32, return_details: bool = False):
    """Type of a rank-0 point from the spectrum of a generic combination a A_H + b A_K."""
    y = as_vec(p)
    xs = np.max(np.abs(x_h(y, params))) + np.max(np.abs(x_k(y, params)))
    if xs > 1e-8 * max(1.0, float(np.max(np.abs(y)))) ** 3:
        raise NotCritical("X_H and X_K do not both vanish")
    AH, AK = restricted_operators(y, params)
    nh, nk = np.linalg.norm(AH), np.linalg.norm(AK)
    details = {"independent": True, "best": None}
    if nh == 0 or nk == 0:
        details["independent"] = False
        return (PointType.Degenerate, details) if return_details else PointType.Degenerate
    AH, AK = AH / nh, AK / nk
    # linear independence of the restrictions
    cos = abs(float(np.sum(AH * AK)))
    if 1.0 - cos < tol.zero_tol:
        details["independent"] = False
        return (PointType.Degenerate, details) if return_details else PointType.Degenerate
    best = None
    for t in np.arange(n_dir) * math.pi / n_dir:
        M = math.cos(t) * AH + math.sin(t) * AK
        ev = eigvals(M)
        norm = np.linalg.norm(M)
        if np.min(np.abs(ev)) <= tol.zero_tol * norm:
            continue
        gap = min(abs(u - v) for u, v in combinations(ev, 2)) / norm
        if gap <= tol.zero_tol:
            continue
        if best is None or gap > best[0]:
            best = (gap, t, ev, norm)
    if best is None:
        return (PointType.Degenerate, details) if return_details else PointType.Degenerate
    details["best"] = {"gap": best[0], "theta": best[1], "spectrum": best[2]}
    kind = spectrum_type(best[2], best[3])
    return (kind, details) if return_details else kind


def smallest_rank0_eigenvalue(p, params: PencilParams) -> float:
    """Smallest |eigenvalue| of the restriction of A_H to the symplectic leaf."""
    AH, _ = restricted_operators(p, params)
    return float(np.min(np.abs(eigvals(AH))))


def rank0_spectrum_closed_form(tag: Family, p, params: PencilParams) -> list[complex]:
    """The four nonzero eigenvalues of A_H at a rank-0 point, from the closed forms."""
    J1, J2, J3, x1, x2, x3 = as_vec(p)
    k, c = params.kappa, params.c1
    tag = Family(tag)
    if tag is Family.R1:
        alpha = k * c * c - J1 * J1 - J2 * J2
        beta = c * J2
        root = cmath.sqrt(alpha * alpha + 4 * k * beta * beta)
        out = []
        for s in (1, -1):
            v = math.sqrt(2) * cmath.sqrt(alpha + s * root)
            out += [v, -v]
        return out
    if tag is Family.R2:
        u = 2 * cmath.sqrt(c * (x1 - k * c))
        v = 2 * cmath.sqrt(-J1 * J1 + 2 * c * x1 - k * c * c)
        return [u, -u, v, -v]
    if tag is Family.R3:
        u = 4j * J3
        v = math.sqrt(2) * cmath.sqrt(J1 * J1 - 2 * J3 * J3 - k * c * c)
        return [u, -u, v, -v]
    raise ValueError(f"{tag.value} is not a rank-0 family")


# ---------------------------------------------------------------- rank-0 enumeration

def quintic_coefficients(a: float, b: float, kappa: float, c1: float) -> list[float]:
    """Coefficients (highest first) of the quintic satisfied by J1 on the third rank-0 series."""
    c2 = c1 * c1
    return [1.0, 0.0, -2 * kappa * c2, -4 * b * c1, 4 * a * c2 + kappa * kappa * c2 * c2, -4 * kappa * b * c1 ** 3]


def reduced_quintic_coefficients(a_hat: float, b_hat: float) -> list[float]:
    """s^5 - 2 s^3 - 4 b s^2 + (4a + 1) s - 4b, the quintic after scaling J1 to s."""
    return [1.0, 0.0, -2.0, -4.0 * b_hat, 4.0 * a_hat + 1.0, -4.0 * b_hat]


def printed_reduced_quintic_coefficients(a_hat: float, b_hat: float) -> list[float]:
    """The reduced quintic with the misprinted b_hat factors; kept for comparison only."""
    return [1.0, 0.0, -2.0 * b_hat, -8.0 * b_hat, 4.0 * a_hat + 1.0, -4.0 * b_hat]


def quintic_roots_in_segment(a_hat: float, b_hat: float, tol: float = 1e-12) -> list[float]:
    if b_hat < 0:
        raise InvalidParameters("b_hat must be non-negative")
    roots = poly_real_roots(reduced_quintic_coefficients(a_hat, b_hat))
    return [s for s in roots if -tol <= s + s ** 3 <= 2 * b_hat + tol * max(1.0, b_hat)]


def quintic_census(a_hat: float, b_hat: float) -> int:
    return len(quintic_roots_in_segment(a_hat, b_hat))


def _record(tag: Family, y: np.ndarray, params: PencilParams, tol: ToleranceConfig, z=None) -> CriticalRecord:
    y = np.asarray(y, dtype=float)
    k, c = params.kappa, params.c1
    lam = None
    if tag is Family.R2:
        lam = 2 * (k * c * c - y[0] ** 2)
    elif tag is Family.R3:
        lam = 0.0
    AH, _ = restricted_operators(y, params)
    ptype = classify_rank0(y, params, tol)
    m = momentum_map(y, params)
    return CriticalRecord(point=PhasePoint.from_array(y), rank=0, family=tag, lam=lam, mu_sq=None,
                          numeric_spectrum=eigvals(linearization(y, params, 1.0, 0.0)), type=ptype,
                          image=(m.h, m.k), closed_spectrum=rank0_spectrum_closed_form(tag, y, params), z=z)


def _signed_roots(sq: float, tol: float) -> list[float]:
    if sq > tol:
        r = math.sqrt(sq)
        return [r, -r]
    if sq >= -tol:
        return [0.0]
    return []


def rank0_points(orbit: OrbitParams, params: PencilParams, tol: float = 1e-10) -> dict:
    """Phase points of each rank-0 series on the orbit, keyed by family, plus curve parameters z."""
    k, c = params.kappa, params.c1
    a, b = orbit.a, orbit.b
    if k <= 0:
        raise InvalidParameters("rank-0 enumeration is implemented for kappa > 0")
    if not orbit.is_nonsingular(k):
        raise SingularOrbit(f"orbit (a, b) = ({a}, {b}) is singular or empty")
    out = {Family.R1: [], Family.R2: [], Family.R3: []}
    zs = {Family.R1: [], Family.R2: [], Family.R3: []}
    scale = max(1.0, abs(a))
    # R1: (J1, J2, 0, kappa c, 0, 0)
    J1 = b / (k * c)
    for J2 in _signed_roots((a - k * k * c * c) / k - J1 * J1, tol * scale):
        out[Family.R1].append(np.array([J1, J2, 0.0, k * c, 0.0, 0.0]))
        zs[Family.R1].append(None)
    # R2: (J1, 0, 0, x1, 0, 0), x1^4 - a x1^2 + kappa b^2 = 0
    if b != 0:
        D = math.sqrt(a * a - 4 * k * b * b)
        for sq in ((a + D) / 2, (a - D) / 2):
            for x1 in (math.sqrt(sq), -math.sqrt(sq)):
                out[Family.R2].append(np.array([b / x1, 0.0, 0.0, x1, 0.0, 0.0]))
                zs[Family.R2].append(c * x1)
    else:
        ra = math.sqrt(a)
        for x1 in (ra, -ra):
            out[Family.R2].append(np.array([0.0, 0.0, 0.0, x1, 0.0, 0.0]))
            zs[Family.R2].append(c * x1)
        for J1 in (math.sqrt(a / k), -math.sqrt(a / k)):
            out[Family.R2].append(np.array([J1, 0.0, 0.0, 0.0, 0.0, 0.0]))
            zs[Family.R2].append(None)
    # R3: (J1, 0, J3, (kappa c^2 + J1^2)/(2c), 0, J1 J3 / c)
    if b != 0:
        for u in poly_real_roots(quintic_coefficients(a, b, k, c)):
            if u == 0:
                continue
            j3sq = (2 * b * c - k * c * c * u - u ** 3) / (2 * u)
            for J3 in _signed_roots(j3sq, 1e-9 * max(1.0, u * u)):
                x1 = (k * c * c + u * u) / (2 * c)
                out[Family.R3].append(np.array([u, 0.0, J3, x1, 0.0, u * J3 / c]))
                zs[Family.R3].append(J3 * J3 + c * x1)
    else:
        for J3 in _signed_roots((a - k * k * c * c / 4) / k, tol * scale):
            x1 = k * c / 2
            out[Family.R3].append(np.array([0.0, 0.0, J3, x1, 0.0, 0.0]))
            zs[Family.R3].append(J3 * J3 + c * x1)
    return {"points": out, "z": zs}


def rank0_enumerate(orbit: OrbitParams, params: PencilParams,
                    tol: ToleranceConfig = DEFAULT_TOL) -> list[CriticalRecord]:
    data = rank0_points(orbit, params)
    records = []
    for tag in RANK0_FAMILIES:
        for y, z in zip(data["points"][tag], data["z"][tag]):
            records.append(_record(tag, y, params, tol, z))
    return records


def rank0_counts(orbit: OrbitParams, params: PencilParams) -> dict:
    pts = rank0_points(orbit, params)["points"]
    return {tag.value: len(v) for tag, v in pts.items()}


# ---------------------------------------------------------------- special configurations

def triple_intersection(t: float, kappa: float, c1: float) -> dict:
    """Orbit on which the line k=0, the parametric curve and the left parabola meet in one point."""
    from .curves import param_curve_hk, parabola_value

    x1 = (kappa * c1 * c1 + t * t) / (2 * c1)
    a = x1 * x1 + kappa * t * t
    b = t * x1
    params = PencilParams(kappa, c1)
    y = np.array([t, 0.0, 0.0, x1, 0.0, 0.0])
    m = momentum_map(y, params)
    out = {"a": a, "b": b, "point": PhasePoint.from_array(y), "image": (m.h, m.k)}
    out["rank0"] = bool(np.max(np.abs(x_h(y, params))) < 1e-10 * max(1.0, a) and
                        np.max(np.abs(x_k(y, params))) < 1e-10 * max(1.0, a) ** 2)
    if b != 0:
        z = c1 * x1
        h, k = param_curve_hk(z, a, b, kappa, c1)
        out["curve_point"] = (float(h), float(k))
        out["left_parabola_k"] = parabola_value("left", m.h, a, b, kappa, c1)
    return out


def circle_pair_geometry(z: float, orbit: OrbitParams, params: PencilParams, tol: float = 1e-12) -> dict:
    """Solutions of family F2 over the curve point with parameter z.

    With w = J3^2 / c1 they satisfy (w + d)^2 + x2^2 = R^2. J3 = 0 occurs on the
    solution set iff z^4 - a c1^2 z^2 + kappa b^2 c1^4 <= 0.
    """
    k, c = params.kappa, params.c1
    a, b = orbit.a, orbit.b
    if k == 0 or b == 0:
        raise InvalidParameters("needs kappa != 0 and b != 0")
    if z == 0:
        raise InvalidParameters("z must be nonzero")
    d = (b * b * c / (z * z) + k * c) / 2 - z / c
    R2 = a - k * b * b * c * c / (z * z) - z * z / (c * c) + d * d
    quartic = z ** 4 - a * c * c * z * z + k * b * b * c ** 4
    qscale = max(z ** 4, a * c * c * z * z, abs(k) * b * b * c ** 4, 1e-300)
    out = {"z": z, "d": d, "R_sq": R2, "quartic": quartic,
           "J1": b * c / z, "x1_of_J3": "(z - J3^2)/c1", "x3_of_J3": "b J3 / z"}
    if abs(quartic) <= tol * qscale:
        out["regime"] = "boundary"
    elif R2 < 0:
        out["regime"] = "empty"
    elif quartic < 0:
        out["regime"] = "meets_J3_zero"
    else:
        w_max = -d + math.sqrt(R2)
        out["regime"] = "two_circles" if w_max * c > 0 else "empty"
    return out


def circle_points(z: float, orbit: OrbitParams, params: PencilParams, n: int = 16) -> np.ndarray:
    """Phase points on the F2 solution set over z (both J3 signs)."""
    geo = circle_pair_geometry(z, orbit, params)
    c, b = params.c1, orbit.b
    if geo["R_sq"] < 0:
        return np.zeros((0, 6))
    R = math.sqrt(geo["R_sq"])
    pts = []
    for th in np.linspace(0, 2 * math.pi, n, endpoint=False):
        w = -geo["d"] + R * math.cos(th)
        x2 = R * math.sin(th)
        if c * w < 0:
            continue
        for sgn in (1, -1):
            J3 = sgn * math.sqrt(c * w)
            pts.append([b * c / z, 0.0, J3, (z - J3 * J3) / c, x2, b * J3 / z])
    return np.array(pts)


# ---------------------------------------------------------------- family samplers

def sample_family(tag: Family, rng: np.random.Generator, params: PencilParams, scale: float = 1.5) -> np.ndarray:
    """A random point of a rank-1 family (used as a test oracle)."""
    tag = Family(tag)
    k, c = params.kappa, params.c1
    for _ in range(1000):
        J1, J2, J3, x1, x2, x3 = rng.uniform(-scale, scale, 6)
        if tag is Family.F1:
            x1 = (k * c * c + J1 * J1 - J2 * J2) / (2 * c)
            x2 = J1 * J2 / c
        elif tag is Family.F2:
            J2, x3 = 0.0, J1 * J3 / c
        elif tag is Family.F3:
            if abs(J2) < 0.1 or abs(J3) < 0.1:
                continue
            g = J1 * J3 - c * x3
            den = g * g + J2 * J2 * J3 * J3
            x2 = J2 * ((J1 * x3 - k * c * J3) * g + J2 * J2 * J3 * x3) / den
            x1 = k * c + (J1 - c * x3 / J3) * x2 / J2
        elif tag is Family.F4:
            if abs(J1) < 0.1:
                continue
            J2 = x2 = 0.0
            x3 = J3 * x1 / J1
        elif tag is Family.F5:
            J3 = x3 = 0.0
            d = x1 - k * c
            coeffs = [c, -J1 * J2, d * (J2 * J2 - J1 * J1) + c * x1 * d, J1 * J2 * d * d]
            roots = [r for r in poly_real_roots(coeffs) if abs(r) > 0.05]
            if not roots:
                continue
            x2 = roots[int(rng.integers(len(roots)))]
            for _ in range(3):
                f, df = np.polyval(coeffs, x2), np.polyval(np.polyder(coeffs), x2)
                if df == 0:
                    break
                x2 -= f / df
            e = k * c * c + J1 * J1 - J2 * J2 - 2 * c * x1
            if abs(e) < 1e-3:
                continue
        elif tag is Family.F6:
            J1 = J3 = x2 = 0.0
        else:
            raise ValueError(f"{tag.value} is not a rank-1 family")
        y = np.array([J1, J2, J3, x1, x2, x3])
        if np.max(np.abs(y)) < 10 * scale:
            return y
    raise RuntimeError(f"could not sample family {tag.value}")
