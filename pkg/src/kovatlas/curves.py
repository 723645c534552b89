"""Curves in the (h, k) plane that carry the bifurcation diagrams.

Three regimes: kappa != 0 with b != 0 (line k=0, a parametric curve and two
parabolas), kappa != 0 with b = 0 (line, upper parabola with its tangent line,
two parabolas) and kappa = 0 (the classical Kovalevskaya curves).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np

from .algebra import MomentumValue
from .config import ComplexDiscriminant, ZeroParameter
from .roots import bracket_roots


class CurveId(str, Enum):
    LineKZero = "LineKZero"
    ParamCurve = "ParamCurve"
    LeftParabola = "LeftParabola"
    RightParabola = "RightParabola"
    UpParabolaB0 = "UpParabolaB0"
    TangentLineB0 = "TangentLineB0"
    LeftParabolaB0 = "LeftParabolaB0"
    RightParabolaB0 = "RightParabolaB0"
    ParamCurveK0 = "ParamCurveK0"
    ParabolaK0 = "ParabolaK0"
    UpParabolaK0B0 = "UpParabolaK0B0"
    TangentLineK0B0 = "TangentLineK0B0"
    ParabolaK0B0 = "ParabolaK0B0"


REGIME_CURVES = {
    "kpos_bnz": (CurveId.LineKZero, CurveId.ParamCurve, CurveId.LeftParabola, CurveId.RightParabola),
    "kpos_b0": (CurveId.LineKZero, CurveId.UpParabolaB0, CurveId.TangentLineB0,
                CurveId.LeftParabolaB0, CurveId.RightParabolaB0),
    "k0_bnz": (CurveId.LineKZero, CurveId.ParamCurveK0, CurveId.ParabolaK0),
    "k0_b0": (CurveId.LineKZero, CurveId.UpParabolaK0B0, CurveId.TangentLineK0B0, CurveId.ParabolaK0B0),
}


def discriminant_root(a: float, b: float, kappa: float) -> float:
    d = a * a - 4.0 * kappa * b * b
    if d < 0.0:
        raise ComplexDiscriminant(f"a^2 - 4 kappa b^2 = {d} < 0")
    return math.sqrt(d)


# ---------------------------------------------------------------- parametric curve

def param_curve_hk(z, a: float, b: float, kappa: float, c1: float):
    """Vectorized (h(z), k(z)).

    k is evaluated as 4ac^2 - 4 kappa c^2 z - 4 b^2 c^2 / z + (b^2 c^2 / z^2 - kappa c^2)^2,
    which keeps the z -> 0 regime (k ~ h^2) free of cancellation.
    """
    z = np.asarray(z, dtype=float)
    c2 = c1 * c1
    q = b * b * c2 / (z * z)
    h = q + 2.0 * z
    k = 4.0 * a * c2 - 4.0 * kappa * c2 * z - 4.0 * b * b * c2 / z + (q - kappa * c2) ** 2
    return h, k


def param_curve(z: float, a: float, b: float, kappa: float, c1: float) -> MomentumValue:
    if z == 0:
        raise ZeroParameter("the parametric curve is undefined at z = 0")
    h, k = param_curve_hk(z, a, b, kappa, c1)
    return MomentumValue(float(h), float(k))


def param_curve_derivatives(z, a: float, b: float, kappa: float, c1: float):
    """(dh/dz, dk/dz); both carry the factor (1 - b^2 c^2 / z^3)."""
    z = np.asarray(z, dtype=float)
    c2 = c1 * c1
    w = 1.0 - b * b * c2 / z ** 3
    return 2.0 * w, 4.0 * w * (b * b * c2 / (z * z) - kappa * c2)


def param_curve_slope(z, b: float, kappa: float, c1: float):
    """dk/dh along the parametric curve (defined away from the cusp)."""
    z = np.asarray(z, dtype=float)
    return 2.0 * c1 * c1 * (b * b / (z * z) - kappa)


def param_curve_concavity(z, b: float, c1: float):
    """d^2k/dh^2 along the parametric curve."""
    z = np.asarray(z, dtype=float)
    return -2.0 * b * b * c1 * c1 / (z ** 3 - b * b * c1 * c1)


def asymptote_line(h, a: float, kappa: float, c1: float):
    c2 = c1 * c1
    return -2.0 * kappa * c2 * np.asarray(h, dtype=float) + (4.0 * a * c2 + kappa * kappa * c2 * c2)


# ---------------------------------------------------------------- parabolas

def parabola_vertex(which: str, a: float, b: float, kappa: float, c1: float) -> float:
    if kappa == 0:
        raise ValueError("the parabola pair needs kappa != 0")
    D = discriminant_root(a, b, kappa)
    base = kappa * c1 * c1 + a / kappa
    if which == "left":
        return base - D / kappa
    if which == "right":
        return base + D / kappa
    raise ValueError(f"which must be 'left' or 'right', got {which!r}")


def parabola_value(which: str, h, a: float, b: float, kappa: float, c1: float):
    v = parabola_vertex(which, a, b, kappa, c1)
    out = (np.asarray(h, dtype=float) - v) ** 2
    return float(out) if np.ndim(out) == 0 else out


def parabola_slope(which: str, h, a: float, b: float, kappa: float, c1: float):
    return 2.0 * (np.asarray(h, dtype=float) - parabola_vertex(which, a, b, kappa, c1))


def parabola_intersection(a: float, b: float, kappa: float, c1: float) -> MomentumValue:
    return MomentumValue(kappa * c1 * c1 + a / kappa, (a * a - 4.0 * kappa * b * b) / (kappa * kappa))


# ---------------------------------------------------------------- distinguished parameters

@dataclass(frozen=True)
class SpecialPoints:
    z_cusp: float
    z_plus_ext: float
    z_minus_ext: float
    z_plus_l: float
    z_minus_l: float
    z_plus_r: float
    z_minus_r: float
    z_lt: float
    z_rt: float

    def as_dict(self) -> dict:
        return asdict(self)


def special_points(a: float, b: float, kappa: float, c1: float) -> SpecialPoints:
    if kappa <= 0 or b == 0:
        raise ValueError("special points need kappa > 0 and b != 0")
    D = discriminant_root(a, b, kappa)
    c2 = c1 * c1
    zl = math.sqrt((a + D) * c2 / 2.0)
    zr = math.sqrt(max(a - D, 0.0) * c2 / 2.0)
    ext = abs(b) / math.sqrt(kappa)
    return SpecialPoints(
        z_cusp=(b * b * c2) ** (1.0 / 3.0),
        z_plus_ext=ext,
        z_minus_ext=-ext,
        z_plus_l=zl,
        z_minus_l=-zl,
        z_plus_r=zr,
        z_minus_r=-zr,
        z_lt=(a - D) / (2.0 * kappa),
        z_rt=(a + D) / (2.0 * kappa),
    )


def curve_extrema_kind(a: float, b: float, kappa: float, c1: float) -> dict:
    """Nature of the local extrema of k(z) at z_{+ext} and z_{-ext}."""
    if kappa <= 0 or b == 0:
        raise ValueError("needs kappa > 0 and b != 0")
    crit = kappa ** 1.5 * c1 * c1
    bb = abs(b)
    if math.isclose(bb, crit, rel_tol=1e-12, abs_tol=0.0):
        plus = "cusp"
    elif bb > crit:
        plus = "max"
    else:
        plus = "min"
    return {"plus_ext_is": plus, "minus_ext_is": "min"}


# ---------------------------------------------------------------- intersections with k = 0

# Counts as printed in the source table, keyed by (row, column):
# row = sign(a - f_k), column = sign(b^2 - kappa^3 c1^4).
ZERO_CROSSING_TABLE = {
    (1, -1): 1, (1, 0): 1, (1, 1): 3,
    (0, -1): 2, (0, 0): 1, (0, 1): 2,
    (-1, -1): 3, (-1, 0): 1, (-1, 1): 1,
}


def _sign(x: float, tol: float) -> int:
    if abs(x) <= tol:
        return 0
    return 1 if x > 0 else -1


def f_k(b: float, kappa: float, c1: float) -> float:
    bb = abs(b)
    return (3.0 * bb ** (4 / 3) + 6.0 * kappa * bb ** (2 / 3) * c1 ** (4 / 3)
            - kappa * kappa * c1 ** (8 / 3)) / (4.0 * c1 ** (2 / 3))


def tabulated_zero_crossings(a: float, b: float, kappa: float, c1: float, tol: float = 1e-12) -> int:
    row = _sign(a - f_k(b, kappa, c1), tol * max(1.0, abs(a)))
    col = _sign(b * b - kappa ** 3 * c1 ** 4, tol * max(1.0, b * b))
    return ZERO_CROSSING_TABLE[(row, col)]


def zero_crossing_params(a: float, b: float, kappa: float, c1: float, n_grid: int = 1000) -> list[float]:
    """Positive z with k(z) = 0, isolated on a log grid that contains the turning points.

    k(z) is monotone between z_{+ext} and z_cusp, so at most one root lies in each
    grid cell bounded by consecutive turning points; the grid only has to cover them.
    """
    if kappa <= 0 or b == 0:
        raise ValueError("needs kappa > 0 and b != 0")
    c2 = c1 * c1
    z_cusp = (b * b * c2) ** (1.0 / 3.0)
    z_ext = abs(b) / math.sqrt(kappa)
    D = math.sqrt(max(a * a - 4.0 * kappa * b * b, 0.0))
    z_rt = (a + D) / (2.0 * kappa)
    z_max = max(10.0 * z_cusp, 10.0 * z_rt, 10.0 * z_ext)

    def k_of(z):
        return float(param_curve_hk(z, a, b, kappa, c1)[1])

    while k_of(z_max) >= 0.0:
        z_max *= 2.0
    z_min = min(z_cusp, z_ext) * 1e-3
    while k_of(z_min) <= 0.0:
        z_min *= 0.5
    grid = np.geomspace(z_min, z_max, n_grid)
    grid = np.unique(np.concatenate([grid, [z_cusp, z_ext]]))
    roots = bracket_roots(k_of, grid)
    # double roots at a turning point do not change sign
    for t in (z_cusp, z_ext):
        if abs(k_of(t)) <= 1e-12 * max(1.0, 4.0 * abs(a) * c2) and all(abs(r - t) > 1e-9 * t for r in roots):
            roots.append(t)
    return sorted(roots)


def count_zero_crossings(a: float, b: float, kappa: float, c1: float) -> int:
    """Number of intersections of the parametric curve with k = 0 (numeric root isolation)."""
    return len(zero_crossing_params(a, b, kappa, c1))


def zero_crossing_report(a: float, b: float, kappa: float, c1: float) -> dict:
    numeric = count_zero_crossings(a, b, kappa, c1)
    table = tabulated_zero_crossings(a, b, kappa, c1)
    return {"numeric": numeric, "table": table, "agree": numeric == table}


# ---------------------------------------------------------------- tangency

def tangency_check(which: str, a: float, b: float, kappa: float, c1: float, rel_tol: float = 1e-9) -> dict:
    sp = special_points(a, b, kappa, c1)
    z = sp.z_lt if which == "left" else sp.z_rt
    h, k = (float(t) for t in param_curve_hk(z, a, b, kappa, c1))
    kp = parabola_value(which, h, a, b, kappa, c1)
    s_curve = float(param_curve_slope(z, b, kappa, c1))
    s_par = float(parabola_slope(which, h, a, b, kappa, c1))
    scale_k = max(1.0, abs(k), abs(kp))
    scale_s = max(1.0, abs(s_curve), abs(s_par))
    ok = abs(k - kp) <= rel_tol * scale_k and abs(s_curve - s_par) <= rel_tol * scale_s
    return {"which": which, "z": z, "h": h, "k_curve": k, "k_parabola": kp,
            "slope_curve": s_curve, "slope_parabola": s_par, "ok": ok}


# ---------------------------------------------------------------- b = 0 and kappa = 0

def curves_b_zero(h, a: float, kappa: float, c1: float) -> dict:
    if kappa == 0:
        raise ValueError("curves_b_zero needs kappa != 0")
    h = np.asarray(h, dtype=float)
    c2 = c1 * c1
    return {
        CurveId.UpParabolaB0: (h - kappa * c2) ** 2 + 4.0 * a * c2,
        CurveId.TangentLineB0: -2.0 * kappa * c2 * h + (4.0 * a * c2 + kappa * kappa * c2 * c2),
        CurveId.LeftParabolaB0: (h - kappa * c2) ** 2,
        CurveId.RightParabolaB0: (h - kappa * c2 - 2.0 * a / kappa) ** 2,
    }


def param_curve_k0_hk(z, a: float, b: float, c1: float):
    z = np.asarray(z, dtype=float)
    c2 = c1 * c1
    h = b * b * c2 / (z * z) + 2.0 * z
    k = 4.0 * a * c2 - 4.0 * b * b * c2 / z + b ** 4 * c2 * c2 / z ** 4
    return h, k


def parabola_k0(h, a: float, b: float):
    return (np.asarray(h, dtype=float) - 2.0 * b * b / a) ** 2


def curves_kappa_zero(t, a: float, b: float, c1: float) -> dict:
    """Curves of the classical case; t is z for the parametric curve and h elsewhere."""
    if a <= 0:
        raise ValueError("kappa = 0 orbits need a > 0")
    t = np.asarray(t, dtype=float)
    c2 = c1 * c1
    if b != 0:
        h, k = param_curve_k0_hk(t, a, b, c1)
        return {CurveId.ParamCurveK0: (h, k), CurveId.ParabolaK0: parabola_k0(t, a, b)}
    return {
        CurveId.UpParabolaK0B0: t * t + 4.0 * a * c2,
        CurveId.TangentLineK0B0: np.full_like(t, 4.0 * a * c2),
        CurveId.ParabolaK0B0: t * t,
    }


def curve_k(tag: CurveId, h, a: float, b: float, kappa: float, c1: float):
    """k on a curve given as a graph over h (all curves except the parametric ones)."""
    tag = CurveId(tag)
    h = np.asarray(h, dtype=float)
    if tag is CurveId.LineKZero:
        return np.zeros_like(h)
    if tag is CurveId.LeftParabola:
        return parabola_value("left", h, a, b, kappa, c1)
    if tag is CurveId.RightParabola:
        return parabola_value("right", h, a, b, kappa, c1)
    if tag in (CurveId.UpParabolaB0, CurveId.TangentLineB0, CurveId.LeftParabolaB0, CurveId.RightParabolaB0):
        return curves_b_zero(h, a, kappa, c1)[tag]
    if tag is CurveId.ParabolaK0:
        return parabola_k0(h, a, b)
    if tag in (CurveId.UpParabolaK0B0, CurveId.TangentLineK0B0, CurveId.ParabolaK0B0):
        return curves_kappa_zero(h, a, 0.0, c1)[tag]
    raise ValueError(f"{tag.value} is parametric; use param_curve_hk")


def curve_descriptor(tag: CurveId, a: float, b: float, kappa: float, c1: float) -> dict:
    """Analytic description as {tag, form, coefficients}."""
    tag = CurveId(tag)
    c2 = c1 * c1
    if tag is CurveId.LineKZero:
        return {"tag": tag.value, "form": "k = 0", "coefficients": {}}
    if tag is CurveId.ParamCurve:
        return {"tag": tag.value,
                "form": "h = B/z^2 + 2z, k = 4A - 4 kappa C z - 4B/z + (B/z^2 - kappa C)^2",
                "coefficients": {"A": a * c2, "B": b * b * c2, "C": c2, "kappa": kappa}}
    if tag is CurveId.ParamCurveK0:
        return {"tag": tag.value, "form": "h = B/z^2 + 2z, k = 4A - 4B/z + B^2/z^4",
                "coefficients": {"A": a * c2, "B": b * b * c2}}
    if tag in (CurveId.LeftParabola, CurveId.RightParabola):
        which = "left" if tag is CurveId.LeftParabola else "right"
        return {"tag": tag.value, "form": "k = (h - h0)^2",
                "coefficients": {"h0": parabola_vertex(which, a, b, kappa, c1)}}
    if tag is CurveId.LeftParabolaB0:
        return {"tag": tag.value, "form": "k = (h - h0)^2", "coefficients": {"h0": kappa * c2}}
    if tag is CurveId.RightParabolaB0:
        return {"tag": tag.value, "form": "k = (h - h0)^2",
                "coefficients": {"h0": kappa * c2 + 2.0 * a / kappa}}
    if tag is CurveId.UpParabolaB0:
        return {"tag": tag.value, "form": "k = (h - h0)^2 + k0",
                "coefficients": {"h0": kappa * c2, "k0": 4.0 * a * c2}}
    if tag is CurveId.TangentLineB0:
        return {"tag": tag.value, "form": "k = m h + k0",
                "coefficients": {"m": -2.0 * kappa * c2, "k0": 4.0 * a * c2 + kappa * kappa * c2 * c2}}
    if tag is CurveId.ParabolaK0:
        return {"tag": tag.value, "form": "k = (h - h0)^2", "coefficients": {"h0": 2.0 * b * b / a}}
    if tag is CurveId.UpParabolaK0B0:
        return {"tag": tag.value, "form": "k = h^2 + k0", "coefficients": {"k0": 4.0 * a * c2}}
    if tag is CurveId.TangentLineK0B0:
        return {"tag": tag.value, "form": "k = k0", "coefficients": {"k0": 4.0 * a * c2}}
    if tag is CurveId.ParabolaK0B0:
        return {"tag": tag.value, "form": "k = h^2", "coefficients": {}}
    raise ValueError(tag)


def cusp_refined_grid(z_cusp: float, z_lo: float, z_hi: float, n: int) -> np.ndarray:
    """Positive z values on [z_lo, z_hi], clustered geometrically around z_cusp."""
    lo, hi = math.log(z_lo / z_cusp), math.log(z_hi / z_cusp)
    u = np.linspace(-1.0, 1.0, n)
    s = np.where(u < 0, -lo * u ** 3, hi * u ** 3) if lo < 0 < hi else np.linspace(lo, hi, n)
    return z_cusp * np.exp(s)


def param_curve_polyline(a: float, b: float, kappa: float, c1: float, z_lo: float, z_hi: float,
                         n: int = 400, k0: bool = False) -> np.ndarray:
    """(n, 2) samples of the parametric curve for z in [z_lo, z_hi] (same sign)."""
    if z_lo * z_hi <= 0:
        raise ValueError("z range must not contain 0")
    z_cusp = (b * b * c1 * c1) ** (1.0 / 3.0)
    if z_lo > 0 and z_lo < z_cusp < z_hi:
        z = cusp_refined_grid(z_cusp, z_lo, z_hi, n)
    elif z_lo > 0:
        z = np.geomspace(z_lo, z_hi, n)
    else:
        z = -np.geomspace(-z_hi, -z_lo, n)[::-1]
    h, k = param_curve_k0_hk(z, a, b, c1) if k0 else param_curve_hk(z, a, b, kappa, c1)
    return np.column_stack([h, k])
