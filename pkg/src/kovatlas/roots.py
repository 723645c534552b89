"""Real root isolation by sign changes on monotone pieces.

A polynomial is monotone between consecutive real roots of its derivative, so
recursing on the derivative gives intervals with at most one root each; every
bracketed root is then refined with Brent's method.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

XTOL = 1e-12


def cauchy_bound(coeffs: Sequence[float]) -> float:
    c = np.trim_zeros(np.asarray(coeffs, dtype=float), "f")
    if len(c) <= 1:
        return 0.0
    return 1.0 + float(np.max(np.abs(c[1:] / c[0])))


def _refine(f: Callable[[float], float], lo: float, hi: float, xtol: float) -> float:
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    tol = xtol * max(1.0, abs(lo), abs(hi))
    return brentq(f, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=500)


def poly_real_roots(coeffs: Sequence[float], lo: float | None = None, hi: float | None = None,
                    xtol: float = XTOL) -> list[float]:
    """Distinct real roots in [lo, hi] of the polynomial with coefficients highest first.

    Multiple roots are reported once. An even-multiplicity root is detected
    when the polynomial nearly vanishes at a critical point.
    """
    c = np.trim_zeros(np.asarray(coeffs, dtype=float), "f")
    deg = len(c) - 1
    if deg < 1:
        return []
    bound = cauchy_bound(c)
    lo = -bound if lo is None else max(lo, -bound)
    hi = bound if hi is None else min(hi, bound)
    if lo > hi:
        return []
    f = np.poly1d(c)
    if deg == 1:
        r = -c[1] / c[0]
        return [float(r)] if lo <= r <= hi else []
    crit = poly_real_roots(np.polyder(c), lo, hi, xtol)
    knots = [lo] + [t for t in crit if lo < t < hi] + [hi]
    powers = np.arange(deg, -1, -1)
    out: list[float] = []
    for t in crit:
        # rounding level of f at t
        if abs(f(t)) <= 1e-13 * float(np.sum(np.abs(c) * max(1.0, abs(t)) ** powers)):
            out.append(float(t))
    for a, b in zip(knots[:-1], knots[1:]):
        fa, fb = f(a), f(b)
        if fa == 0.0:
            out.append(float(a))
        if fa * fb < 0.0:
            out.append(float(_refine(f, a, b, xtol)))
    fb = f(knots[-1])
    if fb == 0.0:
        out.append(float(knots[-1]))
    out.sort()
    merged: list[float] = []
    for r in out:
        if merged and abs(r - merged[-1]) <= 10 * xtol * max(1.0, abs(r)):
            continue
        merged.append(r)
    return merged


def bracket_roots(f: Callable[[float], float], grid: Sequence[float], xtol: float = XTOL) -> list[float]:
    """Roots of f found by sign changes between consecutive grid nodes."""
    grid = list(grid)
    vals = [f(t) for t in grid]
    roots = []
    for i in range(len(grid) - 1):
        if vals[i] == 0.0:
            roots.append(grid[i])
        elif vals[i] * vals[i + 1] < 0.0:
            roots.append(_refine(f, grid[i], grid[i + 1], xtol))
    if vals and vals[-1] == 0.0:
        roots.append(grid[-1])
    return roots


def bisect_increasing(g: Callable[[float], float], target: float, lo: float = 0.0,
                      hi: float = 1.0, tol: float = 1e-15, max_iter: int = 400) -> float:
    """Solve g(t) = target for strictly increasing g, growing hi geometrically first."""
    while g(hi) < target:
        hi *= 2.0
        if not math.isfinite(hi):
            raise ValueError("target out of range")
    if g(lo) >= target:
        return lo
    return brentq(lambda t: g(t) - target, lo, hi, xtol=tol * max(1.0, abs(hi)), rtol=4 * np.finfo(float).eps,
                  maxiter=max_iter)
