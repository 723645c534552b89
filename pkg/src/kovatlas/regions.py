"""Partition of the (a, b) orbit-parameter plane into regions with a fixed diagram type."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .config import DEFAULT_TOL, BoundaryCase, InvalidParameters, ToleranceConfig
from .curves import f_k, special_points
from .roots import bisect_increasing, poly_real_roots

REGION_TAGS = ("I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X", "XI", "XII",
               "I'", "II'", "III'", "IV'", "V'")


@dataclass(frozen=True)
class Region:
    tag: str
    detail: str | None = None

    def __str__(self) -> str:
        if self.detail:
            return f"{self.tag}({self.detail})"
        return self.tag

    @property
    def is_open(self) -> bool:
        return self.tag in REGION_TAGS


@lru_cache(maxsize=None)
def alpha0() -> float:
    """Real root of x^3 + x^2 + x - 1."""
    (r,) = poly_real_roots([1.0, 1.0, 1.0, -1.0], 0.0, 1.0)
    return r


@dataclass(frozen=True)
class Thresholds:
    f_k: float
    f_r: float
    f_m: float
    f_t: float
    f_l: float
    b_M: float
    b_N: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def t_of_b(b: float, kappa: float, c1: float) -> float:
    """Positive t with t (kappa c1^2 + t^2) / (2 c1) = |b|."""
    return bisect_increasing(lambda t: t * (kappa * c1 * c1 + t * t) / (2.0 * c1), abs(b), tol=1e-16)


def f_t(b: float, kappa: float, c1: float) -> float:
    t = t_of_b(b, kappa, c1)
    return ((kappa * c1 * c1 + t * t) / (2.0 * c1)) ** 2 + kappa * t * t


def thresholds(b: float, kappa: float, c1: float) -> Thresholds:
    if kappa <= 0:
        raise InvalidParameters("thresholds are defined for kappa > 0")
    if c1 <= 0:
        raise InvalidParameters("c1 must be positive")
    bb = abs(b)
    c2 = c1 * c1
    if bb == 0:
        fm = kappa * kappa * c2
        fr = 0.0
    else:
        fm = bb * bb / (kappa * c2) + kappa * kappa * c2
        fr = bb ** (4 / 3) / c1 ** (2 / 3) + kappa * bb ** (2 / 3) * c1 ** (2 / 3)
    return Thresholds(
        f_k=f_k(bb, kappa, c1),
        f_r=fr,
        f_m=fm,
        f_t=f_t(bb, kappa, c1),
        f_l=2.0 * math.sqrt(kappa) * bb,
        b_M=kappa ** 1.5 * c2,
        b_N=alpha0() ** 3 * kappa ** 1.5 * c2,
    )


def _near(x: float, y: float, tol: float) -> bool:
    return abs(x - y) <= tol * max(1.0, abs(x), abs(y))


def _classify_b_zero(a: float, kappa: float, c1: float, tol: float) -> Region:
    c2 = c1 * c1
    for name, f in (("a=0", 0.0), ("kappa^2c^2", kappa * kappa * c2), ("kappa^2c^2/4", kappa * kappa * c2 / 4)):
        if _near(a, f, tol):
            return Region("Boundary", name)
    if a < 0:
        return Region("Invalid")
    if a > kappa * kappa * c2:
        return Region("X")
    if a > kappa * kappa * c2 / 4:
        return Region("XI")
    return Region("XII")


def classify(a: float, b: float, kappa: float, c1: float, tol: ToleranceConfig = DEFAULT_TOL) -> Region:
    """Region containing (a, b) for kappa > 0; thresholds are compared within a relative band."""
    if kappa <= 0:
        raise InvalidParameters("classify needs kappa > 0; use classify_kappa0 for kappa = 0")
    bt = tol.boundary_tol
    if b == 0:
        return _classify_b_zero(a, kappa, c1, bt)
    th = thresholds(b, kappa, c1)
    bb = abs(b)
    if a < th.f_l or _near(a, th.f_l, bt):
        # no orbit (a < f_l) or a singular one (a = f_l)
        return Region("Invalid")
    if _near(bb, th.b_M, bt):
        # all thresholds meet at M, only area V survives on this line
        if _near(a, th.f_m, bt):
            return Region("Boundary", "M")
        return Region("V") if a > th.f_m else Region("Invalid")
    if _near(a, th.f_m, bt):
        return Region("Boundary", "f_m")
    if a > th.f_m:
        return Region("V")
    if bb > th.b_M:
        # f_l < f_t < f_k < f_r < f_m
        for name in ("f_r", "f_k", "f_t"):
            if _near(a, getattr(th, name), bt):
                return Region("Boundary", name)
        if a > th.f_r:
            return Region("IV")
        if a > th.f_k:
            return Region("III")
        if a > th.f_t:
            return Region("II")
        return Region("I")
    # f_k < f_l and f_r, f_t in either order below f_m
    for name in ("f_r", "f_t"):
        if _near(a, getattr(th, name), bt):
            return Region("Boundary", name)
    lo, hi = min(th.f_r, th.f_t), max(th.f_r, th.f_t)
    if a > hi:
        return Region("VII")
    if a < lo:
        return Region("VIII")
    return Region("VI") if th.f_t < th.f_r else Region("IX")


def thresholds_kappa0(b: float, c1: float) -> dict:
    bb = abs(b)
    base = bb ** (4 / 3) / c1 ** (2 / 3)
    return {"g1": base / 2 ** (2 / 3), "g2": 0.75 * base, "g3": base}


def classify_kappa0(a: float, b: float, c1: float, tol: ToleranceConfig = DEFAULT_TOL) -> Region:
    bt = tol.boundary_tol
    if _near(a, 0.0, bt):
        return Region("Boundary", "a=0")
    if a < 0:
        return Region("Invalid")
    if b == 0:
        return Region("V'")
    g = thresholds_kappa0(b, c1)
    for name in ("g3", "g2", "g1"):
        if _near(a, g[name], bt):
            return Region("Boundary", name)
    if a > g["g3"]:
        return Region("IV'")
    if a > g["g2"]:
        return Region("III'")
    if a > g["g1"]:
        return Region("II'")
    return Region("I'")


def classify_any(a: float, b: float, kappa: float, c1: float, tol: ToleranceConfig = DEFAULT_TOL) -> Region:
    if kappa == 0:
        return classify_kappa0(a, b, c1, tol)
    if kappa < 0:
        raise InvalidParameters("regions are only catalogued for kappa >= 0")
    return classify(a, b, kappa, c1, tol)


# Descending orderings of the distinguished parameters, as tabulated.
ORDERING_TABLE = {
    ("small", "above_f_m"): ("z_rt", "z_plus_l", "z_cusp", "z_plus_ext", "z_plus_r", "z_lt"),
    ("small", "f_r_to_f_m"): ("z_plus_l", "z_rt", "z_cusp", "z_plus_r", "z_plus_ext", "z_lt"),
    ("small", "below_f_r"): ("z_plus_l", "z_plus_r", "z_cusp", "z_rt", "z_plus_ext", "z_lt"),
    ("large", "above_f_m"): ("z_rt", "z_plus_l", "z_plus_ext", "z_cusp", "z_plus_r", "z_lt"),
    ("large", "f_r_to_f_m"): ("z_rt", "z_plus_ext", "z_plus_l", "z_cusp", "z_lt", "z_plus_r"),
    ("large", "below_f_r"): ("z_rt", "z_plus_ext", "z_lt", "z_cusp", "z_plus_l", "z_plus_r"),
}


def tabulated_ordering(a: float, b: float, kappa: float, c1: float,
                       tol: ToleranceConfig = DEFAULT_TOL) -> tuple[str, ...]:
    th = thresholds(b, kappa, c1)
    bt = tol.boundary_tol
    if b == 0:
        raise BoundaryCase("ordering needs b != 0")
    if _near(abs(b), th.b_M, bt):
        raise BoundaryCase("b on the line b^2 = kappa^3 c1^4")
    for name in ("f_m", "f_r"):
        if _near(a, getattr(th, name), bt):
            raise BoundaryCase(f"a on {name}: two parameters coincide")
    col = "large" if abs(b) > th.b_M else "small"
    row = "above_f_m" if a > th.f_m else ("f_r_to_f_m" if a > th.f_r else "below_f_r")
    return ORDERING_TABLE[(col, row)]


def numeric_ordering(a: float, b: float, kappa: float, c1: float) -> tuple[str, ...]:
    sp = special_points(a, b, kappa, c1).as_dict()
    names = ORDERING_TABLE[("small", "above_f_m")]
    return tuple(sorted(names, key=lambda n: -sp[n]))


def ordering(a: float, b: float, kappa: float, c1: float, tol: ToleranceConfig = DEFAULT_TOL) -> tuple[str, ...]:
    """Tabulated descending order of the special parameters, checked against their values."""
    tab = tabulated_ordering(a, b, kappa, c1, tol)
    num = numeric_ordering(a, b, kappa, c1)
    if tab != num:
        raise AssertionError(f"tabulated order {tab} differs from computed order {num}")
    return tab


def region_atlas(kappa: float, c1: float, b_max: float, n: int = 200) -> dict:
    """Threshold curves a = f(b) sampled on [0, b_max] plus the distinguished points."""
    bs = [b_max * i / (n - 1) for i in range(n)]
    curves = {name: [] for name in ("f_k", "f_r", "f_m", "f_t", "f_l")}
    for b in bs:
        th = thresholds(b, kappa, c1)
        for name in curves:
            curves[name].append(getattr(th, name))
    th0 = thresholds(kappa ** 1.5 * c1 * c1, kappa, c1)
    b_n = alpha0() ** 3 * kappa ** 1.5 * c1 * c1
    return {
        "kappa": kappa,
        "c1": c1,
        "b": bs,
        "curves": curves,
        "points": {
            "M": [th0.b_M, th0.f_m],
            "N": [b_n, thresholds(b_n, kappa, c1).f_l],
        },
    }
