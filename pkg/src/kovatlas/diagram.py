"""Assembly of bifurcation diagrams from the analytic curves.

Every candidate curve is cut at its intersections with the other curves (and at
the cusp of the parametric curve) into elementary arcs. An arc is kept when the
value at its midpoint has a critical preimage on the orbit; this is decided in
closed form for the parametric curve and by a Levenberg-Marquardt search
otherwise. The endpoints of kept arcs become singular points.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .algebra import OrbitParams, PencilParams, momentum_map, sample_orbit
from .config import InvalidParameters
from .critical import circle_pair_geometry, circle_points, rank0_enumerate
from .curves import (
    REGIME_CURVES,
    CurveId,
    curve_descriptor,
    param_curve_hk,
    parabola_vertex,
    special_points,
    zero_crossing_params,
)
from .levels import circle_kind, critical_circles_over, has_critical_preimage, nearest_starts
from .regions import classify_any, thresholds

PARAM_TAGS = (CurveId.ParamCurve, CurveId.ParamCurveK0)
Y_LABELS = tuple(f"y{i}" for i in range(1, 14))
Z_LABELS = tuple(f"z{i}" for i in range(1, 12))


@dataclass
class SingularPoint:
    label: str | None
    h: float
    k: float
    kind: str
    curves: list[str] = field(default_factory=list)
    # parameter of the point on each incident curve (h for graphs, z for the parametric curve)
    params: dict = field(default_factory=dict)
    types: list[str] = field(default_factory=list)


@dataclass
class Arc:
    curve: str
    branch: str
    t0: float
    t1: float
    start: int
    end: int
    polyline: list = field(default_factory=list)
    circles: dict = field(default_factory=dict)
    atom: str = "Unknown"
    atom_source: str = "none"


@dataclass
class DiagramModel:
    regime: str
    region: str
    params: dict
    window: list
    curves: list = field(default_factory=list)
    singular_points: list = field(default_factory=list)
    arcs: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "DiagramModel":
        return cls(regime=d["regime"], region=d["region"], params=dict(d["params"]), window=list(d["window"]),
                   curves=[dict(c) for c in d["curves"]],
                   singular_points=[SingularPoint(**p) for p in d["singular_points"]],
                   arcs=[Arc(**a) for a in d["arcs"]])

    def point(self, label: str) -> SingularPoint:
        for p in self.singular_points:
            if p.label == label:
                return p
        raise KeyError(label)

    def labels(self) -> list[str]:
        return [p.label for p in self.singular_points if p.label]


def regime_of(b: float, kappa: float) -> str:
    if kappa > 0:
        return "kpos_b0" if b == 0 else "kpos_bnz"
    if kappa == 0:
        return "k0_b0" if b == 0 else "k0_bnz"
    raise InvalidParameters("diagrams are built for kappa >= 0")


# ---------------------------------------------------------------- curve geometry

@dataclass
class _Curve:
    tag: CurveId
    branch: str  # "" for graphs over h, "neg" / "pos" for the parametric curve
    coeffs: tuple = ()  # k = al h^2 + be h + ga for graphs

    @property
    def is_param(self) -> bool:
        return self.tag in PARAM_TAGS

    def hk(self, t, a, b, kappa, c1):
        t = np.asarray(t, dtype=float)
        if self.is_param:
            return param_curve_hk(t, a, b, kappa, c1)
        al, be, ga = self.coeffs
        return t, al * t * t + be * t + ga


def _graph_coeffs(tag: CurveId, a, b, kappa, c1) -> tuple:
    d = curve_descriptor(tag, a, b, kappa, c1)
    co = d["coefficients"]
    form = d["form"]
    if form == "k = 0":
        return (0.0, 0.0, 0.0)
    if form == "k = (h - h0)^2":
        h0 = co["h0"]
        return (1.0, -2.0 * h0, h0 * h0)
    if form == "k = (h - h0)^2 + k0":
        h0 = co["h0"]
        return (1.0, -2.0 * h0, h0 * h0 + co["k0"])
    if form == "k = m h + k0":
        return (0.0, co["m"], co["k0"])
    if form == "k = h^2 + k0":
        return (1.0, 0.0, co["k0"])
    if form == "k = k0":
        return (0.0, 0.0, co["k0"])
    if form == "k = h^2":
        return (1.0, 0.0, 0.0)
    raise ValueError(form)


def _curves_for(regime: str, a, b, kappa, c1) -> list[_Curve]:
    out = []
    for tag in REGIME_CURVES[regime]:
        if tag in PARAM_TAGS:
            out.append(_Curve(tag, "neg"))
            out.append(_Curve(tag, "pos"))
        else:
            out.append(_Curve(tag, "", _graph_coeffs(tag, a, b, kappa, c1)))
    return out


def _param_polys(a, b, kappa, c1):
    """z^2 h(z) and z^4 k(z) as numpy polynomials (highest degree first)."""
    A, B, C = a * c1 * c1, b * b * c1 * c1, c1 * c1
    zh = np.array([2.0, 0.0, 0.0, B])
    # (B - kappa C z^2)^2 = kappa^2 C^2 z^4 - 2 kappa B C z^2 + B^2
    zk = np.array([-4.0 * kappa * C, 4.0 * A + kappa * kappa * C * C, -4.0 * B, -2.0 * kappa * B * C, 0.0, B * B])
    return zh, zk


def _real_roots(coeffs, scale: float, imag_tol: float = 1e-6) -> list[tuple[float, bool]]:
    """Real roots with a flag marking (numerically) multiple roots."""
    c = np.trim_zeros(np.asarray(coeffs, dtype=float), "f")
    if len(c) <= 1:
        return []
    r = np.roots(c)
    cand = sorted(float(x.real) for x in r if abs(x.imag) <= imag_tol * max(1.0, abs(x), scale))
    out: list[tuple[float, bool]] = []
    for x in cand:
        if out and abs(x - out[-1][0]) <= 1e-5 * max(1.0, abs(x)):
            out[-1] = ((out[-1][0] + x) / 2.0, True)
        else:
            out.append((x, False))
    return out


def _intersections(c1_: _Curve, c2_: _Curve, a, b, kappa, c1) -> list[tuple[float, float, bool]]:
    """Pairs (t on c1_, t on c2_, tangent) of intersection parameters."""
    if c1_.is_param and c2_.is_param:
        return []
    if c2_.is_param:
        return [(t2, t1, tg) for t1, t2, tg in _intersections(c2_, c1_, a, b, kappa, c1)]
    if not c1_.is_param:
        d = np.subtract(c1_.coeffs, c2_.coeffs)
        if np.allclose(d, 0.0):
            return []
        al, be, ga = d
        if abs(al) < 1e-300:
            return [] if be == 0 else [(-ga / be, -ga / be, False)]
        disc = be * be - 4 * al * ga
        sc = max(be * be, abs(4 * al * ga), 1e-300)
        if abs(disc) <= 1e-12 * sc:
            h = -be / (2 * al)
            return [(h, h, True)]
        if disc < 0:
            return []
        s = math.sqrt(disc)
        q = -0.5 * (be + math.copysign(s, be))
        hs = sorted({q / al, ga / q} if q != 0 else {0.0})
        return [(h, h, False) for h in hs]
    zh, zk = _param_polys(a, b, kappa, c1)
    al, be, ga = c2_.coeffs
    z2 = np.array([1.0, 0.0, 0.0])
    z4 = np.array([1.0, 0.0, 0.0, 0.0, 0.0])
    g = al * np.polymul(zh, zh)
    g = np.polyadd(g, be * np.polymul(z2, zh))
    g = np.polyadd(g, ga * z4)
    poly = np.polysub(zk, g)
    out = []
    for z, mult in _real_roots(poly, 1.0):
        if z == 0 or (z < 0) != (c1_.branch == "neg"):
            continue
        h, _ = param_curve_hk(z, a, b, kappa, c1)
        out.append((z, float(h), mult))
    return out


def _snap(z: float, targets: list[float]) -> float:
    for t in targets:
        if abs(z - t) <= 1e-6 * max(1.0, abs(t)):
            return t
    return z


def _param_window(branch: str, h_lo: float, h_hi: float, b: float, c1: float):
    """z interval of a branch of h = B/z^2 + 2z inside [h_lo, h_hi], or None."""
    B = b * b * c1 * c1
    if B == 0:
        return None

    def h(z):
        return B / (z * z) + 2 * z

    def solve(lo, hi, target):
        f_lo = h(lo) - target
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if (h(mid) - target > 0) == (f_lo > 0):
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    if branch == "neg":
        # h increases from -inf to +inf on z < 0
        lo = -max(1.0, abs(h_lo)) * 4 - 1.0
        while h(lo) > h_lo:
            lo *= 2
        return solve(lo, -1e-300, h_lo), solve(lo, -1e-300, h_hi)
    zc = B ** (1 / 3)
    if h(zc) >= h_hi:
        return None
    hi = max(4 * zc, abs(h_hi) + 1.0)
    while h(hi) < h_hi:
        hi *= 2
    return solve(1e-300 + zc * 1e-12, zc, h_hi), solve(zc, hi, h_hi)


# ---------------------------------------------------------------- presence tests

class CriticalOracle:
    """Decides whether a value has a critical preimage, with orbit samples as LM seeds."""

    def __init__(self, a, b, kappa, c1, window=None, n_samples=20000, seed=0, samples=None):
        self.orbit = OrbitParams(a, b)
        self.params = PencilParams(kappa=kappa, c1=c1)
        self.a, self.b, self.kappa, self.c1 = a, b, kappa, c1
        if samples is not None:
            pts = np.asarray(samples, dtype=float)
        elif kappa > 0:
            pts = sample_orbit(self.orbit, self.params, n_samples, seed=np.random.default_rng(seed))
        else:
            pts = _sample_kappa0(a, b, n_samples, window, np.random.default_rng(seed))
        self.samples = pts
        self.momenta = momentum_map(pts, self.params)

    def starts(self, hk, n):
        return nearest_starts(self.samples, self.momenta, hk, n)

    def present(self, curve: _Curve, t: float) -> bool:
        h, k = curve.hk(t, self.a, self.b, self.kappa, self.c1)
        h, k = float(h), float(k)
        if k < 0:
            return False
        if curve.tag is CurveId.ParamCurve and self.b != 0 and self.kappa != 0:
            return circle_pair_geometry(t, self.orbit, self.params)["regime"] != "empty"
        return has_critical_preimage(self.orbit, self.params, (h, k), self.starts((h, k), 24))

    def circles(self, curve: _Curve, t: float) -> dict:
        h, k = curve.hk(t, self.a, self.b, self.kappa, self.c1)
        hk = (float(h), float(k))
        if curve.tag is CurveId.ParamCurve and self.b != 0 and self.kappa != 0:
            g = circle_pair_geometry(t, self.orbit, self.params)
            n = {"two_circles": 2, "meets_J3_zero": 1}.get(g["regime"], 0)
            pts = circle_points(t, self.orbit, self.params, n=8)
            if n == 0 or len(pts) == 0:
                return {}
            lam = 2.0 * (self.kappa * self.c1 ** 2 - (self.b * self.c1 / t) ** 2)
            return {circle_kind(pts[0], lam, self.params)[0]: n}
        cs = critical_circles_over(self.orbit, self.params, hk, self.starts(hk, 40))
        out: dict = {}
        for c in cs:
            out[c.kind] = out.get(c.kind, 0) + 1
        return out


def _sample_kappa0(a, b, n, window, rng) -> np.ndarray:
    """Points of the kappa = 0 orbit (a tangent bundle of a sphere) with |J| spread over the window."""
    u = rng.normal(size=(n, 3))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    x = math.sqrt(a) * u
    w = rng.normal(size=(n, 3))
    w -= np.sum(w * u, axis=1, keepdims=True) * u
    w /= np.maximum(np.linalg.norm(w, axis=1, keepdims=True), 1e-300)
    span = max(1.0, abs(window[0]), abs(window[1]))
    s = np.exp(rng.uniform(math.log(1e-3), math.log(2.0 * math.sqrt(span)), size=(n, 1)))
    J = (b / a) * x + s * w
    return np.concatenate([J, x], axis=1)


# ---------------------------------------------------------------- labels

def _rank0_info(a, b, kappa, c1):
    if kappa <= 0:
        return []
    recs = rank0_enumerate(OrbitParams(a, b), PencilParams(kappa=kappa, c1=c1))
    return [{"h": r.image[0], "k": r.image[1], "family": r.family.value, "type": r.type.value, "z": r.z,
             "point": r.point.to_list()} for r in recs]


def _near_hk(p, q, scale) -> bool:
    return abs(p[0] - q[0]) <= 1e-7 * scale and abs(p[1] - q[1]) <= 1e-7 * scale


def _assign_labels(points: list[SingularPoint], a, b, kappa, c1, r0: list[dict]) -> None:
    """Labels for the points whose identity is fixed by kind and position."""
    if kappa <= 0:
        return
    scale = max(1.0, *(abs(p.h) + abs(p.k) for p in points)) if points else 1.0

    def find(hk):
        for p in points:
            if _near_hk((p.h, p.k), hk, scale):
                return p
        return None

    def put(hk, label):
        p = find(hk)
        if p is not None and p.label is None:
            p.label = label

    if b == 0:
        c2 = c1 * c1
        for r in r0:
            hk = (r["h"], r["k"])
            if r["family"] == "R2" and r["point"][3] > 0:
                put(hk, {"SaddleSaddle": "y3", "CenterSaddle": "z10", "CenterCenter": "z9"}[r["type"]])
            elif r["family"] == "R2" and r["point"][3] < 0:
                put(hk, "y1")
            elif r["family"] == "R2":
                put(hk, "z7")
            elif r["family"] == "R3":
                put(hk, "z1")
            else:
                put(hk, "z5")
        # the tangent line touches the upper parabola at h = 0 and the right one at h = 2a/kappa
        put((0.0, 4.0 * a * c2 + kappa * kappa * c2 * c2), "y4")
        put((2.0 * a / kappa, kappa * kappa * c2 * c2), "z2" if a > kappa * kappa * c2 else "z8")
        return
    th = thresholds(b, kappa, c1)
    sp = special_points(a, b, kappa, c1)
    large = abs(b) > th.b_M
    above = a > th.f_m
    r3 = []
    for r in r0:
        hk = (r["h"], r["k"])
        if r["family"] == "R1":
            put(hk, "z5")
        elif r["family"] == "R2":
            z, t = r["z"], r["type"]
            if abs(z - sp.z_minus_l) <= 1e-9 * abs(z):
                put(hk, "y1")
            elif abs(z - sp.z_minus_r) <= 1e-9 * abs(z):
                put(hk, "z4")
            elif abs(z - sp.z_plus_r) <= 1e-9 * abs(z):
                put(hk, "z3" if t == "CenterSaddle" else ("z6" if above else "z11"))
            elif abs(z - sp.z_plus_l) <= 1e-9 * abs(z):
                if t == "SaddleSaddle":
                    put(hk, "y3" if above else "y7")
                elif t == "CenterSaddle":
                    put(hk, "y12" if large else "z10")
                else:
                    put(hk, "z9")
        elif r["family"] == "R3":
            r3.append(r)
    # k = 0 crossings: the rightmost center-center one is z1, the other y10, the center-saddle one y11
    cc = sorted({round(r["h"], 12): r for r in r3 if r["z"] > sp.z_cusp}.values(), key=lambda r: r["h"])
    if cc:
        put((cc[-1]["h"], cc[-1]["k"]), "z1")
        for r in cc[:-1]:
            put((r["h"], r["k"]), "y10")
    for r in r3:
        if r["z"] < sp.z_cusp:
            put((r["h"], r["k"]), "y11")
    if large:
        # the left tangency is y8 above the cusp and y5 below it
        hl, kl = param_curve_hk(sp.z_lt, a, b, kappa, c1)
        put((float(hl), float(kl)), "y8" if sp.z_lt > sp.z_cusp else "y5")
    # the vertex of the left parabola sits between y1 and y3 (or y7) on that parabola, and
    # between y12 and y8 when the center-saddle point y12 lies on its left branch
    y12 = any(p.label == "y12" for p in points)
    put((parabola_vertex("left", a, b, kappa, c1), 0.0), "y13" if y12 else "y2")
    if large or above:
        hr, kr = param_curve_hk(sp.z_rt, a, b, kappa, c1)
        put((float(hr), float(kr)), "z2")


# ---------------------------------------------------------------- assembly

def _window(oracle: CriticalOracle | None, a, b, kappa, c1) -> list[float]:
    if kappa > 0:
        m = oracle.momenta
        h0, h1 = float(m[:, 0].min()), float(m[:, 0].max())
        k1 = float(m[:, 1].max())
        dh = 0.05 * (h1 - h0)
        return [h0 - dh, h1 + dh, -0.05 * k1, 1.05 * k1]
    c2 = c1 * c1
    h_lo = -2.0 * c1 * math.sqrt(a)
    marks = [abs(h_lo), 4.0 * a * c2 / max(a, 1e-300)]
    if b != 0:
        marks.append(3.0 * (b * b * c2) ** (1 / 3))
        marks.append(2.0 * b * b / a)
    span = 2.0 * max(marks) + 2.0
    return [h_lo - 0.1 * span, h_lo + span, -0.05 * span * span, 4.0 * a * c2 + span * span]


def _polyline(curve: _Curve, t0, t1, a, b, kappa, c1, n=64) -> list:
    s = 0.5 - 0.5 * np.cos(np.linspace(0.0, math.pi, n))
    t = t0 + (t1 - t0) * s
    h, k = curve.hk(t, a, b, kappa, c1)
    return np.column_stack([h, k]).tolist()


def build_diagram(a: float, b: float, kappa: float, c1: float, n_samples: int = 20000, seed: int = 0,
                  annotate: bool = True) -> DiagramModel:
    regime = regime_of(b, kappa)
    if c1 <= 0:
        raise InvalidParameters("c1 must be positive")
    region = classify_any(a, b, kappa, c1)
    if not region.is_open:
        raise InvalidParameters(f"(a, b) = ({a}, {b}) is not inside a region: {region}")
    oracle = CriticalOracle(a, b, kappa, c1, [-2 * c1 * math.sqrt(a), 0.0], n_samples, seed) if kappa > 0 else None
    window = _window(oracle, a, b, kappa, c1)
    if oracle is None:
        oracle = CriticalOracle(a, b, kappa, c1, window, n_samples, seed)
    curves = _curves_for(regime, a, b, kappa, c1)

    snaps: list[float] = []
    cusp = None
    if regime == "kpos_bnz":
        sp = special_points(a, b, kappa, c1)
        snaps = list(sp.as_dict().values()) + zero_crossing_params(a, b, kappa, c1)
        cusp = sp.z_cusp
    elif regime == "k0_bnz":
        cusp = (b * b * c1 * c1) ** (1 / 3)
        snaps = [cusp]

    # breakpoints on every curve, with the tangency flag
    breaks: dict[int, dict[float, bool]] = {}
    ranges: dict[int, tuple[float, float]] = {}
    for i, c in enumerate(curves):
        if c.is_param:
            rng = _param_window(c.branch, window[0], window[1], b, c1)
            if rng is None:
                continue
            ranges[i] = rng
        else:
            ranges[i] = (window[0], window[1])
        breaks[i] = {}
    for i, ci in enumerate(curves):
        for j in range(i + 1, len(curves)):
            cj = curves[j]
            if i not in ranges or j not in ranges:
                continue
            for ti, tj, tg in _intersections(ci, cj, a, b, kappa, c1):
                if ci.is_param:
                    ti = _snap(ti, snaps)
                    tj = float(ci.hk(ti, a, b, kappa, c1)[0])
                if cj.is_param:
                    tj = _snap(tj, snaps)
                    ti = float(cj.hk(tj, a, b, kappa, c1)[0])
                for idx, t in ((i, ti), (j, tj)):
                    lo, hi = ranges[idx]
                    if min(lo, hi) < t < max(lo, hi):
                        breaks[idx][t] = breaks[idx].get(t, False) or tg
    for i, c in enumerate(curves):
        if c.is_param and c.branch == "pos" and cusp is not None and i in ranges:
            lo, hi = ranges[i]
            if lo < cusp < hi:
                breaks[i].setdefault(cusp, False)

    # elementary arcs and presence
    kept: list[tuple[int, float, float]] = []
    for i, c in enumerate(curves):
        if i not in ranges:
            continue
        lo, hi = ranges[i]
        ts = [lo] + sorted(breaks[i]) + [hi]
        for t0, t1 in zip(ts[:-1], ts[1:]):
            if t1 - t0 <= 1e-14 * max(1.0, abs(t0)):
                continue
            tm = 0.5 * (t0 + t1)
            if oracle.present(c, tm):
                kept.append((i, t0, t1))

    r0 = _rank0_info(a, b, kappa, c1)
    scale = max(1.0, abs(window[0]), abs(window[1]), abs(window[3]))

    # cluster endpoints into singular points
    points: list[SingularPoint] = []

    def locate(i: int, t: float) -> int:
        c = curves[i]
        h, k = (float(v) for v in c.hk(t, a, b, kappa, c1))
        if abs(k) < 1e-13 * scale:
            k = 0.0
        for idx, p in enumerate(points):
            if _near_hk((p.h, p.k), (h, k), scale):
                if c.is_param:
                    p.h, p.k = h, k  # parametric evaluation is the most accurate
                p.params.setdefault(c.tag.value + (":" + c.branch if c.branch else ""), t)
                return idx
        lo, hi = ranges[i]
        at_window = t in (lo, hi)
        points.append(SingularPoint(None, h, k, "window" if at_window else "intersection",
                                    params={c.tag.value + (":" + c.branch if c.branch else ""): t}))
        return len(points) - 1

    arcs: list[Arc] = []
    for i, t0, t1 in kept:
        c = curves[i]
        arcs.append(Arc(c.tag.value, c.branch, t0, t1, locate(i, t0), locate(i, t1)))

    # points where two kept arcs of one curve meet and nothing else happens are not singular
    def incident(pidx):
        return [ar for ar in arcs if pidx in (ar.start, ar.end)]

    def is_rank0(p):
        return any(_near_hk((p.h, p.k), (r["h"], r["k"]), scale) for r in r0)

    changed = True
    while changed:
        changed = False
        for pidx, p in enumerate(points):
            inc = incident(pidx)
            if len(inc) != 2 or inc[0].curve != inc[1].curve or inc[0].branch != inc[1].branch:
                continue
            if is_rank0(p) or (cusp is not None and any(abs(t - cusp) <= 1e-12 * cusp for t in p.params.values())):
                continue
            first, second = sorted(inc, key=lambda ar: ar.t0)
            merged = Arc(first.curve, first.branch, first.t0, second.t1, first.start, second.end)
            arcs = [ar for ar in arcs if ar is not first and ar is not second] + [merged]
            changed = True
            break

    used = sorted({ar.start for ar in arcs} | {ar.end for ar in arcs})
    remap = {old: new for new, old in enumerate(used)}
    points = [points[i] for i in used]
    for ar in arcs:
        ar.start, ar.end = remap[ar.start], remap[ar.end]

    # kinds and incident curves
    for pidx, p in enumerate(points):
        inc = incident(pidx)
        p.curves = sorted({ar.curve for ar in inc})
        p.params = {key: t for key, t in p.params.items() if key.split(":")[0] in p.curves}
        types = [r["type"] for r in r0 if _near_hk((p.h, p.k), (r["h"], r["k"]), scale)]
        if types:
            p.kind, p.types = "rank0", types
        elif cusp is not None and any(abs(t - cusp) <= 1e-12 * cusp for key, t in p.params.items()
                                      if key.startswith("ParamCurve")):
            p.kind = "cusp"
        elif p.kind != "window":
            tangent = False
            for key, t in p.params.items():
                i = _curve_index(curves, key)
                if breaks.get(i, {}).get(t):
                    tangent = True
            if len(p.curves) == 1 and p.k == 0.0:
                p.kind = "boundary"
            else:
                p.kind = "tangency" if tangent else "intersection"
    _assign_labels(points, a, b, kappa, c1, r0)

    for ar in arcs:
        c = curves[_curve_index(curves, ar.curve + (":" + ar.branch if ar.branch else ""))]
        ar.polyline = _polyline(c, ar.t0, ar.t1, a, b, kappa, c1)
        # pin the ends to the singular points so that the arcs share vertices exactly
        ar.polyline[0] = [points[ar.start].h, points[ar.start].k]
        ar.polyline[-1] = [points[ar.end].h, points[ar.end].k]
        if annotate:
            ar.circles = oracle.circles(c, 0.5 * (ar.t0 + ar.t1))
            ar.atom, ar.atom_source = _atom_from_circles(ar.circles)
    arcs.sort(key=lambda ar: (ar.curve, ar.branch, ar.t0))
    _pin_atoms(arcs, points)

    curve_entries = []
    for tag in REGIME_CURVES[regime]:
        polys = [ar.polyline for ar in arcs if ar.curve == tag.value]
        curve_entries.append({"tag": tag.value, "descriptor": curve_descriptor(tag, a, b, kappa, c1),
                              "polylines": polys})
    return DiagramModel(regime=regime, region=str(region),
                        params={"a": a, "b": b, "kappa": kappa, "c1": c1},
                        window=window, curves=curve_entries, singular_points=points, arcs=arcs)


def arc_curve(ar: Arc, model: DiagramModel) -> _Curve:
    """Geometry of the curve carrying an arc."""
    a, b, kappa, c1 = (model.params[x] for x in ("a", "b", "kappa", "c1"))
    tag = CurveId(ar.curve)
    if tag in PARAM_TAGS:
        return _Curve(tag, ar.branch)
    return _Curve(tag, "", _graph_coeffs(tag, a, b, kappa, c1))


def arc_line(ar: Arc, model: DiagramModel, n: int = 1024) -> list:
    """A dense resampling of an arc, with its ends pinned to the stored polyline ends."""
    if len(ar.polyline) < 2:
        return list(ar.polyline)
    a, b, kappa, c1 = (model.params[x] for x in ("a", "b", "kappa", "c1"))
    line = _polyline(arc_curve(ar, model), ar.t0, ar.t1, a, b, kappa, c1, n=n)
    line[0], line[-1] = list(ar.polyline[0]), list(ar.polyline[-1])
    return line


def _curve_index(curves: list[_Curve], key: str) -> int:
    tag, _, branch = key.partition(":")
    for i, c in enumerate(curves):
        if c.tag.value == tag and c.branch == branch:
            return i
    raise KeyError(key)


def _atom_from_circles(circles: dict) -> tuple[str, str]:
    """Elliptic critical circles always give atoms A; hyperbolic ones are left open."""
    if circles and set(circles) == {"elliptic"}:
        n = circles["elliptic"]
        return ("A" if n == 1 else f"{n}A"), "circles"
    return "Unknown", "none"


# arcs whose atoms are stated explicitly, keyed by the unordered pair of end labels
PINNED_ATOMS = {
    frozenset({"y8", "z2"}): "2A*",
    frozenset({"y8", "y13"}): "2B",
    frozenset({"y7", "y8"}): "2B",
}


def _pin_atoms(arcs: list[Arc], points: list[SingularPoint]) -> None:
    for ar in arcs:
        ends = frozenset({points[ar.start].label, points[ar.end].label})
        if ends in PINNED_ATOMS:
            ar.atom, ar.atom_source = PINNED_ATOMS[ends], "text"
        # the parametric arc leaving the single center-saddle point y12 upwards carries B
        if ar.curve == "ParamCurve" and "y12" in ends and ar.circles.get("hyperbolic") == 1:
            ar.atom, ar.atom_source = "B", "text"


# ---------------------------------------------------------------- validation and chambers

def incidence_errors(model: DiagramModel) -> list[float]:
    """|distance| from every singular point to every incident curve, evaluated at its parameter."""
    a, b, kappa, c1 = (model.params[x] for x in ("a", "b", "kappa", "c1"))
    out = []
    for p in model.singular_points:
        for key, t in p.params.items():
            tag = CurveId(key.split(":")[0])
            if tag in PARAM_TAGS:
                h, k = param_curve_hk(t, a, b, kappa, c1)
                out.append(float(max(abs(h - p.h), abs(k - p.k)) / max(1.0, abs(p.h), abs(p.k))))
            else:
                cur = _Curve(tag, "", _graph_coeffs(tag, a, b, kappa, c1))
                _, k = cur.hk(p.h, a, b, kappa, c1)
                out.append(float(abs(k - p.k) / max(1.0, abs(p.h), abs(p.k))))
    return out


def chamber_polygons(model: DiagramModel):
    """Bounded faces of the planar arrangement formed by the kept arcs."""
    from shapely.geometry import LineString
    from shapely.ops import polygonize, unary_union

    lines = [LineString(arc_line(ar, model)) for ar in model.arcs if len(ar.polyline) >= 2]
    if not lines:
        return []
    merged = unary_union(lines)
    return sorted(polygonize(merged), key=lambda g: (-g.area, g.centroid.x))


def chamber_probes(model: DiagramModel) -> list[tuple[float, float]]:
    """One interior point per chamber, as far from the boundary as a cheap search allows."""
    out = []
    for poly in chamber_polygons(model):
        p = poly.representative_point()
        try:
            from shapely import maximum_inscribed_circle

            p = maximum_inscribed_circle(poly, tolerance=poly.length * 1e-4).coords[0]
            out.append((float(p[0]), float(p[1])))
        except ImportError:  # pragma: no cover - older shapely
            out.append((float(p.x), float(p.y)))
    return out


def chamber_probe_set(model: DiagramModel, n: int = 5) -> list[list[tuple[float, float]]]:
    """Several interior points per chamber: the inscribed-circle centre and points around it."""
    from shapely import maximum_inscribed_circle

    out = []
    for poly in chamber_polygons(model):
        line = maximum_inscribed_circle(poly, tolerance=poly.length * 1e-4)
        (cx, cy), (ex, ey) = line.coords[0], line.coords[1]
        r = math.hypot(ex - cx, ey - cy)
        pts = [(float(cx), float(cy))]
        for i in range(n - 1):
            th = 2 * math.pi * i / max(n - 1, 1)
            pts.append((float(cx + 0.5 * r * math.cos(th)), float(cy + 0.5 * r * math.sin(th))))
        out.append(pts)
    return out


def containment(model: DiagramModel, momenta: np.ndarray, margin: float = 1e-6) -> dict:
    """Fraction of momenta inside the union of chambers, up to a normalized margin."""
    import shapely
    from shapely.ops import unary_union

    polys = chamber_polygons(model)
    if len(momenta) == 0:
        return {"fraction": 1.0, "outside": 0}
    if not polys:
        return {"fraction": 0.0, "outside": int(len(momenta))}
    sh = float(np.ptp(momenta[:, 0])) or 1.0
    sk = float(np.ptp(momenta[:, 1])) or 1.0
    region = unary_union(polys)
    m = np.asarray(momenta, dtype=float)
    inside = shapely.contains_xy(region, m[:, 0], m[:, 1])
    if not inside.all():
        # accept points within the margin of the boundary, measured in scaled units
        from shapely.affinity import scale as sscale

        scaled = sscale(region, xfact=1 / sh, yfact=1 / sk, origin=(0, 0))
        bad = np.flatnonzero(~inside)
        pts = shapely.points(m[bad, 0] / sh, m[bad, 1] / sk)
        d = shapely.distance(scaled, pts)
        inside[bad[d <= margin]] = True
    return {"fraction": float(inside.mean()), "outside": int((~inside).sum())}


# ---------------------------------------------------------------- rendering

def render_json(model: DiagramModel) -> str:
    return json.dumps(model.to_dict(), sort_keys=True, indent=1)


def parse_json(text: str) -> DiagramModel:
    return DiagramModel.from_dict(json.loads(text))


def _extent(model: DiagramModel):
    xs, ys = [], []
    for ar in model.arcs:
        for h, k in ar.polyline:
            xs.append(h)
            ys.append(k)
    for p in model.singular_points:
        xs.append(p.h)
        ys.append(p.k)
    if not xs:
        return 0.0, 1.0, 0.0, 1.0
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    if x1 - x0 == 0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 - y0 == 0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    return x0, x1, y0, y1


CURVE_COLORS = {
    "LineKZero": "#000000", "ParamCurve": "#1f4fb4", "ParamCurveK0": "#1f4fb4",
    "LeftParabola": "#1b8a3a", "RightParabola": "#b4421f", "ParabolaK0": "#1b8a3a",
    "UpParabolaB0": "#7a2fb4", "TangentLineB0": "#8a6d1b", "LeftParabolaB0": "#1b8a3a",
    "RightParabolaB0": "#b4421f", "UpParabolaK0B0": "#7a2fb4", "TangentLineK0B0": "#8a6d1b",
    "ParabolaK0B0": "#1b8a3a",
}


def render_svg(model: DiagramModel, width: int = 800, height: int = 600, show_atoms: bool = True) -> str:
    """SVG 1.1 drawing in (h, -k) user coordinates; identical models give identical bytes."""
    x0, x1, y0, y1 = _extent(model)
    px, py = 0.05 * (x1 - x0), 0.05 * (y1 - y0)
    vx, vy, vw, vh = x0 - px, -(y1 + py), (x1 - x0) + 2 * px, (y1 - y0) + 2 * py
    unit = max(vw, vh) / 400.0

    def f(v: float) -> str:
        return f"{v:.9g}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="{f(vx)} {f(vy)} {f(vw)} {f(vh)}" preserveAspectRatio="none">',
        f'<g id="axes" stroke="#999999" stroke-width="{f(unit)}" vector-effect="non-scaling-stroke">',
        f'<line x1="{f(vx)}" y1="0" x2="{f(vx + vw)}" y2="0"/>',
        f'<line x1="0" y1="{f(vy)}" x2="0" y2="{f(vy + vh)}"/>',
        "</g>",
        '<g id="curves" fill="none">',
    ]
    for ar in model.arcs:
        if not ar.polyline:
            continue
        d = "M" + " L".join(f"{f(h)},{f(-k)}" for h, k in ar.polyline)
        color = CURVE_COLORS.get(ar.curve, "#000000")
        out.append(f'<path class="{ar.curve}" d="{d}" stroke="{color}" stroke-width="{f(unit)}" '
                   f'vector-effect="non-scaling-stroke"/>')
        if show_atoms and ar.atom != "Unknown":
            h, k = ar.polyline[len(ar.polyline) // 2]
            out.append(f'<text x="{f(h)}" y="{f(-k)}" font-size="{f(6 * unit)}" fill="{color}">{ar.atom}</text>')
    out.append("</g>")
    out.append('<g id="points">')
    for p in model.singular_points:
        out.append(f'<circle cx="{f(p.h)}" cy="{f(-p.k)}" r="{f(2 * unit)}" fill="#000000"/>')
        if p.label:
            out.append(f'<text x="{f(p.h + 2 * unit)}" y="{f(-p.k - 2 * unit)}" font-size="{f(8 * unit)}">'
                       f"{p.label}</text>")
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
