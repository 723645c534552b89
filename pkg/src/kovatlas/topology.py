"""Sampling checks on the Liouville foliation: image clouds, torus counts, symmetry tests."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .algebra import (
    MomentumValue,
    OrbitParams,
    PencilParams,
    apply_symmetry,
    grad_h,
    grad_k,
    hamiltonian,
    integral_k,
    integrate_flow,
    sample_orbit,
    x_h,
    x_k,
)
from .config import InsufficientSamples, InvalidParameters, StepDiverged

MIN_SLAB = 200
HIT_FRACTION = 0.25


@dataclass
class SampleCloud:
    points: np.ndarray
    momenta: np.ndarray
    orbit: OrbitParams
    params: PencilParams
    seed: int | None = None

    def __len__(self) -> int:
        return len(self.points)

    def transformed(self, which: str) -> "SampleCloud":
        pts = apply_symmetry(self.points, which)
        return SampleCloud(pts, _momenta(pts, self.params), self.orbit, self.params, self.seed)


def _momenta(pts: np.ndarray, params: PencilParams) -> np.ndarray:
    if len(pts) == 0:
        return np.zeros((0, 2))
    return np.stack([hamiltonian(pts, params), integral_k(pts, params)], axis=1)


def image_cloud(orbit: OrbitParams, params: PencilParams, n: int, seed=None) -> SampleCloud:
    if params.kappa <= 0:
        raise InvalidParameters("image clouds need a compact orbit (kappa > 0)")
    pts = sample_orbit(orbit, params, n, seed=seed) if n > 0 else np.zeros((0, 6))
    return SampleCloud(pts, _momenta(pts, params), orbit, params, seed)


def momentum_scales(cloud: SampleCloud) -> tuple[float, float]:
    """Spread of H and K over the cloud, used to make (h, k) distances dimensionless."""
    if len(cloud) == 0:
        return 1.0, 1.0
    m = cloud.momenta
    sh = float(np.ptp(m[:, 0])) or 1.0
    sk = float(np.ptp(m[:, 1])) or 1.0
    return sh, sk


# ---------------------------------------------------------------- projection onto a fiber

def _constraints(y, orbit, params, target):
    f1 = np.sum(y[:, 3:] ** 2, axis=1) + params.kappa * np.sum(y[:, :3] ** 2, axis=1)
    f2 = np.sum(y[:, 3:] * y[:, :3], axis=1)
    return np.stack([f1 - orbit.a, f2 - orbit.b,
                     hamiltonian(y, params) - target[0], integral_k(y, params) - target[1]], axis=1)


def project_to_fiber(y0: np.ndarray, orbit: OrbitParams, params: PencilParams, target,
                     iters: int = 40, tol: float = 1e-11):
    """Minimum-norm Newton iteration onto {f1=a, f2=b, H=h, K=k}; returns (points, converged mask)."""
    y = np.array(y0, dtype=float, copy=True).reshape(-1, 6)
    target = np.asarray(target, dtype=float)
    scale = np.array([max(1.0, abs(orbit.a)), max(1.0, abs(orbit.b)),
                      max(1.0, abs(target[0])), max(1.0, abs(target[1]))])
    ok = np.zeros(len(y), dtype=bool)
    for _ in range(iters):
        g = _constraints(y, orbit, params, target)
        res = np.max(np.abs(g) / scale, axis=1)
        ok = res < tol
        if ok.all():
            break
        g1, g2 = _cas_grads(y, params)
        jac = np.stack([g1, g2, grad_h(y, params), grad_k(y, params)], axis=1)
        step = np.einsum("nij,nj->ni", np.linalg.pinv(jac, rcond=1e-12), g)
        step[ok] = 0.0
        # damp long steps; they only happen far from the fiber
        norm = np.linalg.norm(step, axis=1)
        lim = 0.5 * (1.0 + np.linalg.norm(y, axis=1))
        fac = np.minimum(1.0, lim / np.maximum(norm, 1e-300))
        y = y - fac[:, None] * step
        if not np.all(np.isfinite(y)):
            bad = ~np.all(np.isfinite(y), axis=1)
            y[bad] = 0.0
    g = _constraints(y, orbit, params, target)
    ok = np.max(np.abs(g) / scale, axis=1) < tol
    return y, ok


def _cas_grads(y, params):
    g1 = np.concatenate([2.0 * params.kappa * y[:, :3], 2.0 * y[:, 3:]], axis=1)
    g2 = np.concatenate([y[:, 3:], y[:, :3]], axis=1)
    return g1, g2


# ---------------------------------------------------------------- torus components

@dataclass
class FiberReport:
    count: int
    slab: int
    projected: int
    link_radius: float
    labels: np.ndarray = field(repr=False)
    points: np.ndarray = field(repr=False)

    def component(self, i: int) -> np.ndarray:
        return self.points[self.labels == i]


def _graph_components(points: np.ndarray, radius: float) -> np.ndarray:
    if len(points) == 0:
        return np.zeros(0, dtype=int)
    pairs = cKDTree(points).query_pairs(radius, output_type="ndarray")
    n = len(points)
    adj = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(n, n)) if len(pairs) else \
        coo_matrix((n, n))
    _, labels = connected_components(adj, directed=False)
    return labels


def _merge(labels: np.ndarray, pairs: list[tuple[int, int]]) -> np.ndarray:
    m = int(labels.max()) + 1 if len(labels) else 0
    if not pairs or m == 0:
        return labels
    p = np.array(pairs)
    adj = coo_matrix((np.ones(len(p)), (p[:, 0], p[:, 1])), shape=(m, m))
    _, relabel = connected_components(adj, directed=False)
    return relabel[labels]


def _flow_refine(points, labels, params, radius, seeds_per_component, steps, rng):
    """Merge components whose points are reached by X_H / X_K trajectories of another component."""
    tree = cKDTree(points)
    extent = float(np.linalg.norm(np.ptp(points, axis=0)))
    # hits must be closer than the gap between nearly touching tori
    radius = max(HIT_FRACTION * radius, 1e-2 * extent)
    for _ in range(10):
        comps = np.unique(labels)
        if len(comps) <= 1:
            return labels
        seeds, owner = [], []
        for c in comps:
            idx = np.flatnonzero(labels == c)
            pick = rng.choice(idx, size=min(seeds_per_component, len(idx)), replace=False)
            seeds.append(points[pick])
            owner.extend([c] * len(pick))
        seeds = np.concatenate(seeds)
        owner = np.array(owner)
        pairs = set()
        for fld, vf in (("H", x_h), ("K", x_k)):
            speed = max(float(np.median(np.linalg.norm(vf(seeds, params), axis=-1))), 1e-12)
            dt = max(radius, 1e-2 * extent) / speed
            try:
                traj = integrate_flow(seeds, params, fld, dt, steps, record=True)
            except StepDiverged:
                continue
            for t in range(1, traj.shape[0], 4):
                d, j = tree.query(traj[t], distance_upper_bound=radius)
                hit = np.isfinite(d)
                for o, lab in zip(owner[hit], labels[j[hit]]):
                    if o != lab:
                        pairs.add((int(o), int(lab)))
        if not pairs:
            return labels
        labels = _merge(labels, sorted(pairs))
    return labels


def fiber_tori(cloud: SampleCloud, probe, eps_h: float | None = None, eps_k: float | None = None,
               link_radius: float | None = None, min_samples: int = MIN_SLAB, refine: bool = True,
               seeds_per_component: int = 32, flow_steps: int = 400, seed: int = 0,
               target_slab: int = 1500, max_rel_eps: float = 0.05) -> FiberReport:
    """Liouville tori over a regular value, as labelled point sets on the exact fiber."""
    h, k = (probe.h, probe.k) if isinstance(probe, MomentumValue) else probe
    empty = FiberReport(0, 0, 0, 0.0, np.zeros(0, dtype=int), np.zeros((0, 6)))
    if len(cloud) == 0:
        return empty
    m = cloud.momenta
    sh, sk = momentum_scales(cloud)
    if eps_h is None or eps_k is None:
        # square slab just wide enough to hold target_slab samples; Newton projection
        # puts them on the exact fiber, so the width only affects the seeding
        d = np.maximum(np.abs(m[:, 0] - h) / sh, np.abs(m[:, 1] - k) / sk)
        r = float(np.partition(d, min(target_slab, len(d)) - 1)[min(target_slab, len(d)) - 1])
        r = min(max(r, 1e-3), max_rel_eps) * (1 + 1e-12)
        eps_h = r * sh if eps_h is None else eps_h
        eps_k = r * sk if eps_k is None else eps_k
    sel = (np.abs(m[:, 0] - h) < eps_h) & (np.abs(m[:, 1] - k) < eps_k)
    nsel = int(sel.sum())
    if nsel == 0:
        return empty
    pts, ok = project_to_fiber(cloud.points[sel], cloud.orbit, cloud.params, (h, k))
    pts = pts[ok]
    if len(pts) == 0:
        # nothing reaches the level set: the probe is outside the image
        return FiberReport(0, nsel, 0, 0.0, np.zeros(0, dtype=int), np.zeros((0, 6)))
    if nsel < min_samples:
        raise InsufficientSamples(f"{nsel} samples in the slab, need {min_samples}")
    if link_radius is None:
        # deliberately tight: tori close to a separatrix nearly touch, so the graph
        # over-segments and the flows (exact connectivity witnesses) do the merging
        d, _ = cKDTree(pts).query(pts, k=min(2, len(pts)))
        nn = float(np.median(d[:, -1])) if len(pts) > 1 else 1.0
        link_radius = 2.0 * nn
    labels = _graph_components(pts, link_radius)
    if refine:
        rng = np.random.default_rng(seed)
        labels = _flow_refine(pts, labels, cloud.params, link_radius, seeds_per_component, flow_steps, rng)
    _, labels = np.unique(labels, return_inverse=True)
    count = int(labels.max()) + 1 if len(labels) else 0
    return FiberReport(count, nsel, len(pts), link_radius, labels, pts)


def fiber_components(cloud: SampleCloud, probe, eps_h: float | None = None, eps_k: float | None = None,
                     link_radius: float | None = None, **kw) -> int:
    return fiber_tori(cloud, probe, eps_h, eps_k, link_radius, **kw).count


def sigma_invariance(cloud: SampleCloud, probe, **kw) -> dict:
    """Torus counts for the cloud and for its images under sigma2 and sigma3."""
    return {name: fiber_components(c, probe, **kw)
            for name, c in (("id", cloud), ("sigma2", cloud.transformed("sigma2")),
                            ("sigma3", cloud.transformed("sigma3")))}


# ---------------------------------------------------------------- atoms across arcs

@dataclass(frozen=True)
class AtomDelta:
    atom: str
    tori_before: int
    tori_after: int

    @property
    def multiplicity(self) -> int:
        digits = self.atom[: len(self.atom) - len(self.base)]
        return int(digits) if digits else 1

    @property
    def base(self) -> str:
        return self.atom.lstrip("0123456789")

    def consistent(self) -> bool:
        """mA loses m tori, mB gains m, mA* and mC2 keep the count; other tori may pass by unchanged."""
        m, base, n0, n1 = self.multiplicity, self.base, self.tori_before, self.tori_after
        if base == "A":
            return n0 - n1 == m and n1 >= 0
        if base == "B":
            return n1 - n0 == m and n0 >= m
        if base in ("A*", "C2"):
            return n0 == n1 >= m
        return False


def _mult(m: int, base: str) -> str:
    return base if m == 1 else f"{m}{base}"


def infer_atom(count_a: int, count_b: int, circles: dict) -> AtomDelta | None:
    """Atom over an arc from the torus counts on its two sides and its critical circles.

    Elliptic circles give A. Hyperbolic circles give B when the count changes and A*
    when it does not (A* and C2 are not told apart here). Returns None otherwise.
    """
    kinds = set(circles)
    lo, hi = sorted((count_a, count_b))
    if kinds == {"elliptic"}:
        return AtomDelta(_mult(circles["elliptic"], "A"), hi, lo)
    if kinds == {"hyperbolic"}:
        m = circles["hyperbolic"]
        if lo == hi:
            return AtomDelta(_mult(m, "A*"), lo, hi)
        return AtomDelta(_mult(m, "B"), lo, hi)
    return None


def _arc_point(model, ar, s: float):
    from .diagram import arc_curve

    a, b, kappa, c1 = (model.params[x] for x in ("a", "b", "kappa", "c1"))
    cur = arc_curve(ar, model)
    t = ar.t0 + s * (ar.t1 - ar.t0)
    dt = 1e-6 * max(abs(ar.t1 - ar.t0), 1e-12)
    h, k = (float(v) for v in cur.hk(t, a, b, kappa, c1))
    hp, kp = (float(v) for v in cur.hk(t + dt, a, b, kappa, c1))
    hm, km = (float(v) for v in cur.hk(t - dt, a, b, kappa, c1))
    return cur, t, (h, k), (hp - hm, kp - km)


def _clearance(model, arc_index: int, h: float, k: float, sh: float, sk: float) -> float:
    """Scaled distance from (h, k) to the other arcs and the singular points."""
    best = 1.0
    p = np.array([h / sh, k / sk])
    for i, ar in enumerate(model.arcs):
        if i == arc_index or len(ar.polyline) < 2:
            continue
        q = np.asarray(ar.polyline, dtype=float) / [sh, sk]
        u, v = q[:-1], q[1:]
        d = v - u
        t = np.clip(np.einsum("ij,ij->i", p - u, d) / np.maximum(np.einsum("ij,ij->i", d, d), 1e-300), 0, 1)
        best = min(best, float(np.min(np.linalg.norm(u + t[:, None] * d - p, axis=1))))
    for sp in model.singular_points:
        best = min(best, math.hypot((sp.h - h) / sh, (sp.k - k) / sk))
    return best


def arc_crossing_delta(cloud: SampleCloud, model, arc_index: int, offset: float | None = None, s: float = 0.5,
                       oracle=None, **kw) -> dict:
    """Torus counts on both sides of an arc and the atom they imply.

    The probes sit at +-offset along the normal, in units of the momentum spread; by
    default half the clearance to the nearest other arc, so that each probe
    sits well inside its chamber and away from the separatrix.
    """
    from .diagram import CriticalOracle

    ar = model.arcs[arc_index]
    cur, t, (h, k), (dh, dk) = _arc_point(model, ar, s)
    sh, sk = momentum_scales(cloud)
    if offset is None:
        offset = min(0.5 * _clearance(model, arc_index, h, k, sh, sk), 2e-2)
    nx, ny = -dk / sk, dh / sh
    nn = math.hypot(nx, ny) or 1.0
    nx, ny = nx / nn, ny / nn
    plus = (h + offset * nx * sh, k + offset * ny * sk)
    minus = (h - offset * nx * sh, k - offset * ny * sk)
    c_plus = fiber_components(cloud, plus, **kw)
    c_minus = fiber_components(cloud, minus, **kw)
    if oracle is None:
        a, b, kappa, c1 = (model.params[x] for x in ("a", "b", "kappa", "c1"))
        oracle = CriticalOracle(a, b, kappa, c1, samples=cloud.points)
    circles = oracle.circles(cur, t)
    delta = infer_atom(c_minus, c_plus, circles)
    return {"arc": arc_index, "point": (h, k), "offset": offset, "probes": {"minus": minus, "plus": plus},
            "counts": (c_minus, c_plus), "circles": circles, "delta": delta,
            "consistent": bool(delta is not None and delta.consistent())}


# ---------------------------------------------------------------- components over a small disk

def _continue(src: np.ndarray, cloud: SampleCloud, target, dst: FiberReport, max_move: float) -> set[int]:
    """Tori over `target` reached by projecting points of a torus over a nearby value."""
    if dst.count == 0 or len(src) == 0:
        return set()
    y, ok = project_to_fiber(src, cloud.orbit, cloud.params, target)
    move = np.linalg.norm(y - src, axis=1)
    ok &= move <= max_move
    if not ok.any():
        return set()
    d, j = cKDTree(dst.points).query(y[ok])
    return {int(dst.labels[i]) for i in j[d <= 3 * dst.link_radius]}


def disk_components(cloud: SampleCloud, center, radius: float, n_ring: int = 12, subsample: int = 40,
                    seed: int = 0, **kw) -> dict:
    """Connected components of the preimage of a small disk, traced through tori over two rings.

    Nodes are (probe, torus) pairs; tori over neighbouring probes are joined when Newton
    continuation of one lands on the other. The radius is relative to the momentum spread.
    """
    sh, sk = momentum_scales(cloud)
    h0, k0 = center
    probes = []
    for rr in (radius, 0.5 * radius):
        for i in range(n_ring):
            th = 2 * math.pi * (i + (0.5 if rr < radius else 0.0)) / n_ring
            probes.append((h0 + rr * sh * math.cos(th), k0 + rr * sk * math.sin(th)))
    reports = [fiber_tori(cloud, p, seed=seed, **kw) for p in probes]
    nodes = [(pi, ti) for pi, r in enumerate(reports) for ti in range(r.count)]
    index = {nd: i for i, nd in enumerate(nodes)}
    rng = np.random.default_rng(seed)
    size = max(float(np.max(np.abs(cloud.points))) if len(cloud) else 1.0, 1e-12)
    pairs = []
    n = len(probes)
    neighbours = set()
    for i in range(n_ring):
        neighbours.add((i, (i + 1) % n_ring))
        neighbours.add((n_ring + i, n_ring + (i + 1) % n_ring))
        neighbours.add((i, n_ring + i))
        neighbours.add((i, n_ring + (i - 1) % n_ring))
    for p, q in sorted(neighbours):
        for src_i, dst_i in ((p, q), (q, p)):
            rs, rd = reports[src_i], reports[dst_i]
            for ti in range(rs.count):
                pts = rs.component(ti)
                pick = pts[rng.choice(len(pts), size=min(subsample, len(pts)), replace=False)]
                for tj in _continue(pick, cloud, probes[dst_i], rd, 0.25 * size):
                    pairs.append((index[(src_i, ti)], index[(dst_i, tj)]))
    m = len(nodes)
    if m == 0:
        return {"components": 0, "node_component": {}, "probes": probes, "counts": [0] * n}
    labels = _merge(np.arange(m), pairs) if pairs else np.arange(m)
    _, labels = np.unique(labels, return_inverse=True)
    return {"components": int(labels.max()) + 1, "node_component": {nodes[i]: int(labels[i]) for i in range(m)},
            "probes": probes, "counts": [r.count for r in reports], "reports": reports}


def symmetry_permutation(report: FiberReport, symmetry: str = "sigma3") -> dict[int, list[int]]:
    """Tori of one fiber hit by the symmetry image of each torus of that fiber."""
    out = {}
    if report.count == 0:
        return out
    tree = cKDTree(report.points)
    for i in range(report.count):
        d, j = tree.query(apply_symmetry(report.component(i), symmetry))
        out[i] = sorted({int(report.labels[t]) for t in j[d <= 3 * report.link_radius]})
    return out


def component_symmetry_check(cloud: SampleCloud, center, radius: float = 2e-3, symmetry: str = "sigma3",
                             **kw) -> dict:
    """Components of the preimage of a disk and the permutation the symmetry induces on them."""
    res = disk_components(cloud, center, radius, **kw)
    perm: dict[int, set[int]] = {}
    perms = {}
    for (pi, ti), comp in res["node_component"].items():
        if pi not in perms:
            perms[pi] = symmetry_permutation(res["reports"][pi], symmetry)
        for tj in perms[pi].get(ti, []):
            perm.setdefault(comp, set()).add(res["node_component"][(pi, tj)])
    n = res["components"]
    mapping = {c: sorted(v) for c, v in sorted(perm.items())}
    is_perm = all(len(v) == 1 for v in mapping.values()) and len(mapping) == n
    swapped = is_perm and n > 0 and all(v[0] != c for c, v in mapping.items())
    return {"components": n, "mapping": mapping, "swapped": bool(swapped), "counts": res["counts"]}


# ---------------------------------------------------------------- molecules

@dataclass
class MoleculeRecord:
    singular_point: str
    point_type: str
    atoms: list
    edges: list
    source: str
    doubled: bool = False
    note: str = ""


INF = "inf"


def _cc(label: str) -> MoleculeRecord:
    return MoleculeRecord(label, "CenterCenter", ["A", "A"], [{"from": 0, "to": 1, "r": 0, "eps": 1}], "text")


def _cs(label: str, saddle: str, source: str) -> MoleculeRecord:
    # the saddle atom with an A glued to each of its edges, every added edge marked r = inf
    legs = {"B": 3, "A*": 2}.get(saddle)
    atoms = [saddle] + ["A"] * (legs or 0)
    edges = [{"from": 0, "to": i + 1, "r": INF} for i in range(legs or 0)]
    return MoleculeRecord(label, "CenterSaddle", atoms, edges, source,
                          note="" if legs else "saddle atom to be transcribed from the tables")


def molecule_registry() -> list[MoleculeRecord]:
    """Loop molecules of the singular points; marks that only the tables give are left as None."""
    recs = [_cc(lb) for lb in ("y1", "y10", "z1", "z4", "z6", "z7", "z9", "z11")]
    recs.append(_cs("y12", "B", "text"))
    for lb in ("y11", "z3", "z5", "z10"):
        recs.append(_cs(lb, "?", "figure"))
    for lb in ("y3", "y7"):
        recs.append(MoleculeRecord(lb, "SaddleSaddle", ["?"], [{"from": 0, "to": 0, "r": None, "eps": None}],
                                   "figure", note="saddle-saddle loop molecule, marks from the tables"))
    for lb in ("y8", "y9"):
        recs.append(MoleculeRecord(lb, "Degenerate", ["?"], [{"r": None, "eps": None, "n": None}], "figure",
                                   doubled=True, note="the tabulated molecule occurs twice"))
    recs.append(MoleculeRecord("z2", "Degenerate", ["A", "A*", "A"],
                               [{"from": 0, "to": 1, "r": None}, {"from": 1, "to": 2, "r": None}], "text",
                               doubled=True, note="two identical elliptic period-doubling molecules"))
    return recs


def molecule(label: str) -> MoleculeRecord:
    for r in molecule_registry():
        if r.singular_point == label:
            return r
    raise KeyError(label)


# ---------------------------------------------------------------- the kappa -> 0 limit

def _curve_samples_kpos(a, b, kappa, c1, window, n=4000) -> np.ndarray:
    from .curves import param_curve_hk, parabola_value

    h0, h1, k0, k1 = window
    pts = []
    z = np.concatenate([-np.geomspace(1e-3, 1e3, n)[::-1], np.geomspace(1e-3, 1e3, n)])
    h, k = param_curve_hk(z, a, b, kappa, c1)
    pts.append(np.column_stack([h, k]))
    hh = np.linspace(h0, h1, n)
    for which in ("left", "right"):
        pts.append(np.column_stack([hh, parabola_value(which, hh, a, b, kappa, c1)]))
    pts.append(np.column_stack([hh, np.zeros_like(hh)]))
    p = np.concatenate(pts)
    keep = (p[:, 0] >= h0) & (p[:, 0] <= h1) & (p[:, 1] >= k0) & (p[:, 1] <= k1)
    return p[keep]


def _distance_to_kappa0(pts: np.ndarray, a, b, c1) -> np.ndarray:
    """Euclidean distance from each point to the kappa = 0 curve set, refined by 1-d minimization."""
    from scipy.optimize import minimize_scalar

    from .curves import param_curve_k0_hk, parabola_k0

    def d_param(p):
        z = np.concatenate([-np.geomspace(1e-3, 1e3, 20000)[::-1], np.geomspace(1e-3, 1e3, 20000)])
        h, k = param_curve_k0_hk(z, a, b, c1)
        i = int(np.argmin((h - p[0]) ** 2 + (k - p[1]) ** 2))
        lo, hi = z[max(i - 1, 0)], z[min(i + 1, len(z) - 1)]
        if lo < 0 < hi:
            lo, hi = (z[i], z[i]) if z[i] != 0 else (lo, hi)
        f = lambda t: float(np.hypot(*(np.array(param_curve_k0_hk(t, a, b, c1)) - p)))
        if lo == hi:
            return f(lo)
        r = minimize_scalar(f, bounds=(min(lo, hi), max(lo, hi)), method="bounded", options={"xatol": 1e-14})
        return min(r.fun, f(z[i]))

    def d_parab(p):
        f = lambda t: float(np.hypot(t - p[0], parabola_k0(t, a, b) - p[1]))
        r = minimize_scalar(f, bounds=(p[0] - 10, p[0] + 10), method="bounded", options={"xatol": 1e-14})
        return min(r.fun, f(p[0]))

    out = np.empty(len(pts))
    for i, p in enumerate(pts):
        out[i] = min(abs(p[1]), d_parab(p), d_param(p))
    return out


def kappa_limit_compare(a: float, b: float, c1: float, kappa_seq, window=None, n: int = 400) -> dict:
    """One-sided distance from the kappa-diagram curves in a window to the kappa = 0 curves."""
    if a <= 0:
        raise InvalidParameters("a must be positive")
    kappa_seq = [float(k) for k in kappa_seq]
    if window is None:
        h_lo = -2.0 * c1 * math.sqrt(a)
        window = [h_lo - 1.0, 4.0 * abs(h_lo) + 4.0, 0.0, 4.0 * a * c1 * c1 + 16.0]
    dists = []
    for kappa in kappa_seq:
        pts = _curve_samples_kpos(a, b, kappa, c1, window, n=n)
        d = _distance_to_kappa0(pts, a, b, c1) if len(pts) else np.zeros(1)
        dists.append(float(d.max()))
    ratios = [d / k for d, k in zip(dists, kappa_seq)]
    monotone = all(d1 <= d0 * (1 + 1e-9) for d0, d1 in zip(dists, dists[1:]))
    ks, ds = np.array(kappa_seq), np.array(dists)
    C = float(ks @ ds / (ks @ ks)) if len(ks) else 0.0  # least-squares fit of d = C kappa
    linear = bool(dists and dists[-1] < 2.0 * C * kappa_seq[-1])
    return {"kappas": kappa_seq, "window": window, "distances": dists, "ratios": ratios,
            "monotone": monotone, "linear": linear, "C": C}


# ---------------------------------------------------------------- loop census

def _predicted_jump(atom: str) -> int | None:
    if atom in ("Unknown", "", None):
        return None
    d = AtomDelta(atom, 0, 0)
    return 0 if d.base in ("A*", "C2") else d.multiplicity


def loop_census(cloud: SampleCloud, model, label: str, radius: float, n: int = 16, **kw) -> dict:
    """Torus counts on a small loop around a singular point, compared with the atoms of the arcs it crosses.

    The radius is relative to the momentum spread. Each step between neighbouring probes
    crosses zero or more arcs; the count must jump by the sum of their atom sizes (up to
    sign, since the side an atom opens towards is not stored), and the jumps must close up.
    """
    from shapely.geometry import LineString

    from .diagram import arc_line

    sp = model.point(label)
    sh, sk = momentum_scales(cloud)
    probes = [(sp.h + radius * sh * math.cos(2 * math.pi * i / n), sp.k + radius * sk * math.sin(2 * math.pi * i / n))
              for i in range(n)]
    counts = [fiber_components(cloud, p, **kw) for p in probes]
    lines = [(ar, LineString(arc_line(ar, model))) for ar in model.arcs]
    steps = []
    for i in range(n):
        seg = LineString([probes[i], probes[(i + 1) % n]])
        crossed = [ar.atom for ar, ln in lines if seg.intersects(ln)]
        jump = counts[(i + 1) % n] - counts[i]
        sizes = [_predicted_jump(a) for a in crossed]
        if any(v is None for v in sizes):
            ok = None
        elif len(sizes) <= 1:
            ok = abs(jump) == (sizes[0] if sizes else 0)
        else:
            ok = abs(jump) <= sum(sizes) and (sum(sizes) - abs(jump)) % 2 == 0
        steps.append({"crossed": crossed, "jump": jump, "ok": ok})
    closed = sum(s["jump"] for s in steps) == 0
    return {"label": label, "counts": counts, "steps": steps, "closed": closed,
            "consistent": closed and all(s["ok"] is not False for s in steps)}
