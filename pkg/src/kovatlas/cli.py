"""Command-line front end: ``kovatlas <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import fields

from .algebra import OrbitParams, PencilParams
from .config import DEFAULT_TOL, KovatlasError, ToleranceConfig
from .critical import rank0_enumerate
from .diagram import build_diagram, render_json, render_svg
from .regions import classify_any, thresholds, thresholds_kappa0
from .topology import fiber_tori, image_cloud, kappa_limit_compare


def _default_seed() -> int:
    raw = os.environ.get("KOVATLAS_SEED")
    try:
        return int(raw) if raw else 0
    except ValueError:
        return 0


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _pair(text: str) -> tuple[float, float]:
    vals = _float_list(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"expected h,k, got {text!r}")
    return vals[0], vals[1]


def _orbit_args(p: argparse.ArgumentParser, a=None, b=None) -> None:
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--c1", type=float, default=1.0)
    p.add_argument("--a", type=float, required=a is None, default=a)
    p.add_argument("--b", type=float, required=b is None, default=b)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kovatlas", description="Bifurcation diagrams of the Kovalevskaya pencil.")
    for f in fields(ToleranceConfig):
        parser.add_argument(f"--tol-{f.name.removesuffix('_tol').replace('_', '-')}", dest=f"tol_{f.name}",
                            type=float, default=None, metavar="X", help=f"override {f.name} (default {f.default})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("diagram", help="build a bifurcation diagram and write SVG or JSON")
    _orbit_args(p)
    p.add_argument("--out", default=None, help="output file (stdout when omitted)")
    p.add_argument("--format", choices=("svg", "json"), default="svg")
    p.add_argument("--samples", type=int, default=20000)
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("classify", help="region of the (a, b) plane and the threshold values")
    _orbit_args(p)

    p = sub.add_parser("critical", help="rank-0 critical points as JSON")
    _orbit_args(p)

    p = sub.add_parser("sample", help="count Liouville tori over a momentum value")
    _orbit_args(p, a=6.0, b=1.0)
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--probe", type=_pair, required=True, help="momentum value h,k")

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--fast", action="store_true", help="smaller topology sample, no arc sweep")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--json", action="store_true", help="print the full report as JSON")

    p = sub.add_parser("limit", help="distance of the diagram to its kappa = 0 limit")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--c1", type=float, default=1.0)
    p.add_argument("--kappas", type=_float_list, default=[0.1, 0.01, 0.001])
    return parser


def _tolerances(ns: argparse.Namespace) -> ToleranceConfig:
    return DEFAULT_TOL.with_overrides(**{f.name: getattr(ns, f"tol_{f.name}") for f in fields(ToleranceConfig)})


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _cmd_diagram(ns, tol) -> int:
    seed = _default_seed() if ns.seed is None else ns.seed
    model = build_diagram(ns.a, ns.b, ns.kappa, ns.c1, n_samples=ns.samples, seed=seed)
    _emit(render_svg(model) if ns.format == "svg" else render_json(model), ns.out)
    return 0


def _cmd_classify(ns, tol) -> int:
    region = classify_any(ns.a, ns.b, ns.kappa, ns.c1, tol)
    print(str(region))
    th = thresholds_kappa0(ns.b, ns.c1) if ns.kappa == 0 else thresholds(ns.b, ns.kappa, ns.c1).as_dict()
    for name, value in th.items():
        print(f"{name} = {value:.12g}")
    return 0


def _cmd_critical(ns, tol) -> int:
    records = rank0_enumerate(OrbitParams(ns.a, ns.b), PencilParams(ns.kappa, ns.c1), tol)
    print(json.dumps([r.to_json() for r in records], indent=2))
    return 0


def _cmd_sample(ns, tol) -> int:
    seed = _default_seed() if ns.seed is None else ns.seed
    cloud = image_cloud(OrbitParams(ns.a, ns.b), PencilParams(ns.kappa, ns.c1), ns.n, seed=seed)
    rep = fiber_tori(cloud, ns.probe, seed=seed)
    print(json.dumps({"probe": list(ns.probe), "tori": rep.count, "slab": rep.slab, "on_fiber": rep.projected}))
    return 0


def _cmd_verify(ns, tol) -> int:
    from .acceptance import run_all

    seed = _default_seed() if ns.seed is None else ns.seed
    report = run_all(fast=ns.fast, seed=seed)
    if ns.json:
        print(json.dumps(report, indent=2, default=str))
    else:
        for chk in report["checks"]:
            print(f"[{chk['status'].upper()}] {chk['name']} ({chk['seconds']:.1f}s)")
    return 0 if report["passed"] else 1


def _cmd_limit(ns, tol) -> int:
    from .acceptance import _jsonable

    report = kappa_limit_compare(ns.a, ns.b, ns.c1, ns.kappas)
    print(json.dumps(_jsonable(report), indent=2))
    return 0


COMMANDS = {
    "diagram": _cmd_diagram,
    "classify": _cmd_classify,
    "critical": _cmd_critical,
    "sample": _cmd_sample,
    "verify": _cmd_verify,
    "limit": _cmd_limit,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        tol = _tolerances(ns)
        return COMMANDS[ns.command](ns, tol)
    except (KovatlasError, ValueError) as exc:
        print(f"kovatlas: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
