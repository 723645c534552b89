"""Bifurcation diagrams and Liouville foliations of the Kovalevskaya case on the so(4) / e(3) / so(3,1) pencil."""

from .algebra import OrbitParams, PencilParams, hamiltonian, integral_k, poisson_bivector
from .config import DEFAULT_TOL, KovatlasError, ToleranceConfig
from .critical import CriticalRecord, Family, PointType, rank0_enumerate
from .diagram import DiagramModel, build_diagram, parse_json, render_json, render_svg
from .regions import Region, classify, classify_any, thresholds
from .topology import AtomDelta, fiber_tori, image_cloud, kappa_limit_compare

__version__ = "0.1.0"

__all__ = [
    "AtomDelta", "CriticalRecord", "DEFAULT_TOL", "DiagramModel", "Family", "KovatlasError", "OrbitParams",
    "PencilParams", "PointType", "Region", "ToleranceConfig", "build_diagram", "classify", "classify_any",
    "fiber_tori", "hamiltonian", "image_cloud", "integral_k", "kappa_limit_compare", "parse_json",
    "poisson_bivector", "rank0_enumerate", "render_json", "render_svg", "thresholds",
]
