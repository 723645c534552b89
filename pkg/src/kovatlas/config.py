"""Shared tolerances and exception types."""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class ToleranceConfig:
    eq_tol: float = 1e-10
    casimir_tol: float = 1e-12
    flow_tol: float = 1e-8
    # relative width of the band around a threshold that is reported as a boundary
    boundary_tol: float = 1e-12
    # eigenvalues below zero_tol * ||A|| are treated as zero
    zero_tol: float = 1e-7
    membership_tol: float = 1e-9

    def with_overrides(self, **kw) -> "ToleranceConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw)


DEFAULT_TOL = ToleranceConfig()


class KovatlasError(Exception):
    """Base class for all errors raised by the package."""


class SingularOrbit(KovatlasError):
    pass


class EmptyOrbit(KovatlasError):
    pass


class StepDiverged(KovatlasError):
    pass


class ZeroParameter(KovatlasError):
    pass


class ComplexDiscriminant(KovatlasError):
    pass


class BoundaryCase(KovatlasError):
    pass


class FamilyMismatch(KovatlasError):
    pass


class NotCritical(KovatlasError):
    pass


class InsufficientSamples(KovatlasError):
    pass


class InvalidParameters(KovatlasError):
    pass
