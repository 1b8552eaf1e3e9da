"""Typed exceptions shared across the package.

Domain errors (bad inputs, out-of-domain evaluation points) map to CLI exit
code 2, resource errors (budget exhausted before the certified bound was
reached) to exit code 3.
"""

from __future__ import annotations

__all__ = [
    "HeatzetaError",
    "DomainError",
    "BackendMismatchError",
    "NonGeometricGridError",
    "GammaPoleError",
    "PoleProximityError",
    "UnknownModelError",
    "UnknownObservableError",
    "NoClosedFormError",
    "MissingZetaValueError",
    "ResourceBudgetError",
]


class HeatzetaError(Exception):
    """Base class for every error raised by this package on purpose."""


class DomainError(HeatzetaError, ValueError):
    """Invalid argument or evaluation outside the contracted domain."""


class BackendMismatchError(DomainError):
    """Arithmetic attempted between rational-backend and float-backend series."""


class NonGeometricGridError(DomainError):
    """Sample abscissae do not form a geometric grid t0 * rho**j."""


class GammaPoleError(DomainError):
    """Gamma evaluated at a nonpositive integer."""


class PoleProximityError(DomainError):
    """Zeta continuation requested too close to a pole of the function."""


class UnknownModelError(DomainError, KeyError):
    """Model name not in the builtin registry."""


class UnknownObservableError(DomainError, KeyError):
    """Observable name not in the registry."""


class NoClosedFormError(DomainError, LookupError):
    """No closed-form expansion is registered for the requested triple."""


class MissingZetaValueError(DomainError):
    """Gaussian-to-exponential conversion needs zeta values it was not given.

    Carries the list of required evaluation points in ``points``.
    """

    def __init__(self, points):
        self.points = list(points)
        super().__init__(
            "zeta evaluator required for odd negative integer points: "
            + ", ".join(str(p) for p in self.points)
        )


class ResourceBudgetError(HeatzetaError, RuntimeError):
    """A certified computation hit its level/size budget.

    ``achieved_bound`` reports the best error bound reachable within the
    budget so callers can decide whether the partial answer is usable.
    """

    def __init__(self, message: str, achieved_bound: float):
        self.achieved_bound = float(achieved_bound)
        super().__init__(f"{message} (achieved error bound {achieved_bound:.3e})")
