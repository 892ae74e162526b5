"""Exception hierarchy shared across the package."""

from shockstab.quadrature import QuadratureError


class ConfigurationError(ValueError):
    """A flux/entropy pair or state box violates a structural assumption."""


class InputError(ValueError):
    """Malformed or inconsistent user input."""


class HypothesisViolation(InputError):
    """Scenario data violates a theorem hypothesis (e.g. ``C_L <= C_R``)."""


class CertificationError(RuntimeError):
    """A checked inequality failed beyond its tolerance."""


class ResourceError(RuntimeError):
    """An integration loop exceeded its event budget."""


class InternalError(RuntimeError):
    """Inconsistent internal state (a bug, not bad input)."""


__all__ = [
    "CertificationError",
    "ConfigurationError",
    "HypothesisViolation",
    "InputError",
    "InternalError",
    "QuadratureError",
    "ResourceError",
]
