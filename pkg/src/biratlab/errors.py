"""Domain error taxonomy.

Every error raised on bad mathematical input derives from ``BiratlabError``
and carries a machine-readable ``code`` plus a ``details`` dict; the CLI
turns these into structured reports on stderr with exit status 1.
Malformed input (bad JSON, unparsable polynomials) is deliberately *not*
in this hierarchy and exits with status 2.
"""

from __future__ import annotations

from typing import Any


class BiratlabError(Exception):
    """Base class for domain errors."""

    code = "DomainError"

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.details = details

    def report(self) -> dict:
        return {"error": self.code, "message": str(self), "details": self.details}


class InvalidClass(BiratlabError):
    """Divisor class incompatible with the owning lattice model."""

    code = "InvalidClass"


class UnsupportedCone(BiratlabError):
    """Cone enumeration requested outside the supported regime."""

    code = "UnsupportedCone"


class NotNef(BiratlabError):
    """A nef divisor class was required."""

    code = "NotNef"


class NotBirational(BiratlabError):
    """Attempt to contract a fiber-type ray."""

    code = "NotBirational"


class InvalidRay(BiratlabError):
    """Ray is not in the extremal enumeration of the model."""

    code = "InvalidRay"


class NotHomaloidal(BiratlabError):
    """Degree/multiplicity data violates a Noether identity."""

    code = "NotHomaloidal"


class AlreadyLinear(BiratlabError):
    """Operation needs degree at least 2."""

    code = "AlreadyLinear"


class NoUntwist(BiratlabError):
    """Chosen multiplicities do not exceed the degree."""

    code = "NoUntwist"


class DegenerateComposition(BiratlabError):
    """Composition of maps collapsed to the zero triple."""

    code = "DegenerateComposition"


class BadCluster(BiratlabError):
    """Cluster data violates proximity or multiplicity constraints."""

    code = "BadCluster"


class PositionFailure(BiratlabError):
    """Base points in special position; refusing to guess."""

    code = "PositionFailure"


class Inconclusive(BiratlabError):
    """Randomized check could not find usable sample points."""

    code = "Inconclusive"


class NotIsolated(BiratlabError):
    """Curve germ is non-reduced at the origin."""

    code = "NotIsolated"


class DepthExceeded(BiratlabError):
    """Resolution recursion exceeded the configured depth."""

    code = "DepthExceeded"


class NotMinimalDegree(BiratlabError):
    """Polarized data does not match any minimal-degree case."""

    code = "NotMinimalDegree"


class OutOfRegime(BiratlabError):
    """Numeric bound evaluated outside its regime of validity."""

    code = "OutOfRegime"


class NonIntegralGenus(BiratlabError):
    """Degree parity makes the genus non-integral."""

    code = "NonIntegralGenus"
