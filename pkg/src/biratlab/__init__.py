"""Exact-arithmetic birational geometry of rational surfaces.

Picard lattices with intersection theory, K-negative ray enumeration and
the surface minimal model program, plane Cremona maps and their
factorization into quadratic transformations, log canonical thresholds of
plane curve germs, and closed-form classification bounds.  Everything is
computed over arbitrary-precision integers and rationals.
"""

from .errors import BiratlabError
from .lattice import (
    Ampleness,
    AmplenessReport,
    DivisorClass,
    SurfaceModel,
    canonical_class,
    genus_of_class,
    intersect,
    is_ample,
    self_intersection,
)
from .mmp import (
    ContractionKind,
    ExtremalRay,
    MMPTrace,
    Strategy,
    contract_ray,
    effective_generators,
    enumerate_extremal_rays,
    enumerate_fibration_classes,
    enumerate_minus_one_classes,
    run_mmp,
)

__version__ = "0.1.0"

__all__ = [
    "Ampleness",
    "AmplenessReport",
    "BiratlabError",
    "ContractionKind",
    "DivisorClass",
    "ExtremalRay",
    "MMPTrace",
    "Strategy",
    "SurfaceModel",
    "canonical_class",
    "contract_ray",
    "effective_generators",
    "enumerate_extremal_rays",
    "enumerate_fibration_classes",
    "enumerate_minus_one_classes",
    "genus_of_class",
    "intersect",
    "is_ample",
    "run_mmp",
    "self_intersection",
    "__version__",
]
