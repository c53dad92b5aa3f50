"""Counting unmixed ramification structures and Hurwitz components for
finite groups: group families, spherical systems, braid/Aut orbit counts,
PSL(2,p) trace closed forms, the abelian classification, and exact surface
invariants."""

from .groups import (
    AutUnavailableError,
    ConjClass,
    ForeignElementError,
    GroupError,
    GroupHandle,
    GroupSpec,
    InvalidSpecError,
    UnsupportedSizeError,
    make_group,
    registry,
)
from .spherical import (
    RamificationStructure,
    SphericalSystem,
    are_disjoint,
    enumerate_systems,
    exists_unmixed_structure,
    is_hyperbolic,
    is_spherical_system,
    sigma_set,
)
from .braid import (
    OrbitReport,
    braid_move,
    braid_orbit,
    class_tuple_lower_bound,
    choose_almost_homogeneous_classes,
    count_d,
    count_h,
)
from .invariants import (
    NonRealizableError,
    SurfaceInvariants,
    surface_invariants,
)

__version__ = "0.1.0"

__all__ = [
    "AutUnavailableError",
    "ConjClass",
    "ForeignElementError",
    "GroupError",
    "GroupHandle",
    "GroupSpec",
    "InvalidSpecError",
    "NonRealizableError",
    "OrbitReport",
    "RamificationStructure",
    "SphericalSystem",
    "SurfaceInvariants",
    "UnsupportedSizeError",
    "are_disjoint",
    "braid_move",
    "braid_orbit",
    "class_tuple_lower_bound",
    "choose_almost_homogeneous_classes",
    "count_d",
    "count_h",
    "enumerate_systems",
    "exists_unmixed_structure",
    "is_hyperbolic",
    "is_spherical_system",
    "make_group",
    "registry",
    "sigma_set",
    "surface_invariants",
    "__version__",
]
