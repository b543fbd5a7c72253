from yaosweep.cones.family import (
    Cone,
    ConeFamily,
    angle_threshold,
    build_family,
    contains,
    octant_family_2d,
)
from yaosweep.cones.validation import (
    CoverageReport,
    FamilyProximityReport,
    ProximityReport,
    validate_coverage,
    validate_family_proximity,
    validate_proximity,
)

__all__ = [
    "Cone",
    "ConeFamily",
    "CoverageReport",
    "FamilyProximityReport",
    "ProximityReport",
    "angle_threshold",
    "build_family",
    "contains",
    "octant_family_2d",
    "validate_coverage",
    "validate_family_proximity",
    "validate_proximity",
]
