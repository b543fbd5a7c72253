from yaosweep.geometry.core import (
    Point,
    SignVector,
    SweepKey,
    as_coordinate_array,
    coordinate_scale,
    distance_key_identity_check,
    in_closed_orthant,
    l1_distance,
    l1_distances,
    sweep_key,
    sweep_keys,
    sweep_order,
)

__all__ = [
    "Point",
    "SignVector",
    "SweepKey",
    "as_coordinate_array",
    "coordinate_scale",
    "distance_key_identity_check",
    "in_closed_orthant",
    "l1_distance",
    "l1_distances",
    "sweep_key",
    "sweep_keys",
    "sweep_order",
]
