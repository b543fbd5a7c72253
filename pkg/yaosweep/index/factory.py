from __future__ import annotations

from typing import Sequence

from yaosweep.constants import Backend
from yaosweep.exceptions import ConfigurationError
from yaosweep.geometry.core import SweepKey
from yaosweep.index.interfaces import DominanceIndex, TransformedPoint
from yaosweep.index.range_tree import RangeTreeIndex
from yaosweep.index.reference import ReferenceIndex
from yaosweep.types import IndexArray, TransformedArray

INDEX_BACKENDS: dict[Backend, type[DominanceIndex]] = {
    Backend.tree: RangeTreeIndex,
    Backend.reference: ReferenceIndex,
}


def index_class(backend: Backend | str) -> type[DominanceIndex]:
    """Resolve a backend tag to its index class."""
    try:
        return INDEX_BACKENDS[Backend(backend)]
    except (KeyError, ValueError) as e:
        raise ConfigurationError(
            f"No dominance index for backend '{backend}'. Use one of {[b.value for b in INDEX_BACKENDS]}."
        ) from e


def build(points: Sequence[TransformedPoint], backend: Backend | str = Backend.tree) -> DominanceIndex:
    """Build a dominance index over `points` with the chosen backend."""
    return index_class(backend).build(points)


def build_from_arrays(
    tcoords: TransformedArray,
    backend: Backend | str = Backend.tree,
    point_indices: IndexArray | None = None,
    keys: Sequence[SweepKey] | None = None,
) -> DominanceIndex:
    """Array form of `build`, avoiding per-point objects."""
    return index_class(backend)(tcoords, point_indices, keys)
