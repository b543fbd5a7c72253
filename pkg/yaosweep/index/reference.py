from __future__ import annotations

from typing import Sequence

import numpy as np

from yaosweep.constants import Backend
from yaosweep.geometry.core import SweepKey
from yaosweep.index.interfaces import DominanceIndex
from yaosweep.types import Coordinates, IndexArray, TransformedArray


class ReferenceIndex(DominanceIndex):
    """Linear-scan dominance index over a live mask."""

    def __init__(
        self,
        tcoords: TransformedArray,
        point_indices: IndexArray | None = None,
        keys: Sequence[SweepKey] | None = None,
    ) -> None:
        super().__init__(tcoords, point_indices, keys)
        self._live = np.ones(len(self), dtype=bool)

    @property
    def backend(self) -> Backend:
        return Backend.reference

    def _extract_rows(self, lower: Coordinates, exclude_row: int | None) -> IndexArray:
        hit = self._live & np.all(self._tcoords >= lower[None, :], axis=1)
        if exclude_row is not None:
            hit[exclude_row] = False
        self._live &= ~hit
        return np.flatnonzero(hit)
