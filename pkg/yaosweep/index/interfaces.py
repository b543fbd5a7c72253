from __future__ import annotations

import math
from abc import ABCMeta, abstractmethod
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from yaosweep.constants import Backend
from yaosweep.exceptions import InstanceError
from yaosweep.geometry.core import SweepKey
from yaosweep.types import Coordinates, IndexArray, TransformedArray


@dataclass(frozen=True)
class TransformedPoint:
    """A point mapped by a pass matrix, x' = A x.

    Args:
        tcoords (tuple[float, ...]):
            Transformed coordinates.

        point_index (int):
            Index of the original point.

        key (SweepKey | None):
            Sweep key of the original point for the pass's sign vector.
    """

    tcoords: tuple[float, ...]
    point_index: int
    key: SweepKey | None = None

    def __post_init__(self) -> None:
        tcoords = tuple(float(c) for c in self.tcoords)
        if not all(math.isfinite(c) for c in tcoords):
            raise InstanceError(f"Transformed point {self.point_index} is not finite: {tcoords}.")
        if self.point_index < 0:
            raise InstanceError(f"Point index must be non-negative, got {self.point_index}.")
        object.__setattr__(self, "tcoords", tcoords)


class DominanceIndex(metaclass=ABCMeta):
    """Deletion-only store answering one-sided orthogonal range queries.

    `extract_dominating(q, eps)` reports every live record x' with
    x'_i >= q_i - eps for all i and deletes them in the same call.
    Records are addressed internally by row; `point_index` maps rows back
    to the original points.
    """

    def __init__(
        self,
        tcoords: TransformedArray,
        point_indices: IndexArray | None = None,
        keys: Sequence[SweepKey] | None = None,
    ) -> None:
        coords = np.asarray(tcoords, dtype=np.float64)
        if coords.size == 0:
            coords = coords.reshape(0, coords.shape[-1] if coords.ndim == 2 else 0)
        if coords.ndim != 2:
            raise InstanceError(f"Expected transformed coordinates of shape (n, d), got {coords.shape}.")
        if not np.isfinite(coords).all():
            raise InstanceError("Transformed coordinates must be finite.")

        n = coords.shape[0]
        if point_indices is None:
            point_indices = np.arange(n, dtype=np.int64)
        point_indices = np.asarray(point_indices, dtype=np.int64)
        if point_indices.shape != (n,):
            raise InstanceError(f"Got {point_indices.shape[0]} point indices for {n} records.")
        if keys is not None and len(keys) != n:
            raise InstanceError(f"Got {len(keys)} sweep keys for {n} records.")

        self._tcoords = coords
        self._point_indices = point_indices
        self._keys = keys
        self._live_count = n
        self._rows_by_point = np.argsort(point_indices, kind="stable")
        self._sorted_points = point_indices[self._rows_by_point]

    @classmethod
    def build(cls, points: Sequence[TransformedPoint]) -> DominanceIndex:
        """Build an index holding exactly `points`, all live.

        Raises:
            InstanceError: If the points do not share one dimension.
        """
        if not points:
            return cls(np.zeros((0, 0)))
        dims = {len(p.tcoords) for p in points}
        if len(dims) != 1:
            raise InstanceError(f"Transformed points have mixed dimensions {sorted(dims)}.")
        keys = [p.key for p in points]
        return cls(
            np.asarray([p.tcoords for p in points], dtype=np.float64),
            np.asarray([p.point_index for p in points], dtype=np.int64),
            None if any(k is None for k in keys) else keys,  # type: ignore[arg-type]
        )

    @property
    @abstractmethod
    def backend(self) -> Backend:
        """Backend tag."""
        pass

    @abstractmethod
    def _extract_rows(self, lower: Coordinates, exclude_row: int | None) -> IndexArray:
        """Delete and return the live rows with every coordinate >= `lower`.

        `exclude_row`, if given, is neither returned nor deleted.
        """
        pass

    @property
    def dim(self) -> int:
        return int(self._tcoords.shape[1])

    def __len__(self) -> int:
        return int(self._tcoords.shape[0])

    def live_count(self) -> int:
        """Number of records not yet extracted."""
        return self._live_count

    def _row_of(self, point_index: int | None) -> int | None:
        if point_index is None:
            return None
        pos = int(np.searchsorted(self._sorted_points, point_index))
        if pos < self._sorted_points.size and self._sorted_points[pos] == point_index:
            return int(self._rows_by_point[pos])
        return None

    def extract_rows(
        self, q: Sequence[float] | Coordinates, eps: float = 0.0, exclude: int | None = None
    ) -> IndexArray:
        """Row-level form of `extract_dominating`, used by the sweep."""
        if len(self) == 0:
            return np.zeros(0, dtype=np.int64)
        query = np.asarray(q, dtype=np.float64)
        if query.shape != (self.dim,):
            raise InstanceError(f"Query of shape {query.shape} for an index of dimension {self.dim}.")
        if np.isnan(query).any():
            raise InstanceError("Query coordinates must not be NaN.")
        rows = self._extract_rows(query - eps, self._row_of(exclude))
        self._live_count -= int(rows.size)
        return rows

    def extract_dominating(
        self, q: Sequence[float] | Coordinates, eps: float = 0.0, exclude: int | None = None
    ) -> list[TransformedPoint]:
        """Report and delete every live record dominating `q` within `eps`.

        Args:
            q (Sequence[float]):
                Query corner. Coordinates may be -inf.

            eps (float, optional):
                Inclusive tolerance: x'_i >= q_i - eps.

            exclude (int | None, optional):
                Point index of a record that is neither reported nor deleted.

        Returns:
            list[TransformedPoint]: The extracted records, in no particular order.
        """
        return self.records(self.extract_rows(q, eps, exclude))

    def point_indices(self, rows: IndexArray) -> IndexArray:
        """Original point indices of `rows`."""
        return self._point_indices[rows]

    def records(self, rows: IndexArray) -> list[TransformedPoint]:
        """Materialize `rows` as `TransformedPoint` values."""
        return [
            TransformedPoint(
                tcoords=tuple(self._tcoords[row].tolist()),
                point_index=int(self._point_indices[row]),
                key=self._keys[row] if self._keys is not None else None,
            )
            for row in rows.tolist()
        ]
