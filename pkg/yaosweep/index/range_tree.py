from __future__ import annotations

from bisect import bisect_left
from typing import Sequence

import numpy as np

from yaosweep.constants import RANGE_TREE_LEAF_SIZE, Backend
from yaosweep.exceptions import ConfigurationError
from yaosweep.geometry.core import SweepKey
from yaosweep.index.interfaces import DominanceIndex
from yaosweep.types import Coordinates, IndexArray, TransformedArray


class _LastLayer:
    """Rows sorted by the last coordinate with a path-compressed next-live pointer.

    `nxt[i] == i` marks a slot that may still be live; dead slots point
    forward. Slot `len(rows)` is a sentinel.
    """

    __slots__ = ("keys", "rows", "nxt")

    def __init__(self, rows: np.ndarray, keys: np.ndarray) -> None:
        self.rows: list[int] = rows.tolist()
        self.keys: list[float] = keys.tolist()
        self.nxt: list[int] = list(range(len(self.rows) + 1))

    def _find(self, i: int) -> int:
        nxt = self.nxt
        root = i
        while nxt[root] != root:
            root = nxt[root]
        while nxt[i] != root:
            nxt[i], i = root, nxt[i]
        return root

    def query(self, lower: float, alive: np.ndarray, exclude_row: int, out: list[int]) -> None:
        end = len(self.rows)
        i = self._find(bisect_left(self.keys, lower))
        while i < end:
            row = self.rows[i]
            if row == exclude_row and alive[row]:
                i = self._find(i + 1)
                continue
            if alive[row]:
                alive[row] = False
                out.append(row)
            self.nxt[i] = i + 1
            i = self._find(i + 1)


class _Node:
    __slots__ = ("size", "live", "split_rank", "left", "right", "inner", "rows")

    def __init__(self, size: int) -> None:
        self.size = size
        self.live = size
        self.split_rank = -1
        self.left: _Node | None = None
        self.right: _Node | None = None
        self.inner: _Layer | _LastLayer | None = None
        # only set on buckets
        self.rows: np.ndarray | None = None


class _Layer:
    __slots__ = ("dim", "keys", "root")

    def __init__(self, dim: int, keys: list[float], root: _Node) -> None:
        self.dim = dim
        self.keys = keys
        self.root = root


class RangeTreeIndex(DominanceIndex):
    """Layered range tree for dominance queries with batch deletion.

    Layer j is a balanced tree over rows ordered by coordinate j; every
    internal node carries the layer j + 1 structure over its rows, and the
    last coordinate is a sorted array walked through next-live pointers.
    Nodes with at most `leaf_size` rows are scanned directly. Each node
    counts its live rows so that exhausted subtrees are skipped.

    Ties on a coordinate are broken by row, so every layer orders its rows
    by a global rank per coordinate and deletions can be routed by rank.
    """

    def __init__(
        self,
        tcoords: TransformedArray,
        point_indices: IndexArray | None = None,
        keys: Sequence[SweepKey] | None = None,
        leaf_size: int = RANGE_TREE_LEAF_SIZE,
    ) -> None:
        super().__init__(tcoords, point_indices, keys)
        if leaf_size < 1:
            raise ConfigurationError(f"Range tree leaf size must be positive, got {leaf_size}.")
        self._leaf_size = leaf_size
        n, d = self._tcoords.shape
        self._alive = np.ones(n, dtype=bool)

        rows = np.arange(n, dtype=np.int64)
        self._rank = np.empty((d, n), dtype=np.int64)
        for j in range(d):
            self._rank[j, np.lexsort((rows, self._tcoords[:, j]))] = rows

        self._top: _Layer | _LastLayer | None = self._build_layer(rows, 0) if n else None

    @property
    def backend(self) -> Backend:
        return Backend.tree

    def _build_layer(self, rows: np.ndarray, dim: int) -> _Layer | _LastLayer:
        rows = rows[np.argsort(self._rank[dim, rows], kind="stable")]
        keys = self._tcoords[rows, dim]
        if dim == self.dim - 1:
            return _LastLayer(rows, keys)
        return _Layer(dim, keys.tolist(), self._build_node(rows, dim))

    def _build_node(self, rows: np.ndarray, dim: int) -> _Node:
        node = _Node(int(rows.size))
        if rows.size <= self._leaf_size:
            node.rows = rows
            return node
        mid = rows.size // 2
        node.inner = self._build_layer(rows, dim + 1)
        node.split_rank = int(self._rank[dim, rows[mid - 1]])
        node.left = self._build_node(rows[:mid], dim)
        node.right = self._build_node(rows[mid:], dim)
        return node

    def _query_layer(
        self, layer: _Layer | _LastLayer, lower: Coordinates, exclude_row: int, out: list
    ) -> None:
        if isinstance(layer, _LastLayer):
            layer.query(float(lower[-1]), self._alive, exclude_row, out)
            return
        pos = bisect_left(layer.keys, float(lower[layer.dim]))
        self._query_node(layer.root, pos, lower, exclude_row, out)

    def _query_node(self, node: _Node, pos: int, lower: Coordinates, exclude_row: int, out: list) -> None:
        if node.live == 0 or pos >= node.size:
            return
        if node.rows is not None:
            candidates = node.rows[pos:]
            hit = self._alive[candidates] & np.all(self._tcoords[candidates] >= lower[None, :], axis=1)
            hit &= candidates != exclude_row
            rows = candidates[hit]
            if rows.size:
                self._alive[rows] = False
                out.append(rows)
            return
        if pos == 0:
            assert node.inner is not None
            self._query_layer(node.inner, lower, exclude_row, out)
            return
        assert node.left is not None and node.right is not None
        if pos < node.left.size:
            self._query_node(node.left, pos, lower, exclude_row, out)
            self._query_node(node.right, 0, lower, exclude_row, out)
        else:
            self._query_node(node.right, pos - node.left.size, lower, exclude_row, out)

    def _remove(self, node: _Node, rows: np.ndarray, dim: int) -> None:
        """Decrement live counters along the paths of `rows`, sorted by rank in `dim`."""
        node.live -= int(rows.size)
        if node.rows is not None:
            return
        if isinstance(node.inner, _Layer):
            inner_rows = rows[np.argsort(self._rank[dim + 1, rows], kind="stable")]
            self._remove(node.inner.root, inner_rows, dim + 1)
        assert node.left is not None and node.right is not None
        split = int(np.searchsorted(self._rank[dim, rows], node.split_rank, side="right"))
        if split:
            self._remove(node.left, rows[:split], dim)
        if split < rows.size:
            self._remove(node.right, rows[split:], dim)

    def _extract_rows(self, lower: Coordinates, exclude_row: int | None) -> IndexArray:
        if self._top is None:
            return np.zeros(0, dtype=np.int64)
        found: list = []
        self._query_layer(self._top, lower, -1 if exclude_row is None else exclude_row, found)

        # _LastLayer appends ints, buckets append arrays
        scalars = [r for r in found if not isinstance(r, np.ndarray)]
        arrays = [r for r in found if isinstance(r, np.ndarray)]
        rows = np.concatenate([np.asarray(scalars, dtype=np.int64), *arrays]) if found else np.zeros(0, np.int64)

        if rows.size and isinstance(self._top, _Layer):
            self._remove(self._top.root, rows[np.argsort(self._rank[0, rows], kind="stable")], 0)
        return rows
