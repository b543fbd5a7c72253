from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from yaosweep.geometry.core import Point, as_coordinate_array
from yaosweep.mst.kruskal import MstResult
from yaosweep.sweep.builder import CandidateEdge
from yaosweep.types import PointArray


def prim_dense_oracle(points: Sequence[Point] | PointArray) -> MstResult:
    """Exact MST of the complete l1 graph with array-based Prim, O(n^2).

    Ground truth for the candidate-graph pipeline; no heap, one distance row per step.
    """
    coords = as_coordinate_array(points)
    n = coords.shape[0]
    if n < 2:
        return MstResult(edges=(), total_weight=0.0, components=1 if n else 0)

    in_tree = np.zeros(n, dtype=bool)
    best = np.full(n, np.inf)
    parent = np.full(n, -1, dtype=np.int64)
    best[0] = 0.0
    edges: list[CandidateEdge] = []

    for _ in range(n):
        current = int(np.argmin(np.where(in_tree, np.inf, best)))
        in_tree[current] = True
        if parent[current] >= 0:
            edges.append(CandidateEdge(int(parent[current]), current, float(best[current])))
        distances = np.abs(coords - coords[current][None, :]).sum(axis=1)
        closer = ~in_tree & (distances < best)
        best[closer] = distances[closer]
        parent[closer] = current

    return MstResult(edges=tuple(edges), total_weight=math.fsum(e.weight for e in edges), components=1)
