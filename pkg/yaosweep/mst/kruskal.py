from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from yaosweep.__init__ import console
from yaosweep.exceptions import ContractError
from yaosweep.sweep.builder import CandidateEdge
from yaosweep.utils.colorlogging import ColorLog

logger = ColorLog(console, __name__).logger


class DisjointSetUnion:
    """Union by rank with path halving over `n` vertex slots."""

    def __init__(self, n: int) -> None:
        self.parent = list(range(n))
        self.rank = [0] * n
        self.components = n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        """Merge the sets of `a` and `b`. Returns False if they were already joined."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        self.components -= 1
        return True


@dataclass(frozen=True)
class MstResult:
    """A minimum spanning forest.

    Args:
        edges (tuple[CandidateEdge, ...]):
            Forest edges in the order they were accepted.

        total_weight (float):
            Exact sum of the edge weights.

        components (int):
            Number of trees in the forest.
    """

    edges: tuple[CandidateEdge, ...]
    total_weight: float
    components: int

    @property
    def is_spanning_tree(self) -> bool:
        return self.components <= 1


def _edge_order(edge: CandidateEdge) -> tuple[float, int, int]:
    low, high = edge.pair
    return edge.weight, low, high


def kruskal(n: int, edges: Sequence[CandidateEdge]) -> MstResult:
    """Minimum spanning forest of a sparse graph over vertices [0, n).

    Edges are taken in (weight, min endpoint, max endpoint) order, so the
    result only depends on the edge set.

    Raises:
        ContractError: If an endpoint is outside [0, n).
    """
    for edge in edges:
        if not (0 <= edge.u < n and 0 <= edge.v < n):
            raise ContractError(f"Edge ({edge.u}, {edge.v}) has an endpoint outside [0, {n}).")

    dsu = DisjointSetUnion(n)
    accepted: list[CandidateEdge] = []
    for edge in sorted(edges, key=_edge_order):
        if dsu.union(edge.u, edge.v):
            accepted.append(edge)
            if dsu.components == 1:
                break

    total = math.fsum(edge.weight for edge in accepted)
    if n and dsu.components > 1:
        logger.warning(f"Graph on {n} vertices is disconnected: {dsu.components} components.")
    return MstResult(edges=tuple(accepted), total_weight=total, components=dsu.components if n else 0)
