from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from yaosweep.exceptions import ContractError
from yaosweep.geometry.core import Point
from yaosweep.mst import DisjointSetUnion, kruskal, prim_dense_oracle
from yaosweep.sweep.builder import CandidateEdge


def _exhaustive_minimum(n: int, edges: list[CandidateEdge]) -> float:
    """Cheapest set of n - 1 edges that connects all vertices."""
    best = math.inf
    for subset in itertools.combinations(edges, n - 1):
        dsu = DisjointSetUnion(n)
        if all(dsu.union(e.u, e.v) for e in subset):
            best = min(best, math.fsum(e.weight for e in subset))
    return best


def test_disjoint_set_union() -> None:
    """Unions merge components once; find is consistent."""
    dsu = DisjointSetUnion(5)
    assert dsu.components == 5
    assert dsu.union(0, 1)
    assert dsu.union(3, 4)
    assert not dsu.union(1, 0)
    assert dsu.find(0) == dsu.find(1)
    assert dsu.find(2) != dsu.find(3)
    assert dsu.union(1, 4)
    assert dsu.components == 2


def test_kruskal_single_vertex() -> None:
    """A lone vertex is a tree of weight zero."""
    result = kruskal(1, [])
    assert result.total_weight == 0
    assert result.components == 1
    assert result.edges == ()


def test_kruskal_empty_graph() -> None:
    """No vertices, no components."""
    assert kruskal(0, []).components == 0


def test_kruskal_triangle() -> None:
    """The heaviest edge of the triangle is dropped."""
    edges = [CandidateEdge(0, 1, 1.0), CandidateEdge(1, 2, 2.0), CandidateEdge(0, 2, 1.0)]
    result = kruskal(3, edges)
    assert result.total_weight == 2.0
    assert result.is_spanning_tree
    assert {e.pair for e in result.edges} == {(0, 1), (0, 2)}


def test_kruskal_is_order_independent() -> None:
    """Ties are broken by endpoints, so shuffling the input changes nothing."""
    edges = [CandidateEdge(0, 1, 1.0), CandidateEdge(2, 1, 1.0), CandidateEdge(0, 2, 1.0), CandidateEdge(2, 3, 0.5)]
    expected = kruskal(4, edges)
    for permutation in itertools.permutations(edges):
        assert kruskal(4, list(permutation)) == expected


def test_kruskal_forest() -> None:
    """A disconnected graph gives a forest with several components."""
    result = kruskal(4, [CandidateEdge(0, 1, 3.0)])
    assert result.components == 3
    assert not result.is_spanning_tree
    assert result.total_weight == 3.0


def test_kruskal_rejects_foreign_endpoints() -> None:
    """Endpoints must be vertices of the graph."""
    with pytest.raises(ContractError):
        kruskal(2, [CandidateEdge(0, 2, 1.0)])


@pytest.mark.parametrize("seed", range(20))
def test_kruskal_matches_exhaustive_search(seed: int) -> None:
    """On small random graphs Kruskal finds the cheapest spanning tree."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = [pairs[i] for i in rng.permutation(len(pairs))[: int(rng.integers(n - 1, len(pairs) + 1))]]
    # a path keeps the graph connected
    chosen = sorted(set(chosen) | {(i, i + 1) for i in range(n - 1)})
    edges = [CandidateEdge(u, v, float(rng.integers(0, 10))) for u, v in chosen]
    assert kruskal(n, edges).total_weight == _exhaustive_minimum(n, edges)


def test_oracle_examples() -> None:
    """Triangle, unit square and a collinear set."""
    assert prim_dense_oracle([Point((0, 0)), Point((1, 0)), Point((0, 1))]).total_weight == 2
    square = [Point((0, 0)), Point((1, 0)), Point((0, 1)), Point((1, 1))]
    assert prim_dense_oracle(square).total_weight == 3
    result = prim_dense_oracle([Point((0, 0)), Point((2, 0)), Point((5, 0))])
    assert result.total_weight == 5
    assert {e.pair for e in result.edges} == {(0, 1), (1, 2)}


def test_oracle_tiny_inputs() -> None:
    """Fewer than two points give an empty tree."""
    assert prim_dense_oracle([]).components == 0
    single = prim_dense_oracle(np.array([[4.0, 2.0]]))
    assert single.total_weight == 0
    assert single.components == 1


def test_oracle_matches_kruskal_on_the_complete_graph(rng: np.random.Generator) -> None:
    """Prim and Kruskal agree on the complete l1 graph."""
    coords = rng.integers(-100, 101, size=(30, 3)).astype(np.float64)
    edges = [
        CandidateEdge(u, v, float(np.abs(coords[u] - coords[v]).sum()))
        for u, v in itertools.combinations(range(30), 2)
    ]
    assert kruskal(30, edges).total_weight == prim_dense_oracle(coords).total_weight
