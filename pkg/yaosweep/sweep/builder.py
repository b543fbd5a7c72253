from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Callable, Sequence

import numpy as np
from tqdm import tqdm

from yaosweep.__init__ import console
from yaosweep.cones.family import ConeFamily
from yaosweep.constants import RELATIVE_EPS, Backend
from yaosweep.exceptions import ConfigurationError, ContractError, InstanceError
from yaosweep.geometry.core import Point, SignVector, SweepKey, as_coordinate_array, coordinate_scale, sweep_order
from yaosweep.index.factory import build_from_arrays
from yaosweep.index.interfaces import TransformedPoint
from yaosweep.sweep.batched import anchored, lockstep_sweep, pass_eps
from yaosweep.types import ConeMatrix, IndexArray, PointArray
from yaosweep.utils.colorlogging import ColorLog

logger = ColorLog(console, __name__).logger

EdgeArrays = tuple[IndexArray, IndexArray, np.ndarray]


@dataclass(frozen=True)
class CandidateEdge:
    """An edge of the candidate graph.

    Args:
        u (int):
            Sweep point the edge was emitted for.

        v (int):
            Its partner.

        weight (float):
            l1 distance between the two points.
    """

    u: int
    v: int
    weight: float

    def __post_init__(self) -> None:
        if self.u == self.v:
            raise ContractError(f"Self-loop on point {self.u}.")
        if not self.weight >= 0:
            raise ContractError(f"Edge ({self.u}, {self.v}) has negative weight {self.weight}.")

    @property
    def pair(self) -> tuple[int, int]:
        """Endpoints as an ordered (min, max) pair."""
        return (self.u, self.v) if self.u < self.v else (self.v, self.u)


@dataclass(frozen=True, eq=False)
class PassConfig:
    """One sweep pass: points ordered by `alpha`, queried with cone (-alpha, ordinal).

    Args:
        alpha (SignVector):
            Sweep direction.

        ordinal (int):
            Cone index within the orthant.

        matrix (numpy.ndarray[d, d]):
            Membership matrix of the backward cone (-alpha, ordinal).
    """

    alpha: SignVector
    ordinal: int
    matrix: ConeMatrix

    @classmethod
    def from_family(cls, family: ConeFamily, alpha: SignVector, ordinal: int) -> PassConfig:
        """Pass for (alpha, ordinal), with the backward cone taken from `family`."""
        return cls(alpha=alpha, ordinal=ordinal, matrix=family.cone(-alpha, ordinal).matrix)

    @classmethod
    def all_passes(cls, family: ConeFamily) -> list[PassConfig]:
        """All 2^d * k_d passes in (alpha, ordinal) order."""
        passes = []
        for alpha in SignVector.all(family.d):
            matrices = family.matrices(-alpha)
            passes.extend(cls(alpha=alpha, ordinal=i, matrix=matrices[i]) for i in range(len(matrices)))
        return passes


def _order_and_rank(coords: PointArray, alpha: SignVector) -> tuple[IndexArray, IndexArray]:
    order = sweep_order(anchored(coords), alpha)
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    return order, rank


def _check_nearest(coords: PointArray, s: int, rows: IndexArray, chosen: int) -> None:
    distances = np.abs(coords[rows] - coords[s][None, :]).sum(axis=1)
    chosen_distance = np.abs(coords[chosen] - coords[s]).sum()
    tolerance = RELATIVE_EPS * coords.shape[1] * coordinate_scale(np.concatenate([coords[rows], coords[s][None]]))
    assert chosen_distance <= distances.min() + tolerance, (
        f"Highest-key extracted point {chosen} is {chosen_distance} from {s}, nearest is {distances.min()}."
    )


def _pass_edges(coords: PointArray, cfg: PassConfig, backend: Backend) -> tuple[IndexArray, IndexArray]:
    """Edge endpoints (s, s'') emitted by one pass."""
    coords = anchored(coords)
    order, rank = _order_and_rank(coords, cfg.alpha)
    transformed = coords @ np.asarray(cfg.matrix).T
    eps = float(pass_eps(transformed))
    index = build_from_arrays(transformed, backend)

    sources: list[int] = []
    targets: list[int] = []
    for s in order.tolist():
        rows = index.extract_rows(transformed[s], eps, exclude=s)
        if rows.size == 0:
            continue
        chosen = int(rows[np.argmax(rank[rows])])
        if __debug__:
            _check_nearest(coords, s, rows, chosen)
        sources.append(s)
        targets.append(chosen)
    return np.asarray(sources, dtype=np.int64), np.asarray(targets, dtype=np.int64)


def _orthant_edges(coords: PointArray, family: ConeFamily, alpha: SignVector) -> tuple[IndexArray, IndexArray]:
    """Edge endpoints of all k_d passes for `alpha`, swept in lockstep."""
    order, rank = _order_and_rank(coords, alpha)
    return lockstep_sweep(coords, family.matrices(-alpha), order, rank)


def _validated_coordinates(points: Sequence[Point] | PointArray, family: ConeFamily) -> PointArray:
    coords = as_coordinate_array(points)
    if coords.shape[0] and coords.shape[1] != family.d:
        raise InstanceError(f"Points have dimension {coords.shape[1]}, the cone family has {family.d}.")
    return coords


def run_pass(
    points: Sequence[Point] | PointArray,
    cfg: PassConfig,
    family: ConeFamily,
    backend: Backend | str = Backend.tree,
) -> list[CandidateEdge]:
    """Sweep the points once in `cfg.alpha` order and connect each point to its backward partner.

    Points are mapped by the matrix of cone (-alpha, i). For each s in
    ascending sweep order, the live points dominating s' are extracted
    (s itself stays live) and s is joined to the extracted point with the
    highest sweep rank, which is also the nearest one.

    Args:
        points (Sequence[Point] | numpy.ndarray[n, d]):
            Distinct points. Edge endpoints are positions in this sequence.

        cfg (PassConfig):
            The pass.

        family (ConeFamily):
            Family the pass belongs to.

        backend (Backend, optional):
            Dominance index backend, `tree` or `reference`.

    Returns:
        list[CandidateEdge]: At most n edges, in sweep order of their source.
    """
    coords = _validated_coordinates(points, family)
    if not 0 <= cfg.ordinal < family.cones_per_orthant:
        raise ConfigurationError(f"Pass ordinal {cfg.ordinal} outside [0, {family.cones_per_orthant}).")
    if coords.shape[0] < 2:
        return []
    if Backend(backend) == Backend.batched:
        order, rank = _order_and_rank(coords, cfg.alpha)
        sources, targets = lockstep_sweep(coords, np.asarray(cfg.matrix)[None], order, rank)
    else:
        sources, targets = _pass_edges(coords, cfg, Backend(backend))
    weights = np.abs(coords[sources] - coords[targets]).sum(axis=1)
    return [CandidateEdge(int(u), int(v), float(w)) for u, v, w in zip(sources, targets, weights)]


def nearest_in_extracted(s: Point, extracted: Sequence[TransformedPoint]) -> int:
    """Point index of the extracted record with the largest sweep key.

    Every extracted record lies in the backward orthant of `s`, where the
    l1 distance to `s` equals the key difference, so the largest key is the
    nearest point.

    Raises:
        ContractError: If `extracted` is empty or a record carries no sweep key.
    """
    if not extracted:
        raise ContractError("nearest_in_extracted needs at least one extracted point.")
    if any(p.key is None for p in extracted):
        raise ContractError("Extracted points must carry their sweep keys.")
    keys: list[SweepKey] = [p.key for p in extracted]  # type: ignore[misc]
    best = max(range(len(extracted)), key=keys.__getitem__)
    if __debug__:
        coords = np.asarray([k.tiebreak for k in keys] + [s.coords], dtype=np.float64)
        _check_nearest(coords, len(keys), np.arange(len(keys)), best)
    return extracted[best].point_index


def merge_edges(sources: IndexArray, targets: IndexArray, weights: np.ndarray) -> EdgeArrays:
    """Deduplicate edges as unordered pairs, keeping the first under (min, max, weight)."""
    low = np.minimum(sources, targets)
    high = np.maximum(sources, targets)
    order = np.lexsort((weights, high, low))
    low, high, weights = low[order], high[order], weights[order]
    keep = np.ones(low.size, dtype=bool)
    keep[1:] = (low[1:] != low[:-1]) | (high[1:] != high[:-1])
    return low[keep], high[keep], weights[keep]


def candidate_arrays(
    points: Sequence[Point] | PointArray,
    family: ConeFamily,
    backend: Backend | str = Backend.tree,
    threads: int = 1,
    progress: bool = False,
) -> EdgeArrays:
    """Array form of `build_candidate_graph`: (low, high, weight), sorted by (low, high)."""
    coords = _validated_coordinates(points, family)
    backend = Backend(backend)
    n = coords.shape[0]
    empty = np.zeros(0, dtype=np.int64)
    if n < 2:
        return empty, empty, np.zeros(0)
    if threads < 1:
        raise ConfigurationError(f"Thread count must be positive, got {threads}.")

    jobs: list[Callable[[], tuple[IndexArray, IndexArray]]]
    if backend == Backend.batched:
        jobs = [partial(_orthant_edges, coords, family, alpha) for alpha in SignVector.all(family.d)]
    else:
        jobs = [partial(_pass_edges, coords, cfg, backend) for cfg in PassConfig.all_passes(family)]

    results: list[tuple[IndexArray, IndexArray]] = []
    with tqdm(total=len(jobs), desc="Sweep passes", disable=not progress, leave=False) as bar:
        if threads == 1:
            for job in jobs:
                results.append(job())
                bar.update()
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                for result in pool.map(lambda job: job(), jobs):
                    results.append(result)
                    bar.update()

    sources = np.concatenate([r[0] for r in results]) if results else empty
    targets = np.concatenate([r[1] for r in results]) if results else empty
    weights = np.abs(coords[sources] - coords[targets]).sum(axis=1)
    low, high, weights = merge_edges(sources, targets, weights)

    bound = len(family) * n
    assert low.size <= bound, f"Candidate graph has {low.size} edges, bound is {bound}."
    logger.info(f"Candidate graph: {low.size:,d} edges from {len(jobs):,d} {backend.value} jobs over {n:,d} points.")
    return low, high, weights


def build_candidate_graph(
    points: Sequence[Point] | PointArray,
    family: ConeFamily,
    backend: Backend | str = Backend.tree,
    threads: int = 1,
    progress: bool = False,
) -> list[CandidateEdge]:
    """Union of all sweep passes, deduplicated as unordered pairs.

    Args:
        points (Sequence[Point] | numpy.ndarray[n, d]):
            Distinct points.

        family (ConeFamily):
            The cone covering; one pass runs per (alpha, i).

        backend (Backend, optional):
            `tree`, `reference` or `batched`.

        threads (int, optional):
            Worker threads for the passes. The result does not depend on it.

        progress (bool, optional):
            Show a progress bar on stderr.

    Returns:
        list[CandidateEdge]: Edges with u < v, sorted by (u, v). At most 2^d * k_d * n of them.
    """
    low, high, weights = candidate_arrays(points, family, backend, threads, progress)
    return [CandidateEdge(int(u), int(v), float(w)) for u, v, w in zip(low.tolist(), high.tolist(), weights.tolist())]
