from __future__ import annotations

from functools import lru_cache

import numpy as np

from yaosweep.__init__ import console
from yaosweep.cones.family import ConeFamily, build_family, octant_family_2d
from yaosweep.constants import Backend, FamilyName
from yaosweep.exceptions import ConfigurationError
from yaosweep.mst.kruskal import MstResult, kruskal
from yaosweep.run_config import RunConfig
from yaosweep.sweep.builder import build_candidate_graph
from yaosweep.types import PointArray
from yaosweep.utils.colorlogging import ColorLog
from yaosweep.utils.instance_io import Instance

logger = ColorLog(console, __name__).logger


@lru_cache(maxsize=8)
def _cached_family(
    d: int, family: FamilyName, d_max: int, allow_large_dim: bool, max_cones_per_orthant: int
) -> ConeFamily:
    if family == FamilyName.octant2d:
        if d != 2:
            raise ConfigurationError(f"The octant2d family only exists for d=2, got d={d}.")
        return octant_family_2d()
    return build_family(d, d_max=d_max, allow_large_dim=allow_large_dim, max_cones_per_orthant=max_cones_per_orthant)


def family_for(d: int, cfg: RunConfig) -> ConeFamily:
    """The cone family `cfg` asks for in dimension `d`, built once per process."""
    cfg.check_dim(d)
    return _cached_family(d, cfg.family, cfg.d_max, cfg.allow_large_dim, cfg.max_cones_per_orthant)


def solve(
    coords: PointArray,
    family: ConeFamily,
    backend: Backend | str = Backend.tree,
    threads: int = 1,
    progress: bool = False,
) -> MstResult:
    """Minimum spanning tree of distinct points: candidate graph, then Kruskal."""
    edges = build_candidate_graph(coords, family, backend=backend, threads=threads, progress=progress)
    result = kruskal(coords.shape[0], edges)
    logger.info(f"MST over {coords.shape[0]:,d} points: {len(result.edges):,d} edges, total {result.total_weight}.")
    return result


def solve_instance(inst: Instance, cfg: RunConfig, progress: bool = False) -> MstResult:
    """Run `solve` on an instance, picking the family from `cfg`.

    Instances with fewer than two distinct points need no family.
    """
    if len(inst) < 2:
        return kruskal(len(inst), [])
    d = cfg.dim if cfg.dim is not None else inst.d
    if d != inst.d:
        raise ConfigurationError(f"Configured dimension {d} does not match the input dimension {inst.d}.")
    return solve(inst.coords, family_for(d, cfg), cfg.backend, cfg.threads, progress)


def random_instance(rng: np.random.Generator, d: int, n: int, coord_range: int) -> PointArray:
    """`n` points with integer coordinates uniform in [-coord_range, coord_range]^d."""
    return rng.integers(-coord_range, coord_range, size=(n, d), endpoint=True).astype(np.float64)
