from __future__ import annotations

import statistics
import time

import numpy as np
import polars as pl
from tqdm import tqdm

from yaosweep.__init__ import console
from yaosweep.constants import BENCH_COLUMNS, Backend
from yaosweep.mst.kruskal import kruskal
from yaosweep.pipeline import family_for, random_instance
from yaosweep.run_config import RunConfig
from yaosweep.sweep.builder import build_candidate_graph
from yaosweep.utils.colorlogging import ColorLog
from yaosweep.utils.instance_io import Instance

logger = ColorLog(console, __name__).logger

DEFAULT_BENCH_BACKENDS = (Backend.tree, Backend.reference)


def run_benchmark(cfg: RunConfig, progress: bool = True) -> pl.DataFrame:
    """Time candidate graph construction plus Kruskal for every (d, n, backend).

    Each row holds the median wall time over `cfg.repeats` runs on one
    random integer instance per (d, n). All backends of a row see the same points.
    """
    backends = (cfg.backend,) if cfg.backend_explicit else DEFAULT_BENCH_BACKENDS
    grid = [(d, n) for d in cfg.dims for n in cfg.sizes]
    rows: list[dict[str, object]] = []

    with tqdm(total=len(grid) * len(backends), desc="Benchmarking", disable=not progress) as bar:
        for d, n in grid:
            family = family_for(d, cfg)
            rng = np.random.default_rng([cfg.seed, d, n])
            inst = Instance.from_coordinates(random_instance(rng, d, n, cfg.coord_range))
            for backend in backends:
                timings = []
                edge_count = 0
                for _ in range(cfg.repeats):
                    start = time.perf_counter()
                    edges = build_candidate_graph(inst.coords, family, backend=backend, threads=cfg.threads)
                    kruskal(len(inst), edges)
                    timings.append((time.perf_counter() - start) * 1000.0)
                    edge_count = len(edges)
                median_ms = statistics.median(timings)
                logger.info(f"d={d} n={n} backend={backend.value}: {median_ms:.1f} ms, {edge_count:,d} edges")
                rows.append(
                    {"d": d, "n": n, "backend": backend.value, "median_ms": median_ms, "edges": edge_count}
                )
                bar.update()

    return pl.DataFrame(
        rows,
        schema={"d": pl.Int64, "n": pl.Int64, "backend": pl.Utf8, "median_ms": pl.Float64, "edges": pl.Int64},
    ).select(BENCH_COLUMNS)
