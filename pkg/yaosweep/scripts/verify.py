from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from tqdm import tqdm

from yaosweep.__init__ import console
from yaosweep.mst.kruskal import kruskal
from yaosweep.mst.oracle import prim_dense_oracle
from yaosweep.pipeline import family_for, random_instance
from yaosweep.run_config import RunConfig
from yaosweep.sweep.builder import build_candidate_graph
from yaosweep.utils.colorlogging import ColorLog
from yaosweep.utils.instance_io import Instance, format_number, write_points

logger = ColorLog(console, __name__).logger


@dataclass(frozen=True)
class TrialFailure:
    trial: int
    d: int
    n: int
    expected: float
    got: float
    dump: Path
    reason: str = "weight"

    def to_line(self) -> str:
        line = (
            f"FAIL trial={self.trial} d={self.d} n={self.n} "
            f"expected={format_number(self.expected)} got={format_number(self.got)} dump={self.dump}"
        )
        return line if self.reason == "weight" else f"{line} reason={self.reason}"


@dataclass(frozen=True)
class VerificationReport:
    trials: int
    failures: list[TrialFailure] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return self.trials - len(self.failures)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_text(self) -> str:
        lines = [f"trials\t{self.trials}", f"passed\t{self.passed}", f"failed\t{len(self.failures)}"]
        lines.extend(failure.to_line() for failure in self.failures)
        return "\n".join(lines) + "\n"


def _dump_instance(coords: np.ndarray, directory: Path, trial: int, d: int, n: int) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"trial_{trial:05d}_d{d}_n{n}.txt"
    with path.open("wb") as sink:
        write_points(coords, sink)
    return path


def run_verification(cfg: RunConfig, progress: bool = True) -> VerificationReport:
    """Compare the pipeline against the dense Prim oracle on random integer instances.

    Trial t uses dimension `cfg.dims[t % len(cfg.dims)]` and n uniform in
    [2, max_n]. A trial fails when the totals differ, the candidate graph
    breaks the 2^d * k_d * n edge bound or a sweep assertion fires.
    Failing instances are written to `cfg.failure_dir`.
    """
    rng = np.random.default_rng(cfg.seed)
    failures: list[TrialFailure] = []

    for trial in tqdm(range(cfg.trials), desc="Verifying", disable=not progress):
        d = cfg.dims[trial % len(cfg.dims)]
        n = int(rng.integers(2, cfg.max_n, endpoint=True))
        coords = random_instance(rng, d, n, cfg.coord_range)
        inst = Instance.from_coordinates(coords)

        expected = prim_dense_oracle(inst.coords).total_weight
        family = family_for(d, cfg)
        reason: str | None = None
        try:
            edges = build_candidate_graph(inst.coords, family, backend=cfg.backend, threads=cfg.threads)
        except AssertionError as e:
            # edge bound and nearest-partner checks of the sweep
            logger.error(f"Trial {trial}: {e}")
            got, reason = math.nan, "invariant"
        else:
            got = kruskal(len(inst), edges).total_weight
            if got != expected:
                reason = "weight"
            elif len(edges) > len(family) * len(inst):
                reason = "edge_bound"

        if reason is not None:
            dump = _dump_instance(coords, cfg.failure_dir, trial, d, n)
            failures.append(TrialFailure(trial, d, n, expected, got, dump, reason))
            logger.error(f"Trial {trial} failed ({reason}): expected {expected}, got {got}. Instance in {dump}.")

    report = VerificationReport(trials=cfg.trials, failures=failures)
    logger.info(f"Verification: {report.passed}/{report.trials} trials passed.")
    return report
