from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from yaosweep.__init__ import console
from yaosweep.cones.family import Cone, ConeFamily
from yaosweep.constants import (
    BATCHED_CHUNK_ELEMENTS,
    MAX_REPORTED_UNCOVERED,
    PROXIMITY_TOLERANCE,
    RELATIVE_EPS,
)
from yaosweep.exceptions import ConfigurationError
from yaosweep.geometry.core import SignVector
from yaosweep.types import DirectionArray, GeneratorStack
from yaosweep.utils.colorlogging import ColorLog

logger = ColorLog(console, __name__).logger


@dataclass(frozen=True)
class ProximityReport:
    """Outcome of sampling point pairs inside one cone.

    `worst_margin` is the minimum over all trials of
    max(|s - p|_1, |s - q|_1) - |p - q|_1, with s the apex.
    """

    passed: bool
    worst_margin: float
    trials: int
    alpha: tuple[int, ...] | None = None
    ordinal: int | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "worst_margin": self.worst_margin,
            "trials": self.trials,
            "alpha": list(self.alpha) if self.alpha is not None else None,
            "ordinal": self.ordinal,
        }


@dataclass(frozen=True)
class FamilyProximityReport:
    """Proximity reports for every cone of a family plus a summary."""

    passed: bool
    worst_margin: float
    trials: int
    cones: tuple[ProximityReport, ...] = field(repr=False)

    @property
    def failures(self) -> list[ProximityReport]:
        return [report for report in self.cones if not report.passed]

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "worst_margin": self.worst_margin,
            "trials": self.trials,
            "cones_checked": len(self.cones),
            "failures": [report.to_dict() for report in self.failures],
        }


@dataclass(frozen=True)
class CoverageReport:
    """Outcome of sampling random directions against a family.

    `uncovered` holds at most a handful of offending directions.
    """

    passed: bool
    trials: int
    uncovered_count: int
    uncovered: tuple[tuple[float, ...], ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "trials": self.trials,
            "uncovered_count": self.uncovered_count,
            "uncovered": [list(direction) for direction in self.uncovered],
        }


def _check_trials(trials: int) -> None:
    if trials < 1:
        raise ConfigurationError(f"Validation needs at least one trial, got {trials}.")


def _proximity_margins(
    generators: GeneratorStack, p_weights: np.ndarray, q_weights: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Raw margins for every (cone, trial), apex at the origin, and whether each is within tolerance.

    Both arrays have shape (cones, trials).
    """
    p = np.einsum("tg,kgd->ktd", p_weights, generators)
    q = np.einsum("tg,kgd->ktd", q_weights, generators)
    p_norm = np.abs(p).sum(axis=2)
    q_norm = np.abs(q).sum(axis=2)
    gap = np.abs(p - q).sum(axis=2)
    margins = np.maximum(p_norm, q_norm) - gap
    # tolerance is relative to the sample scale
    scale = np.maximum(1.0, np.maximum(p_norm, q_norm))
    return margins, margins >= -PROXIMITY_TOLERANCE * scale


def _sample_weights(rng: np.random.Generator, trials: int, d: int) -> tuple[np.ndarray, np.ndarray]:
    return rng.random((trials, d)), rng.random((trials, d))


def validate_proximity(c: Cone, trials: int, rng_seed: int = 0) -> ProximityReport:
    """Check the proximity property of one cone by sampling.

    Points p and q are random non-negative combinations of the generators.
    The cone passes when no sample violates
    |p - q|_1 <= max(|s - p|_1, |s - q|_1) by more than the tolerance.

    Args:
        c (Cone):
            The cone under test.

        trials (int):
            Number of sampled pairs.

        rng_seed (int, optional):
            Seed for `numpy.random.default_rng`.
    """
    _check_trials(trials)
    rng = np.random.default_rng(rng_seed)
    p_weights, q_weights = _sample_weights(rng, trials, c.dim)
    margins, within = _proximity_margins(c.generators[None], p_weights, q_weights)
    return ProximityReport(
        passed=bool(within.all()),
        worst_margin=float(margins.min()),
        trials=trials,
        alpha=c.alpha.signs,
        ordinal=c.ordinal,
    )


def validate_family_proximity(family: ConeFamily, trials: int, rng_seed: int = 0) -> FamilyProximityReport:
    """Run the proximity check over every cone of `family`.

    All cones share the same barycentric samples, evaluated in chunks of stacked cones.
    """
    _check_trials(trials)
    rng = np.random.default_rng(rng_seed)
    p_weights, q_weights = _sample_weights(rng, trials, family.d)
    chunk = max(1, BATCHED_CHUNK_ELEMENTS // (trials * family.d))

    reports: list[ProximityReport] = []
    for alpha in SignVector.all(family.d):
        generators = family.generators(alpha)
        for start in range(0, family.cones_per_orthant, chunk):
            margins, within = _proximity_margins(generators[start : start + chunk], p_weights, q_weights)
            reports.extend(
                ProximityReport(
                    passed=bool(ok),
                    worst_margin=float(w),
                    trials=trials,
                    alpha=alpha.signs,
                    ordinal=start + offset,
                )
                for offset, (w, ok) in enumerate(zip(margins.min(axis=1), within.all(axis=1)))
            )

    worst_margin = min((r.worst_margin for r in reports), default=0.0)
    passed = all(r.passed for r in reports)
    if not passed:
        logger.warning(f"Proximity violated by {sum(not r.passed for r in reports)} cones of '{family.name}'.")
    return FamilyProximityReport(passed=passed, worst_margin=worst_margin, trials=trials, cones=tuple(reports))


def covered_directions(family: ConeFamily, directions: DirectionArray) -> np.ndarray:
    """Boolean mask: whether each direction lies in some cone of its own orthant."""
    d = family.d
    covered = np.zeros(directions.shape[0], dtype=bool)
    if family.cones_per_orthant == 0:
        return covered

    signs = np.where(directions >= 0, 1, -1)
    eps = RELATIVE_EPS * np.maximum(1.0, np.abs(directions).max(axis=1))
    chunk = max(1, BATCHED_CHUNK_ELEMENTS // (family.cones_per_orthant * d))

    for alpha in SignVector.all(d):
        selected = np.flatnonzero(np.all(signs == alpha.as_array()[None, :], axis=1))
        if selected.size == 0:
            continue
        matrices = family.matrices(alpha)
        for start in range(0, selected.size, chunk):
            rows = selected[start : start + chunk]
            values = np.einsum("kij,tj->tki", matrices, directions[rows])
            inside = np.all(values >= -eps[rows, None, None], axis=2)
            covered[rows] = inside.any(axis=1)
    return covered


def validate_coverage(family: ConeFamily, trials: int, rng_seed: int = 0) -> CoverageReport:
    """Sample Gaussian directions and report those no cone of the family contains.

    Args:
        family (ConeFamily):
            The covering under test.

        trials (int):
            Number of sampled directions.

        rng_seed (int, optional):
            Seed for `numpy.random.default_rng`.
    """
    _check_trials(trials)
    rng = np.random.default_rng(rng_seed)
    directions = rng.standard_normal((trials, family.d))
    covered = covered_directions(family, directions)
    missing = directions[~covered]
    if missing.shape[0]:
        logger.warning(f"{missing.shape[0]} of {trials} directions are outside every cone of '{family.name}'.")
    return CoverageReport(
        passed=missing.shape[0] == 0,
        trials=trials,
        uncovered_count=int(missing.shape[0]),
        uncovered=tuple(tuple(float(x) for x in row) for row in missing[:MAX_REPORTED_UNCOVERED]),
    )
