from __future__ import annotations

import numpy as np
import pytest

from yaosweep.cones.family import Cone, ConeFamily
from yaosweep.cones.validation import (
    covered_directions,
    validate_coverage,
    validate_family_proximity,
    validate_proximity,
)
from yaosweep.exceptions import ConfigurationError
from yaosweep.geometry.core import SignVector


def test_every_2d_cone_is_proximal(yao_family_2d: ConeFamily) -> None:
    """All 64 cones pass 10^4 sampled pairs."""
    report = validate_family_proximity(yao_family_2d, trials=10_000, rng_seed=0)
    assert report.passed
    assert report.worst_margin >= -1e-9
    assert len(report.cones) == 64
    assert report.failures == []


def test_single_cone_report(yao_family_2d: ConeFamily) -> None:
    """A single cone report names the cone it checked."""
    cone = yao_family_2d.cone(SignVector((-1, 1)), 3)
    report = validate_proximity(cone, trials=2_000, rng_seed=7)
    assert report.passed
    assert report.alpha == (-1, 1)
    assert report.ordinal == 3
    assert report.trials == 2_000


def test_full_quadrant_is_not_proximal() -> None:
    """A whole quadrant holds p=(1,0), q=(0,1) with |p-q| = 2 > 1, so it must fail."""
    quadrant = Cone(SignVector((1, 1)), 0, np.eye(2), np.eye(2))
    report = validate_proximity(quadrant, trials=1_000, rng_seed=0)
    assert not report.passed
    assert report.worst_margin < -0.1


def test_worst_margin_is_the_raw_l1_gap() -> None:
    """The reported margin is max(|s - p|_1, |s - q|_1) - |p - q|_1 itself, in coordinate units."""
    generators = 3.0 * np.eye(2)
    cone = Cone(SignVector((1, 1)), 0, np.linalg.inv(generators).T, generators)
    report = validate_proximity(cone, trials=500, rng_seed=11)

    rng = np.random.default_rng(11)
    p = rng.random((500, 2)) @ generators
    q = rng.random((500, 2)) @ generators
    expected = (np.maximum(p.sum(axis=1), q.sum(axis=1)) - np.abs(p - q).sum(axis=1)).min()
    assert report.worst_margin == pytest.approx(expected)
    assert not report.passed


def test_octant_family_is_proximal(octant_family: ConeFamily) -> None:
    """The 45 degree cones pass as well."""
    assert validate_family_proximity(octant_family, trials=10_000).passed


def test_coverage(yao_family_2d: ConeFamily, octant_family: ConeFamily) -> None:
    """10^5 random directions are all covered."""
    for family in (yao_family_2d, octant_family):
        report = validate_coverage(family, trials=100_000, rng_seed=1)
        assert report.passed
        assert report.uncovered_count == 0
        assert report.uncovered == ()


def test_coverage_of_the_line(family_1d: ConeFamily) -> None:
    """Both directions of the line are covered by a ray."""
    covered = covered_directions(family_1d, np.array([[3.7], [-2.0]]))
    assert covered.tolist() == [True, True]


def test_coverage_detects_a_missing_cone(yao_family_2d: ConeFamily) -> None:
    """Dropping one cone per quadrant leaves a gap the validator finds."""
    damaged = ConeFamily(
        d=2,
        positive_generators=yao_family_2d.positive_generators[1:],
        positive_matrices=yao_family_2d.positive_matrices[1:],
    )
    report = validate_coverage(damaged, trials=10_000, rng_seed=0)
    assert not report.passed
    assert report.uncovered_count > 0
    assert 0 < len(report.uncovered) <= 10


def test_reports_serialize(octant_family: ConeFamily) -> None:
    """Reports turn into plain dictionaries."""
    proximity = validate_family_proximity(octant_family, trials=100).to_dict()
    coverage = validate_coverage(octant_family, trials=100).to_dict()
    assert proximity["cones_checked"] == 8
    assert proximity["passed"] is True
    assert coverage == {"passed": True, "trials": 100, "uncovered_count": 0, "uncovered": []}


def test_trials_must_be_positive(octant_family: ConeFamily) -> None:
    """Zero trials is a configuration error."""
    with pytest.raises(ConfigurationError):
        validate_coverage(octant_family, trials=0)
    with pytest.raises(ConfigurationError):
        validate_proximity(octant_family.cones[0], trials=0)


@pytest.mark.slow
def test_3d_family_validates(yao_family_3d: ConeFamily) -> None:
    """The d=3 family is proximal and covering."""
    assert validate_family_proximity(yao_family_3d, trials=1_000).passed
    assert validate_coverage(yao_family_3d, trials=20_000).passed
