from __future__ import annotations

import math

import numpy as np
import pytest

from yaosweep.cones.family import (
    Cone,
    ConeFamily,
    angle_threshold,
    build_family,
    contains,
    octant_family_2d,
    pairwise_generator_angles,
)
from yaosweep.exceptions import ConfigurationError, InstanceError
from yaosweep.geometry.core import Point, SignVector


def _assert_valid_family(family: ConeFamily) -> None:
    threshold = angle_threshold(family.d)
    for cone in family.cones:
        assert cone.max_generator_angle() < threshold
        assert cone.duality_error() <= 1e-9
        np.testing.assert_allclose(np.linalg.norm(cone.generators, axis=1), 1.0, rtol=1e-12)
        # generators lie in the closed orthant of alpha
        assert np.all(cone.generators * cone.alpha.as_array()[None, :] >= -1e-12)


def test_angle_threshold() -> None:
    """The stopping angle evaluates to the known values for d=2 and d=3."""
    assert math.degrees(angle_threshold(2)) == pytest.approx(10.1821, abs=1e-3)
    assert math.degrees(angle_threshold(3)) == pytest.approx(5.522, abs=1e-3)
    assert angle_threshold(1) == pytest.approx(math.pi / 6)


def test_family_1d(family_1d: ConeFamily) -> None:
    """The line is covered by the two rays."""
    assert family_1d.cones_per_orthant == 1
    assert len(family_1d.cones) == 2
    matrices = sorted(float(c.matrix[0, 0]) for c in family_1d.cones)
    assert matrices == [-1.0, 1.0]
    _assert_valid_family(family_1d)


def test_family_2d(yao_family_2d: ConeFamily) -> None:
    """Halving 90 degrees four times gives 16 cones per quadrant."""
    assert yao_family_2d.cones_per_orthant == 16
    assert len(yao_family_2d) == 64
    assert len(yao_family_2d.cones) == 64
    _assert_valid_family(yao_family_2d)

    apex_angles = sorted({round(math.degrees(c.max_generator_angle()), 6) for c in yao_family_2d.cones})
    assert apex_angles == [5.625]


def test_sign_flip_symmetry(yao_family_2d: ConeFamily) -> None:
    """The matrix of (-alpha, i) is exactly the negated matrix of (alpha, i)."""
    for alpha in SignVector.all(2):
        np.testing.assert_array_equal(yao_family_2d.matrices(-alpha), -yao_family_2d.matrices(alpha))
        for i in (0, 7, 15):
            np.testing.assert_array_equal(yao_family_2d.cone(-alpha, i).matrix, -yao_family_2d.cone(alpha, i).matrix)


def test_orthant_groups(yao_family_2d: ConeFamily) -> None:
    """Cones are grouped by orthant in sign vector order, k per group."""
    cones = yao_family_2d.cones
    for g, alpha in enumerate(SignVector.all(2)):
        group = cones[g * 16 : (g + 1) * 16]
        assert all(c.alpha == alpha for c in group)
        assert [c.ordinal for c in group] == list(range(16))


def test_ordinals_follow_depth_first_order(yao_family_2d: ConeFamily) -> None:
    """Cone 0 hugs the second axis, cone 15 the first one."""
    positive = SignVector((1, 1))
    assert yao_family_2d.cone(positive, 0).contains((0, 0), (0.01, 1.0))
    assert yao_family_2d.cone(positive, 15).contains((0, 0), (1.0, 0.01))
    assert not yao_family_2d.cone(positive, 0).contains((0, 0), (1.0, 0.01))


def test_first_split_example(octant_family: ConeFamily) -> None:
    """Generators (1,0) and (1,1)/sqrt(2) give rows (1,-1) and (0,sqrt(2))."""
    cone = octant_family.cone(SignVector((1, 1)), 1)
    s = 1 / math.sqrt(2)
    np.testing.assert_allclose(cone.generators, [[1.0, 0.0], [s, s]], atol=1e-15)
    np.testing.assert_allclose(cone.matrix, [[1.0, -1.0], [0.0, math.sqrt(2)]], atol=1e-12)

    apex = Point((0, 0))
    assert contains(cone, apex, Point((2, 1)))
    assert not contains(cone, apex, Point((1, 2)))
    assert contains(cone, apex, apex)


def test_boundary_belongs_to_both_neighbours(octant_family: ConeFamily) -> None:
    """The shared diagonal is inside both half-quadrants."""
    positive = SignVector((1, 1))
    for ordinal in (0, 1):
        assert contains(octant_family.cone(positive, ordinal), (0, 0), (1, 1), eps=1e-9)


def test_octant_family(octant_family: ConeFamily) -> None:
    """Eight 45 degree cones, two per quadrant."""
    assert octant_family.cones_per_orthant == 2
    assert len(octant_family.cones) == 8
    assert octant_family.name == "octant2d"
    for cone in octant_family.cones:
        assert cone.max_generator_angle() == pytest.approx(math.pi / 4)
        assert cone.duality_error() <= 1e-9


def test_membership_equivalence(yao_family_2d: ConeFamily, rng: np.random.Generator) -> None:
    """y is in cone (alpha, i) at x iff x is in cone (-alpha, i) at y."""
    pairs = rng.integers(-50, 50, size=(200, 2, 2)).astype(float)
    for x, y in pairs:
        for alpha in SignVector.all(2):
            for i in range(0, 16, 3):
                forward = contains(yao_family_2d.cone(alpha, i), x, y, eps=0.0)
                backward = contains(yao_family_2d.cone(-alpha, i), y, x, eps=0.0)
                assert forward == backward


def test_contains_dimension_mismatch(octant_family: ConeFamily) -> None:
    """Membership needs matching dimensions."""
    with pytest.raises(InstanceError):
        contains(octant_family.cones[0], (0, 0), (1, 2, 3))


def test_build_family_is_deterministic() -> None:
    """Two builds give the same arrays."""
    a, b = build_family(2), build_family(2)
    np.testing.assert_array_equal(a.positive_matrices, b.positive_matrices)
    np.testing.assert_array_equal(a.positive_generators, b.positive_generators)


def test_build_family_rejects_bad_dimension() -> None:
    """Dimensions outside [1, d_max] need an explicit override."""
    with pytest.raises(ConfigurationError):
        build_family(0)
    with pytest.raises(ConfigurationError):
        build_family(7)
    with pytest.raises(ConfigurationError):
        build_family(3, d_max=2)


def test_cone_budget() -> None:
    """The subdivision stops with an error once it needs more cones than allowed."""
    with pytest.raises(ConfigurationError, match="exceeds"):
        build_family(2, max_cones_per_orthant=15)
    with pytest.raises(ConfigurationError, match="exceeds"):
        build_family(3, max_cones_per_orthant=10)


def test_cone_arrays_are_read_only(yao_family_2d: ConeFamily) -> None:
    """Cones and families cannot be mutated through their arrays."""
    cone = yao_family_2d.cones[0]
    with pytest.raises(ValueError):
        cone.matrix[0, 0] = 5.0
    with pytest.raises(ValueError):
        yao_family_2d.positive_matrices[0, 0, 0] = 5.0


def test_cone_shape_validation() -> None:
    """A cone's arrays must be d x d."""
    with pytest.raises(InstanceError):
        Cone(SignVector((1, 1)), 0, np.eye(3), np.eye(2))


def test_cone_ordinal_bounds(octant_family: ConeFamily) -> None:
    """Ordinals outside [0, k) are rejected."""
    with pytest.raises(ConfigurationError):
        octant_family.cone(SignVector((1, 1)), 2)


def test_to_dict(octant_family: ConeFamily) -> None:
    """The dump carries d, k and one entry per cone."""
    dump = octant_family.to_dict()
    assert dump["d"] == 2
    assert dump["k"] == 2
    assert len(dump["cones"]) == 8
    assert set(dump["cones"][0]) == {"alpha", "ordinal", "matrix", "generators"}
    assert dump["cones"][0]["alpha"] == [1, 1]


def test_pairwise_generator_angles() -> None:
    """Angles between unit axes are right angles, a vector with itself is zero."""
    angles = pairwise_generator_angles(np.eye(3)[None])
    np.testing.assert_allclose(angles[0], (np.ones((3, 3)) - np.eye(3)) * math.pi / 2, atol=1e-15)


@pytest.mark.slow
def test_family_3d(yao_family_3d: ConeFamily) -> None:
    """Every cone of the d=3 family meets the angle criterion and A E = I."""
    assert yao_family_3d.cones_per_orthant > 16
    assert len(yao_family_3d) == 8 * yao_family_3d.cones_per_orthant

    threshold = angle_threshold(3)
    widest = pairwise_generator_angles(yao_family_3d.positive_generators).max(axis=(1, 2))
    assert np.all(widest < threshold)

    columns = yao_family_3d.positive_generators.transpose(0, 2, 1)
    error = np.abs(yao_family_3d.positive_matrices @ columns - np.eye(3)[None]).max()
    assert error <= 1e-9
