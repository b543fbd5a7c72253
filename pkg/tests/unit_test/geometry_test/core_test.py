from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from yaosweep.exceptions import ContractError, InstanceError
from yaosweep.geometry.core import (
    Point,
    SignVector,
    SweepKey,
    as_coordinate_array,
    distance_key_identity_check,
    in_closed_orthant,
    l1_distance,
    l1_distances,
    sweep_key,
    sweep_keys,
    sweep_order,
)


def test_point_validation() -> None:
    """Points need finite coordinates and at least one of them."""
    p = Point((1, 2.5), index=3)
    assert p.coords == (1.0, 2.5)
    assert p.dim == 2
    np.testing.assert_array_equal(p.as_array(), [1.0, 2.5])

    with pytest.raises(InstanceError):
        Point(())
    with pytest.raises(InstanceError):
        Point((0.0, float("nan")))
    with pytest.raises(InstanceError):
        Point((float("inf"),))


def test_l1_distance() -> None:
    """Manhattan distance and its dimension check."""
    assert l1_distance(Point((0, 0)), Point((3, -4))) == 7
    assert l1_distance(Point((1, 1, 1)), Point((1, 1, 1))) == 0
    with pytest.raises(InstanceError):
        l1_distance(Point((0, 0)), Point((0, 0, 0)))

    coords = np.array([[0.0, 0.0], [1.0, 2.0], [-3.0, 4.0]])
    np.testing.assert_array_equal(l1_distances(coords, np.array([1.0, 1.0])), [2.0, 1.0, 7.0])


def test_sign_vectors() -> None:
    """Sign vectors hold +1/-1 entries and enumerate all orthants."""
    alphas = SignVector.all(2)
    assert [a.signs for a in alphas] == [(1, 1), (1, -1), (-1, 1), (-1, -1)]
    assert (-SignVector((1, -1))).signs == (-1, 1)
    assert len(SignVector.all(3)) == 8

    with pytest.raises(InstanceError):
        SignVector((1, 0))
    with pytest.raises(InstanceError):
        SignVector(())


def test_sweep_key_ordering() -> None:
    """Keys compare by value, then coordinates, then index."""
    alpha = SignVector((1, 1))
    a = sweep_key(Point((1, 0), index=0), alpha)
    b = sweep_key(Point((0, 1), index=1), alpha)
    c = sweep_key(Point((0, 0), index=2), alpha)

    assert a.value == b.value == 1
    assert c < b < a
    assert SweepKey(1.0, (0.0, 1.0), 5) < SweepKey(1.0, (0.0, 1.0), 6)


def test_sweep_order_matches_keys() -> None:
    """The vectorized order equals sorting the scalar keys."""
    coords = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0], [-2.0, 5.0]])
    alpha = SignVector((1, -1))
    order = sweep_order(coords, alpha)

    points = [Point(tuple(row), index=i) for i, row in enumerate(coords.tolist())]
    expected = sorted(range(len(points)), key=lambda i: sweep_key(points[i], alpha))
    assert order.tolist() == expected
    np.testing.assert_array_equal(sweep_keys(coords, alpha), [1.0, -1.0, 0.0, -7.0])

    assert sweep_order(np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]), SignVector((1, 1))).tolist() == [2, 1, 0]


def test_distance_key_identity() -> None:
    """Inside the backward orthant, distance equals the key difference."""
    s = Point((0, 0))
    alpha = SignVector((1, 1))
    assert distance_key_identity_check(s, Point((-1, -2)), alpha)
    assert distance_key_identity_check(s, Point((0, -5)), alpha)
    assert distance_key_identity_check(Point((2, -1)), Point((5, -4)), SignVector((-1, 1)))

    with pytest.raises(ContractError):
        distance_key_identity_check(s, Point((1, -1)), alpha)


def test_in_closed_orthant() -> None:
    """The closed orthant includes its boundary."""
    s = Point((1, 1))
    assert in_closed_orthant(s, Point((1, 5)), SignVector((1, 1)))
    assert in_closed_orthant(s, Point((0, 5)), SignVector((-1, 1)))
    assert not in_closed_orthant(s, Point((0, 5)), SignVector((1, 1)))


def test_as_coordinate_array() -> None:
    """Points are stacked into an (n, d) array; mixed dimensions are rejected."""
    arr = as_coordinate_array([Point((1, 2)), Point((3, 4))])
    assert arr.shape == (2, 2)
    assert as_coordinate_array([]).shape == (0, 0)
    with pytest.raises(InstanceError):
        as_coordinate_array([Point((1, 2)), Point((3,))])


coordinate = st.integers(min_value=-1000, max_value=1000)


@st.composite
def orthant_triples(draw: st.DrawFn) -> tuple[Point, SignVector, Point, Point]:
    """Apex s, direction alpha and two points of Ort_alpha(s)."""
    d = draw(st.integers(min_value=1, max_value=5))
    s = tuple(draw(coordinate) for _ in range(d))
    alpha = tuple(draw(st.sampled_from((1, -1))) for _ in range(d))
    offsets = st.integers(min_value=0, max_value=1000)
    x = tuple(si + a * draw(offsets) for si, a in zip(s, alpha))
    y = tuple(si + a * draw(offsets) for si, a in zip(s, alpha))
    return Point(s), SignVector(alpha), Point(x, index=1), Point(y, index=2)


@settings(max_examples=500, deadline=None)
@given(orthant_triples())
def test_key_order_is_distance_order(triple: tuple[Point, SignVector, Point, Point]) -> None:
    """Within one orthant of s, a larger key never means a closer point."""
    s, alpha, x, y = triple
    if sweep_key(x, alpha) > sweep_key(y, alpha):
        x, y = y, x
    assert l1_distance(y, s) >= l1_distance(x, s)
    # s sits in the backward orthant of x and y
    assert distance_key_identity_check(x, s, alpha, tolerance=0.0)
    assert distance_key_identity_check(y, s, alpha, tolerance=0.0)


def test_key_order_is_distance_order_in_bulk(rng: np.random.Generator) -> None:
    """10^5 random tuples in d=1..4, checked with the vectorized helpers."""
    for d in range(1, 5):
        trials = 25_000
        s = rng.integers(-1000, 1001, size=(trials, d)).astype(np.float64)
        alpha = rng.choice([-1, 1], size=(trials, d))
        x = s + alpha * rng.integers(0, 1001, size=(trials, d))
        y = s + alpha * rng.integers(0, 1001, size=(trials, d))

        key_x = (alpha * x).sum(axis=1)
        key_y = (alpha * y).sum(axis=1)
        near, far = np.where((key_x <= key_y)[:, None], x, y), np.where((key_x <= key_y)[:, None], y, x)
        assert np.all(np.abs(far - s).sum(axis=1) >= np.abs(near - s).sum(axis=1))
        # exact identity on integers: distance equals the key difference
        np.testing.assert_array_equal(np.abs(x - s).sum(axis=1), key_x - (alpha * s).sum(axis=1))
