from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from yaosweep.constants import RELATIVE_EPS
from yaosweep.exceptions import ContractError, InstanceError
from yaosweep.types import Coordinates, IndexArray, PointArray, SignArray, SweepKeys


@dataclass(frozen=True)
class Point:
    """A location in R^d together with its identity inside an instance.

    Args:
        coords (tuple[float, ...]):
            The d finite coordinates.

        index (int):
            Position of the point in its instance.
    """

    coords: tuple[float, ...]
    index: int = 0

    def __post_init__(self) -> None:
        coords = tuple(float(c) for c in self.coords)
        if not coords:
            raise InstanceError("A point needs at least one coordinate.")
        if not all(math.isfinite(c) for c in coords):
            raise InstanceError(f"Point {self.index} has non-finite coordinates {coords}.")
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        """Number of coordinates."""
        return len(self.coords)

    def as_array(self) -> Coordinates:
        """Return the coordinates as a float64 vector."""
        return np.asarray(self.coords, dtype=np.float64)


@dataclass(frozen=True)
class SignVector:
    """An orthant tag alpha in {+1, -1}^d."""

    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        signs = tuple(int(s) for s in self.signs)
        if not signs or any(s not in (1, -1) for s in signs):
            raise InstanceError(f"Sign vector entries must be +1 or -1, got {self.signs}.")
        object.__setattr__(self, "signs", signs)

    @property
    def dim(self) -> int:
        """Number of entries."""
        return len(self.signs)

    def __neg__(self) -> SignVector:
        return SignVector(tuple(-s for s in self.signs))

    def as_array(self) -> SignArray:
        """Return the signs as an integer vector."""
        return np.asarray(self.signs, dtype=np.int64)

    @classmethod
    def all(cls, d: int) -> list[SignVector]:
        """All 2^d sign vectors, positive orthant first, in lexicographic (+1 before -1) order."""
        return [cls(signs) for signs in itertools.product((1, -1), repeat=d)]


@dataclass(frozen=True, order=True)
class SweepKey:
    """Position of a point in the refined sweep order for one sign vector.

    Comparison is by `value`, then lexicographically by `tiebreak`
    (the point's coordinates), then by `index`.
    """

    value: float
    tiebreak: tuple[float, ...]
    index: int


def _check_same_dim(a: Sequence[float], b: Sequence[float]) -> None:
    if len(a) != len(b):
        raise InstanceError(f"Dimension mismatch: {len(a)} != {len(b)}.")


def l1_distance(a: Point, b: Point) -> float:
    """Manhattan distance between two points of equal dimension."""
    _check_same_dim(a.coords, b.coords)
    return math.fsum(abs(x - y) for x, y in zip(a.coords, b.coords))


def sweep_key(p: Point, alpha: SignVector) -> SweepKey:
    """Key of `p` in the sweep order for `alpha`: the functional sum(alpha_i * p_i)."""
    _check_same_dim(p.coords, alpha.signs)
    value = math.fsum(s * c for s, c in zip(alpha.signs, p.coords))
    return SweepKey(value=value, tiebreak=p.coords, index=p.index)


def coordinate_scale(coords: PointArray | Sequence[float]) -> float:
    """Scale used for relative tolerances: max(1, largest absolute coordinate)."""
    arr = np.asarray(coords, dtype=np.float64)
    if arr.size == 0:
        return 1.0
    return max(1.0, float(np.abs(arr).max()))


def in_closed_orthant(s: Point, x: Point, alpha: SignVector) -> bool:
    """Whether `x` lies in Ort_alpha(s), i.e. alpha_i * (x_i - s_i) >= 0 for every i."""
    _check_same_dim(s.coords, x.coords)
    _check_same_dim(s.coords, alpha.signs)
    return all(a * (xi - si) >= 0 for a, xi, si in zip(alpha.signs, x.coords, s.coords))


def distance_key_identity_check(
    s: Point, x: Point, alpha: SignVector, tolerance: float | None = None
) -> bool:
    """Check l1(s, x) == key_alpha(s) - key_alpha(x) for `x` behind `s`.

    Args:
        s (Point):
            The sweep point.

        x (Point):
            A point of the closed orthant Ort_{-alpha}(s).

        alpha (SignVector):
            The sweep direction.

        tolerance (float | None, optional):
            Allowed absolute deviation. Defaults to
            1e-9 times the coordinate scale of both points.

    Raises:
        ContractError: If `x` is outside Ort_{-alpha}(s).
    """
    if not in_closed_orthant(s, x, -alpha):
        raise ContractError(f"{x.coords} is not in the closed orthant {(-alpha).signs} of {s.coords}.")
    if tolerance is None:
        tolerance = RELATIVE_EPS * coordinate_scale(s.coords + x.coords)
    key_gap = sweep_key(s, alpha).value - sweep_key(x, alpha).value
    return abs(l1_distance(s, x) - key_gap) <= tolerance


def as_coordinate_array(points: Sequence[Point] | PointArray) -> PointArray:
    """Stack points (or pass through an array) into a float64 array of shape (n, d)."""
    if isinstance(points, np.ndarray):
        arr = np.asarray(points, dtype=np.float64)
        if arr.ndim != 2:
            raise InstanceError(f"Expected a 2-D coordinate array, got shape {arr.shape}.")
        return arr
    if len(points) == 0:
        return np.zeros((0, 0), dtype=np.float64)
    dims = {p.dim for p in points}
    if len(dims) != 1:
        raise InstanceError(f"Points have mixed dimensions {sorted(dims)}.")
    return np.asarray([p.coords for p in points], dtype=np.float64)


def l1_distances(coords: PointArray, origin: Coordinates) -> np.ndarray:
    """Manhattan distance from every row of `coords` to `origin`."""
    return np.abs(coords - origin[None, :]).sum(axis=1)


def sweep_keys(coords: PointArray, alpha: SignVector) -> SweepKeys:
    """Vectorized `sweep_key(...).value` for every row of `coords`."""
    if coords.shape[1] != alpha.dim:
        raise InstanceError(f"Dimension mismatch: {coords.shape[1]} != {alpha.dim}.")
    return coords @ alpha.as_array().astype(np.float64)


def sweep_order(coords: PointArray, alpha: SignVector) -> IndexArray:
    """Row indices of `coords` in ascending refined sweep order for `alpha`."""
    n, d = coords.shape
    keys = sweep_keys(coords, alpha)
    # np.lexsort treats the last key as primary
    columns = [np.arange(n)] + [coords[:, j] for j in reversed(range(d))] + [keys]
    return np.lexsort(columns)
