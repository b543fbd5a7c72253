from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Any, Sequence

import numpy as np

from yaosweep.__init__ import console
from yaosweep.constants import (
    DEFAULT_D_MAX,
    DEFAULT_MAX_CONES_PER_ORTHANT,
    MATRIX_TOLERANCE,
    RELATIVE_EPS,
    FamilyName,
)
from yaosweep.exceptions import ConfigurationError, InstanceError
from yaosweep.geometry.core import Point, SignVector
from yaosweep.types import (
    ConeMatrix,
    ConeMatrixStack,
    Coordinates,
    GeneratorMatrix,
    GeneratorStack,
)
from yaosweep.utils.colorlogging import ColorLog

logger = ColorLog(console, __name__).logger


def angle_threshold(d: int) -> float:
    """Stopping angle for the subdivision in radians: arcsin(1 / (2 * d^(3/2)))."""
    return math.asin(1.0 / (2.0 * d**1.5))


def _read_only(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.float64, copy=True)
    array.flags.writeable = False
    return array


def pairwise_generator_angles(generators: GeneratorStack) -> np.ndarray:
    """Angles between every pair of generators, shape (cones, d, d).

    Uses 2 * atan2(|a - b|, |a + b|) on normalized generators, which stays
    accurate for nearly parallel directions where arccos does not.
    """
    unit = generators / np.linalg.norm(generators, axis=2, keepdims=True)
    diff = np.linalg.norm(unit[:, :, None, :] - unit[:, None, :, :], axis=3)
    total = np.linalg.norm(unit[:, :, None, :] + unit[:, None, :, :], axis=3)
    return 2.0 * np.arctan2(diff, total)


def _widest_pairs(generators: GeneratorStack) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Widest angle per cone and the generator pair realizing it (lowest pair on ties)."""
    m, d, _ = generators.shape
    if d == 1:
        zeros = np.zeros(m, dtype=np.int64)
        return np.zeros(m), zeros, zeros
    rows, cols = np.triu_indices(d, k=1)
    angles = pairwise_generator_angles(generators)[:, rows, cols]
    best = np.argmax(angles, axis=1)
    return angles[np.arange(m), best], rows[best], cols[best]


@dataclass(frozen=True, eq=False)
class Cone:
    """One simplicial cone R_{d,alpha,i} of a covering, with its apex at the origin.

    Args:
        alpha (SignVector):
            The orthant the cone lies in.

        ordinal (int):
            Index of the cone inside its orthant.

        matrix (numpy.ndarray[d, d]):
            Membership matrix A: x is in the cone at apex s iff A (x - s) >= 0.

        generators (numpy.ndarray[d, d]):
            Unit generator directions, one per row. A times the
            column matrix of generators is the identity.
    """

    alpha: SignVector
    ordinal: int
    matrix: ConeMatrix
    generators: GeneratorMatrix

    def __post_init__(self) -> None:
        d = self.alpha.dim
        matrix = _read_only(self.matrix)
        generators = _read_only(self.generators)
        if matrix.shape != (d, d) or generators.shape != (d, d):
            raise InstanceError(
                f"Cone of dimension {d} needs {d}x{d} matrix and generators, "
                f"got {matrix.shape} and {generators.shape}."
            )
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "generators", generators)

    @property
    def dim(self) -> int:
        """Dimension of the ambient space."""
        return self.alpha.dim

    def max_generator_angle(self) -> float:
        """Largest angle between two generators, in radians."""
        widest, _, _ = _widest_pairs(self.generators[None])
        return float(widest[0])

    def duality_error(self) -> float:
        """max |A E - I| over all entries."""
        product = self.matrix @ self.generators.T
        return float(np.abs(product - np.eye(self.dim)).max())

    def contains(
        self, apex: Point | Sequence[float], x: Point | Sequence[float], eps: float | None = None
    ) -> bool:
        """See `contains`."""
        return contains(self, apex, x, eps)

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready representation used by the cone dump."""
        return {
            "alpha": list(self.alpha.signs),
            "ordinal": self.ordinal,
            "matrix": self.matrix.tolist(),
            "generators": self.generators.tolist(),
        }


def _vector(value: Point | Sequence[float] | np.ndarray) -> Coordinates:
    if isinstance(value, Point):
        return value.as_array()
    return np.asarray(value, dtype=np.float64)


def contains(
    c: Cone,
    apex: Point | Sequence[float],
    x: Point | Sequence[float],
    eps: float | None = None,
) -> bool:
    """Whether `x` lies in cone `c` translated to `apex`.

    Membership is inclusive: every row r must satisfy <A_r, x - apex> >= -eps,
    so points on a shared boundary belong to all adjacent cones.

    Args:
        c (Cone):
            The cone.

        apex (Point | Sequence[float]):
            Where the cone is anchored.

        x (Point | Sequence[float]):
            The point to test.

        eps (float | None, optional):
            Tolerance. Defaults to 1e-9 * max(1, |x - apex|_inf).
    """
    target, origin = _vector(x), _vector(apex)
    if target.shape != (c.dim,) or origin.shape != (c.dim,):
        raise InstanceError(f"Dimension mismatch: cone has {c.dim}, got {origin.shape} and {target.shape}.")
    offset = target - origin
    if eps is None:
        eps = RELATIVE_EPS * max(1.0, float(np.abs(offset).max(initial=0.0)))
    return bool(np.all(c.matrix @ offset >= -eps))


@dataclass(frozen=True, eq=False)
class ConeFamily:
    """A covering of R^d by simplicial cones, k per orthant.

    Only the positive orthant is stored. The cone (alpha, i) is the
    positive cone i with coordinates sign-flipped by alpha, so its matrix
    is the positive matrix with columns scaled by alpha and the matrix of
    (-alpha, i) is exactly the negation of the matrix of (alpha, i).

    Args:
        d (int):
            Dimension.

        positive_generators (numpy.ndarray[k, d, d]):
            Generators of the positive-orthant cones, one row per generator.

        positive_matrices (numpy.ndarray[k, d, d]):
            Membership matrices of the positive-orthant cones.

        name (str):
            Family tag, `yao` or `octant2d`.
    """

    d: int
    positive_generators: GeneratorStack
    positive_matrices: ConeMatrixStack
    name: str = FamilyName.yao.value

    def __post_init__(self) -> None:
        generators = _read_only(self.positive_generators).reshape(-1, self.d, self.d)
        matrices = _read_only(self.positive_matrices).reshape(-1, self.d, self.d)
        if generators.shape != matrices.shape:
            raise InstanceError(
                f"Generator stack {generators.shape} and matrix stack {matrices.shape} differ."
            )
        object.__setattr__(self, "positive_generators", generators)
        object.__setattr__(self, "positive_matrices", matrices)

    @property
    def cones_per_orthant(self) -> int:
        """k_d, the number of cones in each orthant."""
        return int(self.positive_matrices.shape[0])

    def __len__(self) -> int:
        return (2**self.d) * self.cones_per_orthant

    def _sign_columns(self, alpha: SignVector) -> np.ndarray:
        if alpha.dim != self.d:
            raise InstanceError(f"Sign vector of dimension {alpha.dim} for a family of dimension {self.d}.")
        return alpha.as_array().astype(np.float64)[None, None, :]

    def matrices(self, alpha: SignVector) -> ConeMatrixStack:
        """Membership matrices of every cone of orthant `alpha`, shape (k, d, d)."""
        return self.positive_matrices * self._sign_columns(alpha)

    def generators(self, alpha: SignVector) -> GeneratorStack:
        """Generators of every cone of orthant `alpha`, shape (k, d, d)."""
        return self.positive_generators * self._sign_columns(alpha)

    def cone(self, alpha: SignVector, ordinal: int) -> Cone:
        """The cone (alpha, ordinal)."""
        if not 0 <= ordinal < self.cones_per_orthant:
            raise ConfigurationError(
                f"Cone ordinal {ordinal} outside [0, {self.cones_per_orthant}) for family '{self.name}'."
            )
        signs = self._sign_columns(alpha)[0]
        return Cone(
            alpha=alpha,
            ordinal=ordinal,
            matrix=self.positive_matrices[ordinal] * signs,
            generators=self.positive_generators[ordinal] * signs,
        )

    def orthant(self, alpha: SignVector) -> tuple[Cone, ...]:
        """All cones of orthant `alpha` in ordinal order."""
        return tuple(self.cone(alpha, i) for i in range(self.cones_per_orthant))

    @cached_property
    def cones(self) -> tuple[Cone, ...]:
        """Every cone, grouped by orthant in `SignVector.all` order."""
        return tuple(cone for alpha in SignVector.all(self.d) for cone in self.orthant(alpha))

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready cone dump: {"d", "k", "cones"}."""
        return {
            "d": self.d,
            "k": self.cones_per_orthant,
            "cones": [cone.to_dict() for cone in self.cones],
        }


def _subdivide_positive_orthant(
    d: int,
    threshold: float,
    max_cones: int,
    max_depth: int | None = None,
) -> GeneratorStack:
    """Split the positive orthant until every cone is narrower than `threshold`.

    A cone is split by the normalized barycentric direction of its widest
    generator pair: child 0 replaces the lower-index generator of the pair,
    child 1 the higher-index one. Cones are processed level by level and the
    leaves are returned in depth-first preorder.
    """
    active = np.eye(d)[None]
    paths: list[tuple[int, ...]] = [()]
    leaves: list[np.ndarray] = []
    leaf_paths: list[tuple[int, ...]] = []
    n_leaves = 0
    depth = 0

    while len(paths):
        widest, first, second = _widest_pairs(active)
        done = widest < threshold
        if max_depth is not None and depth >= max_depth:
            done[:] = True

        if done.any():
            leaves.append(active[done])
            leaf_paths.extend(p for p, stop in zip(paths, done) if stop)
            n_leaves += int(done.sum())

        split = ~done
        if not split.any():
            break

        parents = active[split]
        first, second = first[split], second[split]
        rows = np.arange(parents.shape[0])
        midpoint = parents[rows, first] + parents[rows, second]
        midpoint /= np.linalg.norm(midpoint, axis=1, keepdims=True)

        lower = parents.copy()
        lower[rows, first] = midpoint
        upper = parents.copy()
        upper[rows, second] = midpoint

        active = np.stack([lower, upper], axis=1).reshape(-1, d, d)
        paths = [p + (child,) for p, stop in zip(paths, done) if not stop for child in (0, 1)]
        depth += 1

        if n_leaves + len(paths) > max_cones:
            raise ConfigurationError(
                f"Cone family for d={d} exceeds {max_cones:,d} cones per orthant at depth {depth}. "
                "Raise max_cones_per_orthant to build it anyway."
            )

    order = sorted(range(len(leaf_paths)), key=leaf_paths.__getitem__)
    return np.concatenate(leaves)[order]


def _invert_generators(generators: GeneratorStack) -> ConeMatrixStack:
    columns = generators.transpose(0, 2, 1)
    try:
        matrices = np.linalg.inv(columns)
    except np.linalg.LinAlgError as e:
        raise AssertionError("Singular generator matrix in cone subdivision.") from e

    error = np.abs(matrices @ columns - np.eye(generators.shape[1])[None]).max(initial=0.0)
    assert error <= MATRIX_TOLERANCE, f"A*E deviates from identity by {error:.3e}."
    return matrices


@lru_cache(maxsize=16)
def _yao_positive_orthant(d: int, max_cones: int) -> tuple[GeneratorStack, ConeMatrixStack]:
    threshold = angle_threshold(d)
    generators = _subdivide_positive_orthant(d, threshold, max_cones)
    widest, _, _ = _widest_pairs(generators)
    assert np.all(widest < threshold), "Angle criterion violated after subdivision."
    return generators, _invert_generators(generators)


def build_family(
    d: int,
    d_max: int = DEFAULT_D_MAX,
    allow_large_dim: bool = False,
    max_cones_per_orthant: int = DEFAULT_MAX_CONES_PER_ORTHANT,
) -> ConeFamily:
    """Build the covering of R^d by narrow simplicial cones.

    Starting from the unit axes of the positive orthant, cones are split
    until the widest pair of generators is narrower than
    arcsin(1 / (2 * d^(3/2))). Other orthants are sign flips of the positive one.

    Args:
        d (int):
            Dimension, 1 <= d <= d_max.

        d_max (int, optional):
            Largest dimension accepted without `allow_large_dim`.

        allow_large_dim (bool, optional):
            Accept d > d_max.

        max_cones_per_orthant (int, optional):
            Abort with `ConfigurationError` once the subdivision needs more cones.

    Raises:
        ConfigurationError: If d is out of range or the cone budget is exceeded.
    """
    if d < 1 or (d > d_max and not allow_large_dim):
        raise ConfigurationError(
            f"Dimension {d} is outside [1, {d_max}]. Use allow_large_dim to build larger families."
        )
    generators, matrices = _yao_positive_orthant(d, max_cones_per_orthant)
    family = ConeFamily(
        d=d, positive_generators=generators, positive_matrices=matrices, name=FamilyName.yao.value
    )
    logger.info(
        f"Built yao family for d={d}: k={family.cones_per_orthant:,d} cones per orthant, "
        f"{len(family):,d} in total."
    )
    return family


@lru_cache(maxsize=1)
def octant_family_2d() -> ConeFamily:
    """The classical 8-cone family of 45 degree half-quadrants for d=2."""
    generators = _subdivide_positive_orthant(2, threshold=0.0, max_cones=2, max_depth=1)
    return ConeFamily(
        d=2,
        positive_generators=generators,
        positive_matrices=_invert_generators(generators),
        name=FamilyName.octant2d.value,
    )
