from __future__ import annotations

import numpy as np

from yaosweep.constants import BATCHED_CHUNK_ELEMENTS, RELATIVE_EPS
from yaosweep.types import ConeMatrixStack, IndexArray, PointArray


def anchored(coords: PointArray) -> PointArray:
    """Translate the points so their coordinate-wise minimum is the origin.

    Exact for integer coordinates up to 2^50. Sweep orders, transforms and
    tolerances are all computed on anchored points.
    """
    if coords.shape[0] == 0:
        return coords
    return coords - coords.min(axis=0)


def pass_eps(transformed: np.ndarray) -> np.ndarray:
    """Inclusive membership tolerance per pass: 1e-9 * max(1, max |x'|).

    `transformed` has shape (..., n, d); the result drops the last two axes.
    """
    if transformed.shape[-2] == 0:
        return np.full(transformed.shape[:-2], RELATIVE_EPS)
    return RELATIVE_EPS * np.maximum(1.0, np.abs(transformed).max(axis=(-2, -1)))


def lockstep_sweep(
    coords: PointArray,
    matrices: ConeMatrixStack,
    order: IndexArray,
    rank: IndexArray,
) -> tuple[IndexArray, IndexArray]:
    """Run the linear-scan sweep for a stack of cones at once.

    Every cone c transforms the points by `matrices[c]` and keeps its own
    live mask. For each s in `order`, the live points dominating s' in cone c
    (excluding s) are extracted, and the one with the highest `rank` becomes
    the partner of s. The result is identical to running one reference pass
    per cone.

    Args:
        coords (numpy.ndarray[n, d]):
            Point coordinates.

        matrices (numpy.ndarray[k, d, d]):
            Membership matrices of the backward cones.

        order (numpy.ndarray[n]):
            Rows in ascending sweep order.

        rank (numpy.ndarray[n]):
            Inverse of `order`.

    Returns:
        tuple[numpy.ndarray, numpy.ndarray]: Edge endpoints (s, partner), unsorted.
    """
    coords = anchored(coords)
    n, d = coords.shape
    chunk = max(1, BATCHED_CHUNK_ELEMENTS // max(1, n * d))
    sources: list[np.ndarray] = []
    targets: list[np.ndarray] = []

    for start in range(0, matrices.shape[0], chunk):
        stack = matrices[start : start + chunk]
        transformed = np.einsum("kij,nj->kni", stack, coords)
        lower_shift = pass_eps(transformed)[:, None]
        live = np.ones((stack.shape[0], n), dtype=bool)

        for s in order.tolist():
            lower = transformed[:, s, :] - lower_shift
            dominating = live & np.all(transformed >= lower[:, None, :], axis=2)
            dominating[:, s] = False
            found = dominating.any(axis=1)
            if not found.any():
                continue
            partner = np.argmax(np.where(dominating, rank[None, :], -1), axis=1)[found]
            sources.append(np.full(partner.size, s, dtype=np.int64))
            targets.append(partner.astype(np.int64))
            live &= ~dominating

    if not sources:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty
    return np.concatenate(sources), np.concatenate(targets)
