from __future__ import annotations

from enum import Enum

DEFAULT_D_MAX = 6
DEFAULT_MAX_CONES_PER_ORTHANT = 1_000_000

# Relative tolerance for cone membership and dominance comparisons
RELATIVE_EPS = 1e-9
# Absolute tolerance for A·E = I on every built cone
MATRIX_TOLERANCE = 1e-9
# Proximity margins below this (relative to the sample scale) count as violations
PROXIMITY_TOLERANCE = 1e-9

# Bucket size below which range tree nodes are scanned directly
RANGE_TREE_LEAF_SIZE = 16

# Upper bound on stacked array elements per batched sweep chunk
BATCHED_CHUNK_ELEMENTS = 4_000_000

MAX_REPORTED_UNCOVERED = 10

BENCH_COLUMNS = ["d", "n", "backend", "median_ms", "edges"]


class FamilyName(str, Enum):
    """Cone families the pipeline can build."""

    yao = "yao"
    octant2d = "octant2d"


class Backend(str, Enum):
    """Dominance search backends used by the sweep."""

    tree = "tree"
    reference = "reference"
    batched = "batched"


class Command(str, Enum):
    """CLI commands carried by a RunConfig."""

    mst = "mst"
    cones = "cones"
    verify = "verify"
    bench = "bench"


class ExitCode(int, Enum):
    """Process exit codes."""

    SUCCESS = 0
    VERIFICATION_FAILURE = 1
    USAGE_ERROR = 2


DEFAULT_FAILURE_DIR = "verify_failures"

TOTAL_LABEL = "total"
