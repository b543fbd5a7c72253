from yaosweep.index.factory import build, build_from_arrays, index_class
from yaosweep.index.interfaces import DominanceIndex, TransformedPoint
from yaosweep.index.range_tree import RangeTreeIndex
from yaosweep.index.reference import ReferenceIndex

__all__ = [
    "DominanceIndex",
    "RangeTreeIndex",
    "ReferenceIndex",
    "TransformedPoint",
    "build",
    "build_from_arrays",
    "index_class",
]
