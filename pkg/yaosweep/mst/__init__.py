from yaosweep.mst.kruskal import DisjointSetUnion, MstResult, kruskal
from yaosweep.mst.oracle import prim_dense_oracle

__all__ = ["DisjointSetUnion", "MstResult", "kruskal", "prim_dense_oracle"]
