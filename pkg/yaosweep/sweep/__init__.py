from yaosweep.sweep.batched import lockstep_sweep
from yaosweep.sweep.builder import (
    CandidateEdge,
    PassConfig,
    build_candidate_graph,
    candidate_arrays,
    merge_edges,
    nearest_in_extracted,
    run_pass,
)

__all__ = [
    "CandidateEdge",
    "PassConfig",
    "build_candidate_graph",
    "candidate_arrays",
    "lockstep_sweep",
    "merge_edges",
    "nearest_in_extracted",
    "run_pass",
]
