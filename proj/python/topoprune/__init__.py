"""Topological variable pruning for multivariate time series.

Correlations between variables become distances, persistent homology over the
Vietoris-Rips filtration picks a connectivity scale from the median death
time, isolated variables are pruned, and sheaf consistency values over the
remaining complex can be appended as extra feature channels.
"""

from ._topoprune import (
    Dataset,
    DegenerateError,
    PruneResult,
    ValidationError,
    barcode,
    betti_numbers,
    correlation,
    correlation_to_distance,
    distance,
    evaluate,
    load_dataset,
    make_dataset,
    optimal_epsilon,
    persistent_betti,
    prune,
    sheaf_delta,
    sheaf_features,
    vietoris_rips,
    __version__,
)

__all__ = [
    "Dataset",
    "DegenerateError",
    "PruneResult",
    "ValidationError",
    "barcode",
    "betti_numbers",
    "correlation",
    "correlation_to_distance",
    "distance",
    "evaluate",
    "load_dataset",
    "make_dataset",
    "optimal_epsilon",
    "persistent_betti",
    "prune",
    "sheaf_delta",
    "sheaf_features",
    "vietoris_rips",
    "__version__",
]
