"""Capital-control chains between cities.

Thin Python layer over the C++ core in ``chainscope._core``.
"""

from ._core import (
    ChainscopeError,
    Dataset,
    ValidationError,
    __version__,
    betweenness,
    betweenness_oracle,
    build_chains,
    centrality,
    classify_structure,
    export_city_graph,
    fit_ca,
    generate_fixture,
    load_dataset,
    run_pipeline,
    write_dataset,
)

__all__ = [
    "ChainscopeError",
    "Dataset",
    "ValidationError",
    "__version__",
    "betweenness",
    "betweenness_oracle",
    "build_chains",
    "centrality",
    "classify_structure",
    "export_city_graph",
    "fit_ca",
    "generate_fixture",
    "load_dataset",
    "run_pipeline",
    "write_dataset",
]
