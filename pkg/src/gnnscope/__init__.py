"""gnnscope: an error-diagnosis workbench for graph neural networks.

Trains a GNN alongside two proxy models (structure-only and feature-only),
computes a per-node diagnostic metric table, turns the table into view-ready
clusterings, projections and layouts, and serves everything over a small
read-only HTTP API for the companion UI.
"""

__version__ = "0.1.0"

from gnnscope.graph_store import (
    Dataset,
    DatasetFormatError,
    DatasetValidationError,
    load_dataset,
    subset_mask,
    synthesize,
)

__all__ = [
    "Dataset",
    "DatasetFormatError",
    "DatasetValidationError",
    "load_dataset",
    "subset_mask",
    "synthesize",
    "__version__",
]
