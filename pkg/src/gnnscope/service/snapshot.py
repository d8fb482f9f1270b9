"""The immutable unit a service instance exposes: one dataset, one trained
bundle, the metric table, and the cached geometry derived from them.

All per-stage randomness fans out from the snapshot's root seed with fixed
labels, so the batch `report` command and a live service produce identical
geometry for identical inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

import gnnscope
from gnnscope.analysis import BinningSpec, default_binning_spec, graph_layout
from gnnscope.graph_store import Dataset
from gnnscope.metrics import DEFAULT_TOP_K, MetricsTable, compute_table
from gnnscope.models import TrainedModel
from gnnscope.seeding import subseed

LAYOUT_LABEL = "layout"


def layout_seed(seed: int) -> int:
    return subseed(seed, LAYOUT_LABEL)


def projection_seed(seed: int, plane: str) -> int:
    return subseed(seed, f"projection:{plane}")


@dataclass(frozen=True)
class Snapshot:
    dataset: Dataset
    bundle: Mapping[str, TrainedModel]
    table: MetricsTable
    layout: np.ndarray
    binning: BinningSpec = field(default_factory=default_binning_spec)
    seed: int = 0
    version: str = gnnscope.__version__


def build_snapshot(
    dataset: Dataset,
    bundle: Mapping[str, TrainedModel],
    k: int = DEFAULT_TOP_K,
    seed: int = 0,
) -> Snapshot:
    """Assemble a snapshot, computing the metric table and graph layout."""
    table = compute_table(
        dataset,
        {role: model.predictions for role, model in bundle.items()},
        k=k,
    )
    layout = graph_layout(dataset, seed=layout_seed(seed))
    layout.setflags(write=False)
    return Snapshot(
        dataset=dataset,
        bundle=dict(bundle),
        table=table,
        layout=layout,
        binning=default_binning_spec(),
        seed=seed,
    )
