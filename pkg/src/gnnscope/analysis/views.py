"""Assembled projection-plane views: distances, optional clustering,
embedding, glyph radii, and collision resolution in one call.

Detail mode shows one glyph per selected node.  Cluster mode groups the
selection first (complete linkage on the plane distance) and shows one
glyph per cluster, embedded from the aggregated records and sized by the
square root of the cluster size.  Auto mode picks cluster once a selection
outgrows CLUSTER_THRESHOLD members.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gnnscope.analysis.aggregate import aggregate_cluster
from gnnscope.analysis.clustering import cluster
from gnnscope.analysis.layout import resolve_overlap
from gnnscope.analysis.planes import (
    aggregate_distance_matrix,
    distance_matrix,
    max_degree_of,
)
from gnnscope.analysis.projection import (
    DEFAULT_ITERATIONS,
    DEFAULT_PERPLEXITY,
    project_distances,
)
from gnnscope.metrics import MetricsTable

CLUSTER_THRESHOLD = 300
DEFAULT_TARGET_CLUSTERS = 50

# Glyph sizes relative to the embedding extent.
DETAIL_RADIUS_FRACTION = 0.01
CLUSTER_RADIUS_FRACTION = 0.05

MODES = ("auto", "detail", "cluster")


@dataclass(frozen=True)
class ProjectionPlane:
    """A plane view ready to draw.

    ``coords``/``radii`` are per glyph: aligned with ``member_ids`` in
    detail mode, with ``clusters`` in cluster mode.  Cluster records are
    the aggregate dicts (including their ``member_ids``).
    """

    plane: str
    mode: str
    member_ids: tuple[int, ...]
    coords: np.ndarray
    radii: np.ndarray
    clusters: tuple[dict, ...] | None


def _extent(coords: np.ndarray) -> float:
    if coords.shape[0] < 2:
        return 1.0
    spans = coords.max(axis=0) - coords.min(axis=0)
    return float(max(spans[0], spans[1], 1e-9))


def projection_plane(
    table: MetricsTable,
    plane: str,
    ids,
    mode: str = "auto",
    target_clusters: int = DEFAULT_TARGET_CLUSTERS,
    perplexity: float = DEFAULT_PERPLEXITY,
    seed: int = 0,
    iterations: int = DEFAULT_ITERATIONS,
) -> ProjectionPlane:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    ids = np.unique(np.asarray(list(ids), dtype=np.int64))
    if ids.size == 0:
        raise ValueError("selection must not be empty")
    if mode == "auto":
        mode = "cluster" if ids.size > CLUSTER_THRESHOLD else "detail"
    member_ids = tuple(int(i) for i in ids)
    max_degree = max_degree_of(table)

    if mode == "detail":
        if ids.size == 1:
            coords = np.zeros((1, 2))
        else:
            D = distance_matrix(plane, table, ids, max_degree)
            coords = project_distances(D, perplexity, seed, iterations)
        radii = np.full(ids.size, DETAIL_RADIUS_FRACTION * _extent(coords))
        return ProjectionPlane(
            plane=plane,
            mode="detail",
            member_ids=member_ids,
            coords=resolve_overlap(coords, radii),
            radii=radii,
            clusters=None,
        )

    target = min(target_clusters, ids.size)
    result = cluster(table, plane, ids, target, max_degree)
    aggregates = tuple(
        aggregate_cluster(table, members, max_degree) for members in result.clusters
    )
    if len(aggregates) == 1:
        coords = np.zeros((1, 2))
    else:
        D = aggregate_distance_matrix(plane, aggregates)
        coords = project_distances(D, perplexity, seed, iterations)
    scale = max(np.sqrt(a["size"]) for a in aggregates)
    radii = np.array(
        [np.sqrt(a["size"]) / scale for a in aggregates]
    ) * CLUSTER_RADIUS_FRACTION * _extent(coords)
    return ProjectionPlane(
        plane=plane,
        mode="cluster",
        member_ids=member_ids,
        coords=resolve_overlap(coords, radii),
        radii=radii,
        clusters=aggregates,
    )
