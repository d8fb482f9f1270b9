"""Complete-linkage agglomerative clustering with a deterministic cut."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gnnscope import _kernels
from gnnscope.analysis.planes import distance_matrix
from gnnscope.metrics import MetricsTable


@dataclass(frozen=True)
class ClusterResult:
    """Partition of the input ids plus the merge trace that produced it.

    ``clusters`` lists member-id tuples sorted internally, ordered by their
    smallest member.  ``merges``/``heights`` describe the full dendrogram in
    positional (0..m-1) indices: each merge joins the two clusters currently
    represented by those positions, the smaller index surviving.
    """

    ids: tuple[int, ...]
    clusters: tuple[tuple[int, ...], ...]
    merges: np.ndarray
    heights: np.ndarray

    @property
    def labels(self) -> np.ndarray:
        """Cluster index per input position."""
        pos = {v: i for i, v in enumerate(self.ids)}
        out = np.empty(len(self.ids), dtype=np.int64)
        for ci, members in enumerate(self.clusters):
            for m in members:
                out[pos[m]] = ci
        return out


def partition_from_merges(count: int, merges: np.ndarray, target: int) -> list[list[int]]:
    """Replay merges until ``target`` clusters remain; positional members."""
    members: dict[int, list[int]] = {i: [i] for i in range(count)}
    for a, b in merges:
        if len(members) <= target:
            break
        members[int(a)].extend(members.pop(int(b)))
    return [sorted(members[k]) for k in sorted(members)]


def cluster_distances(dist: np.ndarray, target_clusters: int) -> tuple[list[list[int]], np.ndarray, np.ndarray]:
    """Complete-linkage clustering of a dense distance matrix.

    Ties at any merge step resolve to the lexicographically smallest pair of
    cluster representatives, a cluster being represented by its smallest
    positional member.  Returns (clusters, merges, heights) with clusters in
    positional indices.
    """
    dist = np.asarray(dist, dtype=np.float64)
    m = dist.shape[0]
    if m == 0:
        raise ValueError("cannot cluster an empty set")
    if not 1 <= target_clusters <= m:
        raise ValueError(f"target_clusters {target_clusters} outside 1..{m}")
    if not np.isfinite(dist).all():
        raise ValueError("distances must be finite")
    merges, heights = _kernels.complete_linkage(dist)
    return partition_from_merges(m, merges, target_clusters), merges, heights


def cluster(
    table: MetricsTable,
    plane: str,
    ids,
    target_clusters: int,
    max_degree: int | None = None,
) -> ClusterResult:
    """Cluster a row subset on one plane's distances.

    Rows are taken in ascending node-id order so that the documented
    tie-break (lexicographic by smallest member id) is about node ids, not
    about the order the selection happened to arrive in.
    """
    ids = np.unique(np.asarray(ids, dtype=np.int64))
    dist = distance_matrix(plane, table, ids, max_degree)
    parts, merges, heights = cluster_distances(dist, target_clusters)
    clusters = tuple(tuple(int(ids[p]) for p in part) for part in parts)
    return ClusterResult(
        ids=tuple(int(i) for i in ids),
        clusters=clusters,
        merges=merges,
        heights=heights,
    )
