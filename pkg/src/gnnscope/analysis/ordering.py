"""Row and column orderings for the feature matrix.

Rows (nodes) are ordered by complete-linkage clustering on cosine feature
distance with optimal leaf ordering: among all leaf orders consistent with
the dendrogram (each cluster's leaves contiguous, children may flip), the
one minimizing the summed distance between consecutive leaves.  Columns
(feature dimensions) keep their natural order, or in frequency mode are
sorted by support rate among nodes sharing the reference node's prediction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gnnscope import _kernels
from gnnscope.metrics import MetricsTable

SIMILAR_COSINE = 0.95

MODES = ("node_order", "frequency")


def cosine_similarity_matrix(X: np.ndarray) -> np.ndarray:
    """Pairwise cosine similarity; rows with zero norm score 0 everywhere."""
    X = np.asarray(X, dtype=np.float64)
    norms = np.sqrt(np.einsum("ij,ij->i", X, X))
    safe = np.where(norms > 0.0, norms, 1.0)
    S = (X @ X.T) / np.outer(safe, safe)
    S[norms == 0.0, :] = 0.0
    S[:, norms == 0.0] = 0.0
    return np.clip(S, -1.0, 1.0)


class _Subtree:
    """Dendrogram node carrying the leaf-order DP table.

    ``leaves`` lists positional leaf indices; ``M[i, j]`` is the minimal
    summed consecutive distance of an ordering of this subtree's leaves
    starting at leaves[i] and ending at leaves[j] (inf where no consistent
    ordering has those endpoints).
    """

    __slots__ = ("leaves", "M", "left", "right", "best_v", "best_x")

    def __init__(self, leaves, M, left=None, right=None, best_v=None, best_x=None):
        self.leaves = leaves
        self.M = M
        self.left = left
        self.right = right
        self.best_v = best_v
        self.best_x = best_x


def _combine(left: _Subtree, right: _Subtree, dist: np.ndarray) -> _Subtree:
    la, lb = len(left.leaves), len(right.leaves)
    d_ab = dist[np.ix_(left.leaves, right.leaves)]
    m = la + lb
    M = np.full((m, m), np.inf)
    best_v = np.empty((la, lb), dtype=np.int64)
    best_x = np.empty((la, lb), dtype=np.int64)
    for u in range(la):
        # min over v of (cost u..v inside left) + d(v, x), for each x
        via_v = left.M[u][:, None] + d_ab
        v_pick = np.argmin(via_v, axis=0)
        tmp = via_v[v_pick, np.arange(lb)]
        # then min over x of tmp[x] + (cost x..w inside right), for each w
        via_x = tmp[:, None] + right.M
        x_pick = np.argmin(via_x, axis=0)
        row = via_x[x_pick, np.arange(lb)]
        M[u, la:] = row
        M[la:, u] = row
        best_x[u] = x_pick
        best_v[u] = v_pick[x_pick]
    return _Subtree(left.leaves + right.leaves, M, left, right, best_v, best_x)


def _walk(tree: _Subtree, u: int, w: int) -> list[int]:
    """Reconstruct the optimal ordering of ``tree`` from leaf u to leaf w."""
    if tree.left is None:
        return [tree.leaves[0]]
    la = len(tree.left.leaves)
    left_pos = {leaf: i for i, leaf in enumerate(tree.left.leaves)}
    right_pos = {leaf: i for i, leaf in enumerate(tree.right.leaves)}
    if u in left_pos and w in right_pos:
        ui, wi = left_pos[u], right_pos[w]
        v = tree.left.leaves[tree.best_v[ui, wi]]
        x = tree.right.leaves[tree.best_x[ui, wi]]
        return _walk(tree.left, u, v) + _walk(tree.right, x, w)
    # Reverse orientation: mirror of the stored (left-start, right-end) case.
    return list(reversed(_walk(tree, w, u)))


def optimal_leaf_order(merges: np.ndarray, dist: np.ndarray) -> list[int]:
    """Best dendrogram-consistent leaf order for a merge trace.

    ``merges`` follows the clustering kernel's convention (positional
    representatives, smaller index survives).  Returns positional indices.
    """
    n = dist.shape[0]
    if n == 1:
        return [0]
    trees: dict[int, _Subtree] = {
        i: _Subtree([i], np.zeros((1, 1))) for i in range(n)
    }
    for a, b in merges:
        trees[int(a)] = _combine(trees[int(a)], trees[int(b)], dist)
        del trees[int(b)]
    root = trees[min(trees)]
    flat = int(np.argmin(root.M))
    ui, wi = divmod(flat, len(root.leaves))
    return _walk(root, root.leaves[ui], root.leaves[wi])


def ordering_cost(order, dist: np.ndarray) -> float:
    order = list(order)
    return float(
        sum(dist[order[i], order[i + 1]] for i in range(len(order) - 1))
    )


def _frequency_order(X: np.ndarray, same_pred: np.ndarray) -> list[int]:
    present = X > 0.0
    support_all = present.sum(axis=0)
    support_pred = (present & same_pred[:, None]).sum(axis=0)
    dims = X.shape[1]
    keys = []
    for d in range(dims):
        n_d = int(support_all[d])
        if n_d == 0:
            keys.append((1, 0.0, 0, d))  # empty dimensions sort last
        else:
            rate = support_pred[d] / n_d
            keys.append((0, -rate, -n_d, d))
    return [k[3] for k in sorted(keys)]


@dataclass(frozen=True)
class FeatureOrdering:
    node_ids: tuple[int, ...]
    dimension_order: tuple[int, ...]
    similar_pairs: tuple[bool, ...]
    mode: str
    reference_node: int | None


def order_features(
    dataset,
    table: MetricsTable,
    ids,
    mode: str = "node_order",
    reference_node: int | None = None,
    seriate: bool = True,
) -> FeatureOrdering:
    """Order a selection's rows and the feature dimensions for display.

    Rows get the clustered-and-seriated order; the mode only decides the
    column order.  ``reference_node`` (frequency mode) defaults to the
    first id of the selection as given.  ``seriate=False`` skips the cubic
    leaf-ordering pass and keeps rows in ascending id order, for callers
    with selections too large to seriate interactively.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    given = [int(i) for i in ids]
    if not given:
        raise ValueError("selection must not be empty")
    uniq = np.unique(np.asarray(given, dtype=np.int64))
    if uniq[0] < 0 or uniq[-1] >= dataset.node_count:
        raise ValueError("selection node id out of range")

    X = dataset.features[uniq]
    sims = cosine_similarity_matrix(X)
    dist = 1.0 - sims
    np.fill_diagonal(dist, 0.0)
    if uniq.size == 1 or not seriate:
        order = list(range(uniq.size))
    else:
        merges, _ = _kernels.complete_linkage(dist)
        order = optimal_leaf_order(merges, dist)
    node_ids = tuple(int(uniq[p]) for p in order)
    similar = tuple(
        bool(sims[order[i], order[i + 1]] >= SIMILAR_COSINE)
        for i in range(len(order) - 1)
    )

    if mode == "node_order":
        dim_order = tuple(range(dataset.feature_dim))
        reference = None
    else:
        reference = given[0] if reference_node is None else int(reference_node)
        if not 0 <= reference < dataset.node_count:
            raise ValueError("reference node id out of range")
        same_pred = table.p1[uniq] == table.p1[reference]
        dim_order = tuple(_frequency_order(X, same_pred))

    return FeatureOrdering(
        node_ids=node_ids,
        dimension_order=dim_order,
        similar_pairs=similar,
        mode=mode,
        reference_node=reference,
    )
