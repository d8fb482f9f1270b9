"""Per-node diagnostic metrics over a dataset and the trio's predictions.

Every node gets one row: ground truth, the three model predictions with
correctness flags, prediction confidence, degree, the four center-neighbor
consistency rates, BFS distance to the nearest training node with the label
spread at that distance, a closeness score, the top-k feature-similar
training nodes with their label spread, and dominant-label verdicts.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from gnnscope import _kernels
from gnnscope.models.spec import PredictionSet

ROLES = ("gnn", "structure", "feature")
VERDICT_TRUE = "True"
VERDICT_FALSE = "False"
VERDICT_NOT_SURE = "NotSure"

DEFAULT_TOP_K = 5


def center_neighbor_consistency(dataset, predictions: np.ndarray, node: int) -> np.ndarray:
    """The four neighborhood agreement rates for one node.

    Components: fraction of neighbors whose (ground truth, prediction,
    ground truth, prediction) equals the node's (ground truth, ground
    truth, prediction, prediction) respectively.  Zero-degree nodes get
    all-zero rates.
    """
    nbrs = dataset.neighbors(node)
    if nbrs.size == 0:
        return np.zeros(4)
    gt = dataset.labels
    p = np.asarray(predictions)
    return np.array(
        [
            np.mean(gt[nbrs] == gt[node]),
            np.mean(p[nbrs] == gt[node]),
            np.mean(gt[nbrs] == p[node]),
            np.mean(p[nbrs] == p[node]),
        ]
    )


def distance_to_training(dataset, node: int) -> tuple[float, np.ndarray]:
    """BFS depth of the nearest training node (the node itself counts at
    depth 0) and the normalized label frequencies of all training nodes at
    that depth.  Unreachable: (inf, all-zero vector)."""
    depths = _kernels.bfs_depths(dataset.indptr, dataset.indices, np.array([node]))
    train = np.flatnonzero(dataset.train_mask)
    reach = depths[train]
    hit = reach[reach >= 0]
    spd = np.zeros(dataset.class_count)
    if hit.size == 0:
        return float("inf"), spd
    dis = int(hit.min())
    at = train[reach == dis]
    counts = np.bincount(dataset.labels[at], minlength=dataset.class_count)
    return float(dis), counts / counts.sum()


def dominant_consistency(distribution: np.ndarray, reference_label: int) -> str:
    """Whether the distribution's single most frequent label matches the
    reference: True/False, or NotSure when the maximum is tied or the
    distribution is all zero."""
    d = np.asarray(distribution, dtype=np.float64)
    top = d.max()
    if top <= 0.0:
        return VERDICT_NOT_SURE
    winners = np.flatnonzero(d == top)
    if winners.size > 1:
        return VERDICT_NOT_SURE
    return VERDICT_TRUE if int(winners[0]) == int(reference_label) else VERDICT_FALSE


def _cosine_to_training(dataset, node: int) -> np.ndarray:
    """Cosine similarity of the node's features to every training node's,
    with zero-vector similarity defined as 0."""
    train = np.flatnonzero(dataset.train_mask)
    F = dataset.features
    q = F[node]
    qn = np.linalg.norm(q)
    tn = np.linalg.norm(F[train], axis=1)
    sims = np.zeros(train.shape[0])
    ok = tn > 0.0
    if qn > 0.0:
        sims[ok] = (F[train[ok]] @ q) / (tn[ok] * qn)
    return sims


def topk_similar_training(dataset, node: int, k: int = DEFAULT_TOP_K) -> tuple[list[int], np.ndarray]:
    """Training nodes most feature-similar to the query (self excluded),
    ranked by descending cosine similarity with id order breaking ties,
    plus the normalized label frequencies over that set."""
    if k < 1:
        raise ValueError("k must be at least 1")
    train = np.flatnonzero(dataset.train_mask)
    sims = _cosine_to_training(dataset, node)
    keep = train != node
    train, sims = train[keep], sims[keep]
    order = np.lexsort((train, -sims))
    top = train[order[:k]]
    kfs = np.zeros(dataset.class_count)
    if top.size:
        counts = np.bincount(dataset.labels[top], minlength=dataset.class_count)
        kfs = counts / counts.sum()
    return top.tolist(), kfs


@dataclass(frozen=True)
class MetricsTable:
    """Columnar per-node metric rows; ``spd``/``kfs`` are (N, C) blocks."""

    gt: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    p3: np.ndarray
    correct1: np.ndarray
    correct2: np.ndarray
    correct3: np.ndarray
    conf: np.ndarray
    deg: np.ndarray
    cn: np.ndarray
    dis: np.ndarray  # float; inf marks unreachable
    closeness: np.ndarray
    spd: np.ndarray
    nearest_dominant: tuple[str, ...]
    kfs: np.ndarray
    topk_dominant: tuple[str, ...]
    similar_train_ids: tuple[tuple[int, ...], ...]
    k: int

    @property
    def node_count(self) -> int:
        return self.gt.shape[0]

    @property
    def class_count(self) -> int:
        return self.spd.shape[1]

    def header(self) -> list[str]:
        c = self.class_count
        return (
            [
                "node_id",
                "gt",
                "pred_gnn",
                "pred_structure",
                "pred_feature",
                "correct_gnn",
                "correct_structure",
                "correct_feature",
                "confidence",
                "degree",
                "cn_label",
                "cn_label_pred",
                "cn_pred_label",
                "cn_pred",
                "distance_to_train",
                "closeness",
                "nearest_dominant",
                "topk_dominant",
            ]
            + [f"spd_{i}" for i in range(c)]
            + [f"kfs_{i}" for i in range(c)]
            + ["similar_train_ids"]
        )

    def format_row(self, i: int) -> list[str]:
        """One CSV row as strings; the service returns these verbatim so the
        two surfaces can never drift apart."""

        def f(x: float) -> str:
            return repr(float(x))

        def b(x) -> str:
            return VERDICT_TRUE if x else VERDICT_FALSE

        return (
            [
                str(i),
                str(int(self.gt[i])),
                str(int(self.p1[i])),
                str(int(self.p2[i])),
                str(int(self.p3[i])),
                b(self.correct1[i]),
                b(self.correct2[i]),
                b(self.correct3[i]),
                f(self.conf[i]),
                str(int(self.deg[i])),
                f(self.cn[i, 0]),
                f(self.cn[i, 1]),
                f(self.cn[i, 2]),
                f(self.cn[i, 3]),
                "inf" if np.isinf(self.dis[i]) else str(int(self.dis[i])),
                f(self.closeness[i]),
                self.nearest_dominant[i],
                self.topk_dominant[i],
            ]
            + [f(x) for x in self.spd[i]]
            + [f(x) for x in self.kfs[i]]
            + [" ".join(str(t) for t in self.similar_train_ids[i])]
        )

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(self.header())
            for i in range(self.node_count):
                writer.writerow(self.format_row(i))


def compute_table(dataset, predictions: dict[str, PredictionSet], k: int = DEFAULT_TOP_K) -> MetricsTable:
    """Assemble the full table; a pure function of its inputs.

    ``predictions`` maps the three roles (gnn, structure, feature) to their
    prediction sets; confidence is the gnn's probability on its own
    predicted label.
    """
    missing = [r for r in ROLES if r not in predictions]
    if missing:
        raise ValueError(f"predictions missing roles: {', '.join(missing)}")
    n, c = dataset.node_count, dataset.class_count
    gt = dataset.labels
    p1 = predictions["gnn"].predicted
    p2 = predictions["structure"].predicted
    p3 = predictions["feature"].predicted
    for role, p in (("gnn", p1), ("structure", p2), ("feature", p3)):
        if p.shape[0] != n:
            raise ValueError(f"{role} predictions cover {p.shape[0]} of {n} nodes")
    conf = predictions["gnn"].confidence

    deg = dataset.degrees
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(dataset.indptr))
    dst = dataset.indices
    cn = np.zeros((n, 4))
    safe_deg = np.maximum(deg, 1).astype(np.float64)
    for col, (a, bvec) in enumerate(
        [(gt, gt), (p1, gt), (gt, p1), (p1, p1)]
    ):
        # Component col counts neighbors j of i with a[j] == bvec[i].
        match = (a[dst] == bvec[src]).astype(np.float64)
        cn[:, col] = np.bincount(src, weights=match, minlength=n) / safe_deg

    train = np.flatnonzero(dataset.train_mask)
    depths = np.stack(
        [_kernels.bfs_depths(dataset.indptr, dataset.indices, np.array([t])) for t in train]
    )  # (n_train, N); symmetric distances, so source-side BFS suffices
    masked = np.where(depths < 0, np.iinfo(np.int64).max, depths)
    nearest = masked.min(axis=0)
    unreachable = nearest == np.iinfo(np.int64).max
    dis = np.where(unreachable, np.inf, nearest.astype(np.float64))
    at_nearest = (masked == nearest[None, :]) & ~unreachable[None, :]
    onehot = np.zeros((train.shape[0], c))
    onehot[np.arange(train.shape[0]), gt[train]] = 1.0
    spd_counts = at_nearest.T.astype(np.float64) @ onehot
    totals = spd_counts.sum(axis=1, keepdims=True)
    spd = np.divide(spd_counts, totals, out=np.zeros_like(spd_counts), where=totals > 0)

    closeness = np.maximum(0.0, 1.0 - 0.2 * dis)
    closeness[np.isinf(dis)] = 0.0

    nearest_dominant = tuple(dominant_consistency(spd[i], gt[i]) for i in range(n))

    similar: list[tuple[int, ...]] = []
    kfs = np.zeros((n, c))
    for i in range(n):
        ids, dist = topk_similar_training(dataset, i, k)
        similar.append(tuple(ids))
        kfs[i] = dist
    topk_dominant = tuple(dominant_consistency(kfs[i], gt[i]) for i in range(n))

    return MetricsTable(
        gt=gt.copy(),
        p1=p1.copy(),
        p2=p2.copy(),
        p3=p3.copy(),
        correct1=p1 == gt,
        correct2=p2 == gt,
        correct3=p3 == gt,
        conf=np.asarray(conf, dtype=np.float64).copy(),
        deg=deg.copy(),
        cn=cn,
        dis=dis,
        closeness=closeness,
        spd=spd,
        nearest_dominant=nearest_dominant,
        kfs=kfs,
        topk_dominant=topk_dominant,
        similar_train_ids=tuple(similar),
        k=k,
    )
