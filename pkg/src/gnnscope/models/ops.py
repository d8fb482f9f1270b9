"""Shared numeric pieces: activations, loss, dropout, init, graph context.

All aggregation runs over flat edge arrays that include one self loop per
node, sorted by source.  Every source segment is therefore non-empty, which
is what makes the reduceat-based segment sums and maxes safe.
"""

from __future__ import annotations

import numpy as np


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def leaky_relu(x: np.ndarray, slope: float) -> np.ndarray:
    return np.maximum(x, 0.0) + slope * np.minimum(x, 0.0)


def glorot(rng: np.random.Generator, shape: tuple[int, ...], fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


def dropout_mask(rng: np.random.Generator, shape, rate: float) -> np.ndarray:
    """Inverted-dropout multiplier: 0 with probability rate, else 1/(1-rate)."""
    keep = 1.0 - rate
    return (rng.random(shape) < keep).astype(np.float64) / keep


def cross_entropy(logits: np.ndarray, labels: np.ndarray, ids: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean cross-entropy over the given node ids and its logits gradient.

    The gradient has the full (N, C) shape with zeros outside ``ids``.
    """
    sel = logits[ids]
    # Overflowed logits produce NaN here; the caller checks finiteness and
    # reports divergence, so the intermediate warnings are noise.
    k = ids.shape[0]
    rows = np.arange(k)
    y = labels[ids]
    eps = np.finfo(np.float64).tiny
    with np.errstate(invalid="ignore"):
        shifted = sel - sel.max(axis=1, keepdims=True)
        e = np.exp(shifted)
        probs = e / e.sum(axis=1, keepdims=True)
        loss = float(-np.mean(np.log(np.maximum(probs[rows, y], eps))))
    grad = np.zeros_like(logits)
    g = probs.copy()
    g[rows, y] -= 1.0
    grad[ids] = g / k
    return loss, grad


class DenseInput:
    """Explicit input matrix with the two products the layers need."""

    def __init__(self, X: np.ndarray):
        self.X = np.asarray(X, dtype=np.float64)
        self.rows = self.X.shape[0]
        self.dim = self.X.shape[1]

    def matmul(self, W: np.ndarray) -> np.ndarray:
        return self.X @ W

    def matmul_t(self, dU: np.ndarray) -> np.ndarray:
        """X^T dU, the weight gradient of U = X W."""
        return self.X.T @ dU

    def dropped(self, rng: np.random.Generator, rate: float) -> "DenseInput":
        return DenseInput(self.X * dropout_mask(rng, self.X.shape, rate))


class IdentityInput:
    """Implicit one-hot input matrix (N x N identity), never materialized.

    Dropout on an identity matrix only touches the diagonal, so a dropped
    identity input is a per-row multiplier.  This keeps the structure-only
    proxy trainable at full graph size without an N^2 feature matrix.
    """

    def __init__(self, n: int, row_scale: np.ndarray | None = None):
        self.rows = n
        self.dim = n
        self.row_scale = row_scale

    def matmul(self, W: np.ndarray) -> np.ndarray:
        if self.row_scale is None:
            return W.copy()
        return self.row_scale[:, None] * W

    def matmul_t(self, dU: np.ndarray) -> np.ndarray:
        if self.row_scale is None:
            return dU
        return self.row_scale[:, None] * dU

    def dropped(self, rng: np.random.Generator, rate: float) -> "IdentityInput":
        return IdentityInput(self.rows, dropout_mask(rng, self.rows, rate))


class GraphContext:
    """Precomputed edge arrays for message passing over one dataset.

    ``src``/``dst`` list every directed edge including self loops, sorted by
    (src, dst); ``seg`` is the CSR-style pointer into that order, one
    segment per source node.  ``by_dst`` re-sorts the same edges by
    (dst, src) with pointer ``seg_dst``, which turns scatter-adds over
    destinations into plain segment sums.  ``gcn_weight`` holds the
    symmetric-normalization coefficient 1/sqrt(deg~(src) * deg~(dst)) where
    deg~ counts the added self loop.
    """

    def __init__(self, dataset):
        n = dataset.node_count
        base_src = np.repeat(np.arange(n, dtype=np.int64), np.diff(dataset.indptr))
        src = np.concatenate([base_src, np.arange(n, dtype=np.int64)])
        dst = np.concatenate([dataset.indices, np.arange(n, dtype=np.int64)])
        order = np.lexsort((dst, src))
        self.src = src[order]
        self.dst = dst[order]
        self.seg = np.searchsorted(self.src, np.arange(n + 1))
        self.by_dst = np.lexsort((self.src, self.dst))
        self.seg_dst = np.searchsorted(self.dst[self.by_dst], np.arange(n + 1))
        s = 1.0 / np.sqrt(dataset.degrees.astype(np.float64) + 1.0)
        self.gcn_weight = s[self.src] * s[self.dst]
        self.node_count = n

    def segment_sum(self, edge_values: np.ndarray) -> np.ndarray:
        """Sum edge values into their source node (segments are non-empty)."""
        return np.add.reduceat(edge_values, self.seg[:-1], axis=0)

    def segment_max(self, edge_values: np.ndarray) -> np.ndarray:
        return np.maximum.reduceat(edge_values, self.seg[:-1], axis=0)

    def scatter_dst(self, edge_values: np.ndarray) -> np.ndarray:
        """Sum edge values into their destination node."""
        return np.add.reduceat(edge_values[self.by_dst], self.seg_dst[:-1], axis=0)

    def propagate(self, H: np.ndarray) -> np.ndarray:
        """Symmetrically normalized neighborhood sum (self loop included)."""
        return self.segment_sum(self.gcn_weight[:, None] * H[self.dst])
