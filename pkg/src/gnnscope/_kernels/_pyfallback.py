"""Reference (pure numpy) implementations of the numeric kernels.

This module defines the behavioural contract; the compiled backend must
reproduce it, including every tie-break.  All functions take and return
float64/int64 arrays and never mutate their inputs.
"""

from __future__ import annotations

import numpy as np


def pairwise_mixed_sq(cat: np.ndarray, cont: np.ndarray) -> np.ndarray:
    """Squared distances D2[i,j] = #{categorical mismatches} + sum((cont_i - cont_j)^2).

    cat: (n, a) int64 categorical codes, cont: (n, b) float64.  Either may
    have zero columns.  Returns a dense symmetric (n, n) float64 matrix with
    a zero diagonal.  Columns are accumulated one at a time so the summation
    order is fixed (categorical first, then continuous, left to right).
    """
    cat = np.ascontiguousarray(cat, dtype=np.int64)
    cont = np.ascontiguousarray(cont, dtype=np.float64)
    n = cat.shape[0] if cat.ndim == 2 else cont.shape[0]
    out = np.zeros((n, n), dtype=np.float64)
    for c in range(cat.shape[1]):
        col = cat[:, c]
        out += (col[:, None] != col[None, :]).astype(np.float64)
    for c in range(cont.shape[1]):
        col = cont[:, c]
        diff = col[:, None] - col[None, :]
        out += diff * diff
    return out


def bfs_depths(
    indptr: np.ndarray,
    indices: np.ndarray,
    sources: np.ndarray,
    max_depth: int = -1,
) -> np.ndarray:
    """Multi-source BFS depth to the nearest source; -1 where unreachable.

    Sources themselves get depth 0.  ``max_depth >= 0`` stops the expansion
    after that many hops (nodes further away stay -1).
    """
    indptr = np.asarray(indptr, dtype=np.int64)
    indices = np.asarray(indices, dtype=np.int64)
    n = indptr.shape[0] - 1
    depth = np.full(n, -1, dtype=np.int64)
    frontier = np.unique(np.asarray(sources, dtype=np.int64))
    depth[frontier] = 0
    level = 0
    while frontier.size and (max_depth < 0 or level < max_depth):
        nbrs = np.concatenate(
            [indices[indptr[v] : indptr[v + 1]] for v in frontier]
        ) if frontier.size else np.empty(0, dtype=np.int64)
        fresh = np.unique(nbrs[depth[nbrs] < 0]) if nbrs.size else nbrs
        level += 1
        depth[fresh] = level
        frontier = fresh
    return depth


def tsne_forces(Y: np.ndarray, P: np.ndarray) -> tuple[np.ndarray, float]:
    """Kullback-Leibler gradient and value for a 2D embedding.

    Y: (n, 2) coordinates, P: (n, n) symmetric affinities summing to 1 with
    a zero diagonal.  Student-t kernel with one degree of freedom:
    q_ij proportional to 1 / (1 + |y_i - y_j|^2).
    Returns (grad, kl) where grad[i] = 4 * sum_j (p_ij - q_ij) w_ij (y_i - y_j).
    """
    Y = np.asarray(Y, dtype=np.float64)
    P = np.asarray(P, dtype=np.float64)
    n = Y.shape[0]
    sq = np.einsum("ij,ij->i", Y, Y)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (Y @ Y.T)
    np.maximum(d2, 0.0, out=d2)
    W = 1.0 / (1.0 + d2)
    np.fill_diagonal(W, 0.0)
    z = W.sum()
    if z <= 0.0:
        return np.zeros_like(Y), 0.0
    Q = W / z
    PQW = (P - Q) * W
    grad = 4.0 * (PQW.sum(axis=1)[:, None] * Y - PQW @ Y)
    eps = np.finfo(np.float64).tiny
    mask = P > 0.0
    kl = float(np.sum(P[mask] * np.log(P[mask] / np.maximum(Q[mask], eps))))
    return grad, kl


def resolve_collisions(
    pos: np.ndarray,
    radii: np.ndarray,
    epsilon: float,
    max_sweeps: int = 200,
) -> np.ndarray:
    """Push overlapping discs apart until no pair overlaps beyond epsilon.

    Sequential Gauss-Seidel sweeps: pairs are visited in (i, j) order and
    each violating pair is separated symmetrically along the line between
    the two centers, so later pairs in the same sweep see earlier pushes.
    Coincident centers are separated along a direction derived from the
    pair index, keeping the result deterministic.
    """
    pos = np.array(pos, dtype=np.float64)
    radii = np.asarray(radii, dtype=np.float64)
    n = pos.shape[0]
    for _ in range(max_sweeps):
        moved = False
        for i in range(n - 1):
            delta = pos[i + 1 :] - pos[i]
            dist = np.hypot(delta[:, 0], delta[:, 1])
            need = radii[i] + radii[i + 1 :]
            bad = np.flatnonzero(dist < need - epsilon)
            for off in bad:
                j = i + 1 + off
                d = dist[off]
                if d >= need[off] - epsilon:
                    continue  # an earlier push already separated this pair
                if d <= 1e-12:
                    angle = 2.0 * np.pi * ((0.6180339887498949 * (i * n + j)) % 1.0)
                    ux, uy = np.cos(angle), np.sin(angle)
                else:
                    ux, uy = delta[off, 0] / d, delta[off, 1] / d
                shift = 0.5 * (need[off] - d)
                pos[i, 0] -= ux * shift
                pos[i, 1] -= uy * shift
                pos[j, 0] += ux * shift
                pos[j, 1] += uy * shift
                # Positions moved; refresh the cached row for this anchor.
                delta = pos[i + 1 :] - pos[i]
                dist = np.hypot(delta[:, 0], delta[:, 1])
                moved = True
        if not moved:
            break
    return pos


def layout_forces(
    pos: np.ndarray,
    indptr: np.ndarray,
    indices: np.ndarray,
    k: float,
) -> np.ndarray:
    """One force pass of the spring layout: repulsion k^2/d, attraction d^2/k.

    Returns per-node displacement vectors (unscaled; the caller applies the
    temperature clamp).  Distances are floored at 1e-9 to keep coincident
    nodes from producing infinities.
    """
    pos = np.asarray(pos, dtype=np.float64)
    n = pos.shape[0]
    delta = pos[:, None, :] - pos[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", delta, delta)
    np.fill_diagonal(d2, 1.0)
    d2 = np.maximum(d2, 1e-18)
    rep = (k * k) / d2
    np.fill_diagonal(rep, 0.0)
    disp = np.einsum("ij,ijk->ik", rep, delta)
    indptr = np.asarray(indptr, dtype=np.int64)
    indices = np.asarray(indices, dtype=np.int64)
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    if src.size:
        dvec = pos[src] - pos[indices]
        d = np.maximum(np.hypot(dvec[:, 0], dvec[:, 1]), 1e-9)
        pull = (d / k)[:, None] * dvec
        np.subtract.at(disp, src, pull)
    return disp


def complete_linkage(dist: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Agglomerative clustering under the complete (maximum) linkage.

    dist: dense symmetric (n, n) float64.  Returns (merges, heights) where
    merges is (n-1, 2) int64 and heights (n-1,) float64.  Each step merges
    the active pair with the smallest linkage distance; ties resolve to the
    lexicographically smallest pair of representatives.  A cluster is
    represented by its smallest member id, and a merge of (a, b) with a < b
    keeps a as the surviving representative, so representatives are stable
    node ids throughout.
    """
    D = np.array(dist, dtype=np.float64)
    n = D.shape[0]
    np.fill_diagonal(D, np.inf)
    active = np.ones(n, dtype=bool)
    # Per-row cache of the current nearest active column (first occurrence).
    nn_idx = np.empty(n, dtype=np.int64)
    nn_val = np.empty(n, dtype=np.float64)
    for i in range(n):
        nn_idx[i] = np.argmin(D[i])
        nn_val[i] = D[i, nn_idx[i]]
    merges = np.empty((max(n - 1, 0), 2), dtype=np.int64)
    heights = np.empty(max(n - 1, 0), dtype=np.float64)
    for step in range(n - 1):
        best = np.inf
        a = -1
        for i in range(n):
            if active[i] and nn_val[i] < best:
                best = nn_val[i]
                a = i
        b = int(nn_idx[a])
        if b < a:
            a, b = b, a
        merges[step] = (a, b)
        heights[step] = best
        # Lance-Williams for the maximum linkage: D(a+b, k) = max(Dak, Dbk).
        merged = np.maximum(D[a], D[b])
        merged[a] = np.inf
        D[a] = merged
        D[:, a] = merged
        D[b] = np.inf
        D[:, b] = np.inf
        active[b] = False
        if step == n - 2:
            break
        nn_idx[a] = np.argmin(D[a])
        nn_val[a] = D[a, nn_idx[a]]
        # Rows whose cached neighbour was a or b must rescan: column b left
        # the game and column a only grew, so other caches stay valid.
        for i in range(n):
            if active[i] and i != a and nn_idx[i] in (a, b):
                nn_idx[i] = np.argmin(D[i])
                nn_val[i] = D[i, nn_idx[i]]
    return merges, heights
