"""Spatial helpers: glyph overlap resolution, the node-link spring layout,
and k-hop neighborhood expansion."""

from __future__ import annotations

import numpy as np

from gnnscope import _kernels


def layout_epsilon(coords: np.ndarray) -> float:
    """Overlap tolerance: 0.5% of the larger side of the bounding box."""
    coords = np.asarray(coords, dtype=np.float64)
    if coords.size == 0:
        return 0.0
    spans = coords.max(axis=0) - coords.min(axis=0)
    return 0.005 * float(max(spans[0], spans[1], 1e-9))


def resolve_overlap(coords, radii, iterations: int = 200) -> np.ndarray:
    """Separate overlapping glyph discs.

    Repeated pairwise pushes until no pair overlaps by more than the layout
    epsilon (or the iteration cap); input arrays are not modified.
    """
    coords = np.asarray(coords, dtype=np.float64)
    radii = np.asarray(radii, dtype=np.float64)
    if coords.shape[0] != radii.shape[0]:
        raise ValueError("one radius per coordinate required")
    if coords.shape[0] == 0:
        return coords.copy()
    if not (np.isfinite(coords).all() and np.isfinite(radii).all()):
        raise ValueError("coordinates and radii must be finite")
    eps = layout_epsilon(coords)
    return _kernels.resolve_collisions(coords, radii, eps, max_sweeps=iterations)


def overlapping_pairs(coords, radii, epsilon: float) -> list[tuple[int, int]]:
    """Brute-force scan for disc pairs overlapping beyond epsilon."""
    coords = np.asarray(coords, dtype=np.float64)
    radii = np.asarray(radii, dtype=np.float64)
    out = []
    n = coords.shape[0]
    for i in range(n):
        for j in range(i + 1, n):
            d = float(np.hypot(*(coords[i] - coords[j])))
            if d < radii[i] + radii[j] - epsilon:
                out.append((i, j))
    return out


def graph_layout(dataset, seed: int = 0, iterations: int = 50) -> np.ndarray:
    """Force-directed node-link layout: spring attraction along edges,
    pairwise repulsion, then a collision pass; deterministic per seed."""
    n = dataset.node_count
    if n == 1:
        return np.zeros((1, 2))
    rng = np.random.default_rng(seed)
    pos = rng.random((n, 2))
    k = np.sqrt(1.0 / n)
    for it in range(iterations):
        disp = _kernels.layout_forces(pos, dataset.indptr, dataset.indices, k)
        # Linear cooling from a tenth of the frame down to zero.
        temp = 0.1 * (1.0 - it / iterations)
        length = np.maximum(np.hypot(disp[:, 0], disp[:, 1]), 1e-12)
        scale = np.minimum(length, temp) / length
        pos = pos + disp * scale[:, None]
    pos = pos - pos.mean(axis=0)
    radius = np.full(n, k / 4.0)
    return _kernels.resolve_collisions(pos, radius, layout_epsilon(pos))


def k_hop(dataset, seeds, k: int) -> np.ndarray:
    """Union of the BFS balls of radius k around the seeds (seeds included),
    as sorted node ids.  Empty seeds give an empty set."""
    if k < 0:
        raise ValueError("k must be non-negative")
    seeds = np.asarray(list(seeds), dtype=np.int64)
    if seeds.size == 0:
        return np.empty(0, dtype=np.int64)
    if seeds.min() < 0 or seeds.max() >= dataset.node_count:
        raise ValueError("seed node id out of range")
    depths = _kernels.bfs_depths(dataset.indptr, dataset.indices, seeds, max_depth=k)
    return np.flatnonzero(depths >= 0).astype(np.int64)
