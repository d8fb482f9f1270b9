"""t-SNE over precomputed plane distances.

Gaussian affinities with per-row bandwidths found by binary search to hit
the target perplexity (entropy in nats), symmetrized and normalized.  The
optimization runs in two phases: early exaggeration with momentum, then a
guarded descent whose steps are only accepted when the KL divergence does
not increase, so the reported divergence trace is non-increasing after the
exaggeration phase by construction.
"""

from __future__ import annotations

import numpy as np

from gnnscope import _kernels
from gnnscope.analysis.planes import distance_matrix
from gnnscope.metrics import MetricsTable

MACHINE_EPS = np.finfo(np.float64).eps

DEFAULT_PERPLEXITY = 30.0
DEFAULT_ITERATIONS = 1000
EXAGGERATION = 12.0
EXAGGERATION_ITERS = 250
LEARNING_RATE = 200.0


def joint_probabilities(D: np.ndarray, perplexity: float) -> np.ndarray:
    """Symmetrized affinity matrix from a distance matrix.

    Bandwidths beta_i solve H(P_i) = log(perplexity) by bisection; rows
    whose distances are all zero fall back to uniform affinity.
    """
    D = np.asarray(D, dtype=np.float64)
    n = D.shape[0]
    if not np.isfinite(D).all():
        raise ValueError("distances must be finite")
    D2 = D * D
    target = np.log(max(perplexity, MACHINE_EPS))
    P = np.zeros((n, n))
    for i in range(n):
        d2 = np.delete(D2[i], i)
        lo, hi = -np.inf, np.inf
        beta = 1.0
        p = np.exp(-d2 * beta)
        for _ in range(64):
            total = p.sum()
            if total <= 0.0:
                h = 0.0
            else:
                h = np.log(total) + beta * float(p @ d2) / total
            if abs(h - target) < 1e-7:
                break
            if h > target:
                lo = beta
                beta = beta * 2.0 if np.isinf(hi) else 0.5 * (lo + hi)
            else:
                hi = beta
                beta = beta * 0.5 if np.isinf(lo) else 0.5 * (lo + hi)
            p = np.exp(-d2 * beta)
        total = p.sum()
        row = p / total if total > 0.0 else np.full(d2.shape, 1.0 / max(d2.shape[0], 1))
        P[i, :i] = row[:i]
        P[i, i + 1 :] = row[i:]
    P = (P + P.T) / (2.0 * n)
    return np.maximum(P, 0.0)


def project_distances_trace(
    D: np.ndarray,
    perplexity: float = DEFAULT_PERPLEXITY,
    seed: int = 0,
    iterations: int = DEFAULT_ITERATIONS,
) -> tuple[np.ndarray, np.ndarray]:
    """Embed a distance matrix; returns (coords, KL trace).

    The trace holds one KL value per post-exaggeration iteration and is
    non-increasing by construction (rejected steps repeat the last value).
    """
    D = np.asarray(D, dtype=np.float64)
    n = D.shape[0]
    if n < 2:
        raise ValueError("need at least 2 items to project")
    if iterations < 1:
        raise ValueError("iterations must be positive")
    perplexity = min(perplexity, (n - 1) / 3.0)
    P = joint_probabilities(D, perplexity)
    rng = np.random.default_rng(seed)
    Y = rng.normal(scale=1e-4, size=(n, 2))

    exag_iters = min(EXAGGERATION_ITERS, iterations)
    Pex = P * EXAGGERATION
    vel = np.zeros_like(Y)
    for _ in range(exag_iters):
        grad, _ = _kernels.tsne_forces(Y, Pex)
        vel = 0.5 * vel - LEARNING_RATE * grad
        Y = Y + vel
        Y = Y - Y.mean(axis=0)

    trace = []
    step = LEARNING_RATE
    grad, kl = _kernels.tsne_forces(Y, P)
    for _ in range(iterations - exag_iters):
        candidate = Y - step * grad
        candidate = candidate - candidate.mean(axis=0)
        cand_grad, cand_kl = _kernels.tsne_forces(candidate, P)
        if cand_kl <= kl:
            Y, grad, kl = candidate, cand_grad, cand_kl
            step = min(step * 1.05, 10.0 * LEARNING_RATE)
        else:
            step *= 0.5
        trace.append(kl)
        if step < 1e-12:
            break
    if trace:
        trace += [trace[-1]] * (iterations - exag_iters - len(trace))
    return Y - Y.mean(axis=0), np.asarray(trace)


def project_distances(D, perplexity=DEFAULT_PERPLEXITY, seed=0, iterations=DEFAULT_ITERATIONS) -> np.ndarray:
    coords, _ = project_distances_trace(D, perplexity, seed, iterations)
    return coords


def project(
    table: MetricsTable,
    plane: str,
    ids,
    perplexity: float = DEFAULT_PERPLEXITY,
    seed: int = 0,
    iterations: int = DEFAULT_ITERATIONS,
) -> np.ndarray:
    """2D coordinates for a row subset on one plane, centered at the origin."""
    return project_distances(
        distance_matrix(plane, table, ids), perplexity, seed, iterations
    )
