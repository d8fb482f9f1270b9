"""The four diagnostic planes and their distance functions.

Each plane compares a fixed slice of the metric row.  Squared distances sum
categorical mismatch indicators (1 when the two values differ) with squared
differences of the continuous parts:

    PredictionComparison:     GT, P1, P2, P3 mismatches + (dCONF)^2
    SurroundingConsistency:   (dDEG/max_degree)^2 + GT mismatch + |dCN|^2
    TrainStructureInfluence:  P1 mismatch + |dSPD|^2 + (dCloseness)^2
    TrainFeatureInfluence:    P1 mismatch + |dKFS|^2

Each distance is the Euclidean norm of per-component metrics, so all four
satisfy the metric axioms.
"""

from __future__ import annotations

import numpy as np

from gnnscope import _kernels
from gnnscope.metrics import MetricsTable

PLANES = (
    "PredictionComparison",
    "SurroundingConsistency",
    "TrainStructureInfluence",
    "TrainFeatureInfluence",
)

# Tight upper bounds on each distance.  The structure-influence plane can
# reach 2: one P1 mismatch, |dSPD|^2 up to 2 (two disjoint one-hot spreads),
# and a closeness gap of 1 give sqrt(1 + 2 + 1).
PLANE_BOUNDS = {
    "PredictionComparison": np.sqrt(5.0),
    "SurroundingConsistency": np.sqrt(6.0),
    "TrainStructureInfluence": 2.0,
    "TrainFeatureInfluence": np.sqrt(3.0),
}


def max_degree_of(table: MetricsTable) -> int:
    return max(1, int(table.deg.max()))


def plane_features(
    plane: str, table: MetricsTable, ids: np.ndarray, max_degree: int
) -> tuple[np.ndarray, np.ndarray]:
    """(categorical, continuous) feature blocks for the given rows."""
    if max_degree < 1:
        raise ValueError("max_degree must be at least 1")
    ids = np.asarray(ids, dtype=np.int64)
    if plane == "PredictionComparison":
        cat = np.stack([table.gt[ids], table.p1[ids], table.p2[ids], table.p3[ids]], axis=1)
        cont = table.conf[ids, None]
    elif plane == "SurroundingConsistency":
        cat = table.gt[ids, None]
        cont = np.concatenate(
            [table.deg[ids, None].astype(np.float64) / max_degree, table.cn[ids]], axis=1
        )
    elif plane == "TrainStructureInfluence":
        cat = table.p1[ids, None]
        cont = np.concatenate([table.spd[ids], table.closeness[ids, None]], axis=1)
    elif plane == "TrainFeatureInfluence":
        cat = table.p1[ids, None]
        cont = table.kfs[ids]
    else:
        raise ValueError(f"unknown plane {plane!r}")
    return np.ascontiguousarray(cat, dtype=np.int64), np.ascontiguousarray(cont, dtype=np.float64)


def plane_distance(plane: str, table: MetricsTable, a: int, b: int, max_degree: int) -> float:
    """Distance between two rows of the same table on one plane."""
    cat, cont = plane_features(plane, table, np.array([a, b]), max_degree)
    sq = float(np.sum(cat[0] != cat[1])) + float(np.sum((cont[0] - cont[1]) ** 2))
    return float(np.sqrt(sq))


def distance_matrix(plane: str, table: MetricsTable, ids, max_degree: int | None = None) -> np.ndarray:
    """Dense pairwise plane distances for a row subset (not squared)."""
    if max_degree is None:
        max_degree = max_degree_of(table)
    cat, cont = plane_features(plane, table, ids, max_degree)
    return np.sqrt(_kernels.pairwise_mixed_sq(cat, cont))


def feature_blocks_from_aggregates(plane: str, aggregates) -> tuple[np.ndarray, np.ndarray]:
    """The same feature schema, read from cluster aggregate records."""
    if plane == "PredictionComparison":
        cat = np.array([[a["gt"], a["p1"], a["p2"], a["p3"]] for a in aggregates], dtype=np.int64)
        cont = np.array([[a["conf"]] for a in aggregates])
    elif plane == "SurroundingConsistency":
        cat = np.array([[a["gt"]] for a in aggregates], dtype=np.int64)
        cont = np.array([[a["norm_degree"], *a["cn"]] for a in aggregates])
    elif plane == "TrainStructureInfluence":
        cat = np.array([[a["p1"]] for a in aggregates], dtype=np.int64)
        cont = np.array([[*a["spd"], a["closeness"]] for a in aggregates])
    elif plane == "TrainFeatureInfluence":
        cat = np.array([[a["p1"]] for a in aggregates], dtype=np.int64)
        cont = np.array([a["kfs"] for a in aggregates])
    else:
        raise ValueError(f"unknown plane {plane!r}")
    return cat, np.ascontiguousarray(cont, dtype=np.float64)


def aggregate_distance_matrix(plane: str, aggregates) -> np.ndarray:
    cat, cont = feature_blocks_from_aggregates(plane, aggregates)
    return np.sqrt(_kernels.pairwise_mixed_sq(cat, cont))
