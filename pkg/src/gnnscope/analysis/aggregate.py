"""Cluster glyph aggregates: one record per cluster, in the same feature
vocabulary the plane distances use, so aggregated glyphs can be projected
with the identical code path."""

from __future__ import annotations

import numpy as np

from gnnscope.analysis.planes import max_degree_of
from gnnscope.metrics import MetricsTable


def majority(values) -> int:
    """Most frequent value; ties resolve to the smallest."""
    values = np.asarray(values, dtype=np.int64)
    if values.size == 0:
        raise ValueError("majority of an empty set is undefined")
    uniq, counts = np.unique(values, return_counts=True)
    return int(uniq[np.argmax(counts)])


def aggregate_cluster(
    table: MetricsTable,
    member_ids,
    max_degree: int | None = None,
) -> dict:
    """Glyph data for one cluster of metric rows.

    Majority vote for the label fields (ties to the lowest class id),
    arithmetic means for the continuous ones.  ``radius`` grows with the
    square root of the member count; callers scale it to their layout.
    """
    ids = np.asarray(list(member_ids), dtype=np.int64)
    if ids.size == 0:
        raise ValueError("cluster must not be empty")
    if max_degree is None:
        max_degree = max_degree_of(table)
    return {
        "member_ids": [int(i) for i in ids],
        "size": int(ids.size),
        "gt": majority(table.gt[ids]),
        "p1": majority(table.p1[ids]),
        "p2": majority(table.p2[ids]),
        "p3": majority(table.p3[ids]),
        "conf": float(table.conf[ids].mean()),
        "norm_degree": float((table.deg[ids] / max_degree).mean()),
        "cn": [float(v) for v in table.cn[ids].mean(axis=0)],
        "spd": [float(v) for v in table.spd[ids].mean(axis=0)],
        "closeness": float(table.closeness[ids].mean()),
        "kfs": [float(v) for v in table.kfs[ids].mean(axis=0)],
        "radius": float(np.sqrt(ids.size)),
    }
