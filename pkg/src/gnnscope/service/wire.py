"""JSON wire shapes shared by the HTTP service and the batch report writer.

Keeping the serializers in one place makes "report files match API
responses" hold by construction.  ``dump_bytes`` is the canonical encoder:
sorted keys, compact separators, so equal payloads are equal bytes.
"""

from __future__ import annotations

import json

import numpy as np

from gnnscope.analysis import ParallelSetsResult, ProjectionPlane


def dump_bytes(payload) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()


def coords_wire(coords: np.ndarray) -> list[list[float]]:
    return [[float(x), float(y)] for x, y in np.asarray(coords)]


def layout_wire(layout: np.ndarray, edges: np.ndarray) -> dict:
    return {
        "node_ids": list(range(len(layout))),
        "coords": coords_wire(layout),
        "edges": [[int(a), int(b)] for a, b in np.asarray(edges).reshape(-1, 2)],
    }


def parallel_sets_wire(result: ParallelSetsResult) -> dict:
    return {
        "axes": list(result.axes),
        "selection_size": result.selection_size,
        "segments": [
            [{"category": s.category, "count": s.count} for s in segs]
            for segs in result.segments
        ],
        "ribbons": [
            [
                {
                    "category_a": r.category_a,
                    "category_b": r.category_b,
                    "count": r.count,
                    "node_ids": list(r.node_ids),
                }
                for r in ribbons
            ]
            for ribbons in result.ribbons
        ],
    }


def cluster_wire(aggregate: dict, cid: str) -> dict:
    out = {k: v for k, v in aggregate.items() if k != "member_ids"}
    out["id"] = cid
    out["member_ids"] = list(aggregate["member_ids"])
    return out


def projection_wire(view: ProjectionPlane, cid_prefix: str | None = None) -> dict:
    payload = {
        "plane": view.plane,
        "mode": view.mode,
        "member_ids": list(view.member_ids),
        "coords": coords_wire(view.coords),
        "radii": [float(r) for r in view.radii],
    }
    if view.clusters is None:
        payload["clusters"] = None
    else:
        payload["clusters"] = [
            cluster_wire(agg, f"{cid_prefix}.{i}" if cid_prefix else str(i))
            for i, agg in enumerate(view.clusters)
        ]
    return payload
