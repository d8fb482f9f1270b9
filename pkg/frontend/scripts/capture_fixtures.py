"""Capture HTTP fixtures for the webui test suite.

Runs the real service against the six-node workbench fixture and records
every request/response pair the frontend tests replay through their fetch
stub.  Interaction targets (which segment is clicked, which nodes the lasso
catches, ...) are derived here with the same rules the views implement, so
the recorded bank contains exactly the traffic the scripted interactions
produce.

Output: frontend/tests/fixtures/bank.json
"""

from __future__ import annotations

import json
import pathlib
import sys

REPO = pathlib.Path(__file__).resolve().parents[2]
sys.path.insert(0, str(REPO / "tests"))

from conftest import SIX_NODE_DOC  # noqa: E402
from fastapi.testclient import TestClient  # noqa: E402

from gnnscope.graph_store import Dataset  # noqa: E402
from gnnscope.models import TrainConfig, train, trio_specs  # noqa: E402
from gnnscope.seeding import subseed  # noqa: E402
from gnnscope.service import build_snapshot, create_app  # noqa: E402

AXES = ["correct_gnn", "correct_structure", "correct_feature", "gt"]
PLANES = [
    "PredictionComparison",
    "SurroundingConsistency",
    "TrainStructureInfluence",
    "TrainFeatureInfluence",
]

OUT = REPO / "frontend" / "tests" / "fixtures" / "bank.json"


def build_client() -> TestClient:
    ds = Dataset.from_document(SIX_NODE_DOC)
    specs = trio_specs("gcn", ds)
    bundle = {}
    for role, spec in sorted(specs.items()):
        config = TrainConfig(epochs=200, seed=subseed(0, f"train:{role}"))
        bundle[role] = train(spec, config, ds)
    snapshot = build_snapshot(ds, bundle, k=2, seed=0)
    return TestClient(create_app(snapshot))


class Recorder:
    def __init__(self, client: TestClient):
        self.client = client
        self.responses: dict[str, dict] = {}
        self.selections: list[dict] = []

    def get(self, path: str) -> dict:
        reply = self.client.get(path)
        body = reply.json()
        self.responses[f"GET {path}"] = {"status": reply.status_code, "body": body}
        if reply.status_code != 200 and "error" not in body:
            raise RuntimeError(f"unexpected failure body for {path}: {body}")
        return body

    def post_selection(self, node_ids: list[int], provenance: str) -> str:
        reply = self.client.post(
            "/api/selection", json={"node_ids": node_ids, "provenance": provenance}
        )
        if reply.status_code != 200:
            raise RuntimeError(f"selection POST failed: {reply.text}")
        body = reply.json()
        self.selections.append(
            {
                "node_ids": list(node_ids),
                "provenance": provenance,
                "token": body["token"],
                "size": body["size"],
            }
        )
        return body["token"]


def segment_node_ids(payload: dict, axis_index: int, category: str) -> list[int]:
    """Union of the ids in the ribbons adjacent to a segment.

    Mirrors the view logic: the first axis reads the outgoing ribbon band,
    every later axis reads the band arriving from its left neighbour.
    """
    out: list[int] = []
    seen: set[int] = set()
    if axis_index == 0:
        band, key = payload["ribbons"][0], "category_a"
    else:
        band, key = payload["ribbons"][axis_index - 1], "category_b"
    for ribbon in band:
        if ribbon[key] == category:
            for node_id in ribbon["node_ids"]:
                if node_id not in seen:
                    seen.add(node_id)
                    out.append(node_id)
    return out


def lasso_target(projection: dict) -> tuple[list[int], float]:
    """Nodes left of the widest x-gap on the detail panel.

    Deterministic stand-in for a hand-drawn lasso: split the panel at the
    largest horizontal gap between neighbouring points and catch everything
    on the left side, in payload order.
    """
    xs = sorted({c[0] for c in projection["coords"]})
    if len(xs) < 2:
        raise RuntimeError("cannot split a single-column projection")
    gaps = [(xs[i + 1] - xs[i], i) for i in range(len(xs) - 1)]
    _, idx = max(gaps)
    cut = (xs[idx] + xs[idx + 1]) / 2.0
    ids = [
        node_id
        for node_id, coord in zip(projection["member_ids"], projection["coords"])
        if coord[0] < cut
    ]
    return ids, cut


def capture_selection_views(rec: Recorder, token: str) -> None:
    """Everything the views refetch after the store's selection changes.

    Projection is captured for auto and for explicit detail mode, since a
    cluster drill-down leaves the mode pinned to detail.
    """
    axes_arg = ",".join(AXES)
    rec.get(f"/api/parallel-sets?axes={axes_arg}&selection={token}")
    for plane in PLANES:
        rec.get(f"/api/projection?plane={plane}&selection={token}&mode=auto")
        rec.get(f"/api/projection?plane={plane}&selection={token}&mode=detail")
    rec.get(f"/api/features?selection={token}&sort=node_order")


def main() -> None:
    rec = Recorder(build_client())
    axes_arg = ",".join(AXES)

    # Boot traffic.
    meta = rec.get("/api/meta")
    rec.get("/api/metrics?subset=all")
    rec.get("/api/layout")

    # Initial view renders (subset "all", no selection).
    ps_all = rec.get(f"/api/parallel-sets?axes={axes_arg}&selection=all")
    projections = {
        plane: rec.get(f"/api/projection?plane={plane}&selection=all&mode=auto")
        for plane in PLANES
    }
    rec.get(f"/api/features?selection=all&sort=node_order")

    # Axis permutation after a drag reorder (first label dropped on second).
    moved = [AXES[1], AXES[0], *AXES[2:]]
    rec.get(f"/api/parallel-sets?axes={','.join(moved)}&selection=all")

    # Reduced axis list chosen through the modal.
    rec.get("/api/parallel-sets?axes=gt,pred_gnn&selection=all")

    # Segment click: last axis (gt), category "1".
    seg_axis_index = len(AXES) - 1
    seg_ids = segment_node_ids(ps_all, seg_axis_index, "1")
    if not seg_ids:
        raise RuntimeError("segment target is empty")
    seg_token = rec.post_selection(seg_ids, "parallel_sets_segment")
    rec.get(f"/api/selection/{seg_token}")
    capture_selection_views(rec, seg_token)

    # Ribbon click: first ribbon of the first band.
    ribbon = ps_all["ribbons"][0][0]
    ribbon_ids = list(ribbon["node_ids"])
    ribbon_token = rec.post_selection(ribbon_ids, "parallel_sets_ribbon")
    rec.get(f"/api/selection/{ribbon_token}")
    capture_selection_views(rec, ribbon_token)

    # Lasso on the PredictionComparison panel.
    lasso_ids, lasso_cut = lasso_target(projections["PredictionComparison"])
    lasso_token = rec.post_selection(lasso_ids, "lasso")
    rec.get(f"/api/selection/{lasso_token}")
    capture_selection_views(rec, lasso_token)

    # Node click in the graph view.
    click_id = 5
    click_token = rec.post_selection([click_id], "node_click")
    rec.get(f"/api/selection/{click_token}")
    capture_selection_views(rec, click_token)

    # Neighbourhood expansion for the clicked node.
    rec.get(f"/api/khop?seeds={click_id}&k=1")
    rec.get(f"/api/khop?seeds={click_id}&k=2")

    # Subset switch to the test split.
    subset_body = rec.get("/api/selection/test")
    capture_selection_views(rec, "test")
    rec.get("/api/selection/train")
    rec.get("/api/selection/validation")

    # Explicit mode toggles with no active selection.
    for plane in PLANES:
        rec.get(f"/api/projection?plane={plane}&selection=all&mode=detail")
        rec.get(f"/api/projection?plane={plane}&selection=all&mode=cluster")

    # Cluster drill-down: first cluster of the first plane in cluster mode.
    cluster_payload = rec.responses[
        "GET /api/projection?plane=PredictionComparison&selection=all&mode=cluster"
    ]["body"]
    first_cluster = cluster_payload["clusters"][0]
    members = rec.get(f"/api/cluster/{first_cluster['id']}/members")
    drill_token = rec.post_selection(list(members["node_ids"]), "lasso")
    rec.get(f"/api/selection/{drill_token}")
    capture_selection_views(rec, drill_token)

    # Feature matrix: sort toggle and brush window.
    rec.get("/api/features?selection=all&sort=frequency")
    rec.get("/api/features?selection=all&sort=node_order&brush=0,0")
    rec.get("/api/features?selection=all&sort=node_order&brush=0,1")

    # Feature matrix row click: per-node detail.
    rec.get(f"/api/node/{click_id}")
    rec.get("/api/node/0")

    # A real failure body, for the error-surfacing test.
    rec.get("/api/parallel-sets?axes=bogus&selection=all")

    bank = {
        "responses": rec.responses,
        "selections": rec.selections,
        "targets": {
            "axes": AXES,
            "moved_axes": moved,
            "segment": {
                "axis": AXES[seg_axis_index],
                "axis_index": seg_axis_index,
                "category": "1",
                "ids": seg_ids,
                "token": seg_token,
            },
            "ribbon": {
                "band": 0,
                "category_a": ribbon["category_a"],
                "category_b": ribbon["category_b"],
                "ids": ribbon_ids,
                "token": ribbon_token,
            },
            "lasso": {
                "plane": "PredictionComparison",
                "cut": lasso_cut,
                "ids": lasso_ids,
                "token": lasso_token,
            },
            "node_click": {"id": click_id, "token": click_token},
            "cluster": {
                "cid": first_cluster["id"],
                "ids": list(members["node_ids"]),
                "token": drill_token,
            },
            "test_subset_ids": subset_body["node_ids"],
            "meta": {"classes": meta["classes"], "nodes": meta["nodes"]},
        },
    }

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(bank, indent=1, sort_keys=True) + "\n")
    print(f"{len(rec.responses)} responses, {len(rec.selections)} selections -> {OUT}")


if __name__ == "__main__":
    main()
