"""Read-only HTTP facade over one snapshot.

Every endpoint derives purely from the snapshot; the only mutable state is
a write-once selection cache and a response-byte cache, so repeated
identical requests return byte-identical bodies.  Query parameters arrive
as raw strings and are parsed by hand: anything malformed becomes a 400
with a machine-readable error body, unknown ids and tokens become 404.
"""

from __future__ import annotations

import hashlib
import warnings

import numpy as np
from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from gnnscope.analysis import (
    ALL_AXES,
    PLANES,
    order_features,
    parallel_sets,
    projection_plane,
    k_hop,
)
from gnnscope.graph_store import MASK_NAMES, subset_mask
from gnnscope.service.snapshot import Snapshot, projection_seed
from gnnscope.service.wire import (
    dump_bytes,
    layout_wire,
    parallel_sets_wire,
    projection_wire,
)

PROVENANCES = (
    "parallel_sets_segment",
    "parallel_sets_ribbon",
    "lasso",
    "node_click",
    "subset_filter",
)

SUBSET_TOKENS = ("all",) + MASK_NAMES

# Selections larger than this skip the seriation pass in the feature view
# (rows fall back to ascending id order); the cubic leaf-ordering step is
# the only part of the pipeline that cannot take thousands of rows.
FEATURE_SERIATION_LIMIT = 600

K_HOP_CHOICES = (1, 2)


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _bad(code: str, message: str) -> ApiError:
    return ApiError(400, code, message)


def _parse_int(text: str, name: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise _bad("malformed_parameter", f"{name} must be an integer, got {text!r}")


def _parse_id_list(text: str, name: str) -> list[int]:
    if text.strip() == "":
        raise _bad("malformed_parameter", f"{name} must list node ids")
    return [_parse_int(part, name) for part in text.split(",")]


def selection_token(node_ids, provenance: str) -> str:
    body = dump_bytes({"node_ids": list(node_ids), "provenance": provenance})
    return hashlib.sha1(body).hexdigest()[:16]


def create_app(snapshot: Snapshot) -> FastAPI:
    app = FastAPI(title="gnnscope", docs_url=None, redoc_url=None)
    dataset = snapshot.dataset
    table = snapshot.table
    n = dataset.node_count

    selections: dict[str, tuple[tuple[int, ...], str]] = {}
    response_cache: dict[str, bytes] = {}
    cluster_view_cache: dict[tuple[str, str], object] = {}

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"error": {"code": exc.code, "message": exc.message}},
        )

    def cached(key: str, build) -> Response:
        body = response_cache.get(key)
        if body is None:
            body = dump_bytes(build())
            response_cache[key] = body
        return Response(content=body, media_type="application/json")

    def check_node(i: int) -> int:
        if not 0 <= i < n:
            raise ApiError(404, "unknown_node", f"node {i} does not exist")
        return i

    def resolve_selection(token: str) -> np.ndarray:
        if token in SUBSET_TOKENS:
            return subset_mask(dataset, token)
        entry = selections.get(token)
        if entry is None:
            raise ApiError(404, "unknown_selection", f"no selection {token!r}")
        return np.asarray(entry[0], dtype=np.int64)

    def require_plane(plane: str) -> str:
        if plane not in PLANES:
            raise _bad("unknown_plane", f"plane must be one of {list(PLANES)}")
        return plane

    def nonempty(ids: np.ndarray, what: str) -> np.ndarray:
        if ids.size == 0:
            raise _bad("empty_selection", f"{what} needs a non-empty selection")
        return ids

    @app.get("/api/meta")
    def meta():
        return cached(
            "meta",
            lambda: {
                "nodes": n,
                "classes": dataset.class_count,
                "feature_dim": dataset.feature_dim,
                "class_names": [
                    dataset.class_name(c) for c in range(dataset.class_count)
                ],
                "accuracy": {
                    role: dict(model.accuracy)
                    for role, model in sorted(snapshot.bundle.items())
                },
                "k": table.k,
                "planes": list(PLANES),
                "seed": snapshot.seed,
                "version": snapshot.version,
            },
        )

    @app.get("/api/metrics")
    def metrics(subset: str = "all"):
        if subset not in SUBSET_TOKENS:
            raise _bad("unknown_subset", f"subset must be one of {list(SUBSET_TOKENS)}")
        ids = resolve_selection(subset)
        return cached(
            f"metrics|{subset}",
            lambda: {
                "header": table.header(),
                "node_ids": [int(i) for i in ids],
                "rows": [table.format_row(int(i)) for i in ids],
            },
        )

    @app.post("/api/selection")
    async def make_selection(request: Request):
        try:
            body = await request.json()
        except Exception:
            raise _bad("malformed_body", "request body must be JSON")
        if not isinstance(body, dict):
            raise _bad("malformed_body", "request body must be a JSON object")
        raw_ids = body.get("node_ids")
        provenance = body.get("provenance")
        if not isinstance(raw_ids, list) or not all(
            isinstance(v, int) and not isinstance(v, bool) for v in raw_ids
        ):
            raise _bad("malformed_body", "node_ids must be a list of integers")
        if provenance not in PROVENANCES:
            raise _bad("malformed_body", f"provenance must be one of {list(PROVENANCES)}")
        for v in raw_ids:
            if not 0 <= v < n:
                raise _bad("invalid_node", f"node id {v} out of range")
        ordered = tuple(dict.fromkeys(raw_ids))
        token = selection_token(ordered, provenance)
        selections.setdefault(token, (ordered, provenance))
        return {"token": token, "size": len(ordered)}

    @app.get("/api/selection/{token}")
    def get_selection(token: str):
        ids = resolve_selection(token)
        return cached(
            f"selection|{token}",
            lambda: {"token": token, "node_ids": [int(i) for i in ids]},
        )

    @app.get("/api/parallel-sets")
    def parallel_sets_endpoint(axes: str = "", selection: str = "all"):
        if axes.strip() == "":
            raise _bad("malformed_parameter", "axes must list metric names")
        axis_list = [a.strip() for a in axes.split(",")]
        for axis in axis_list:
            if axis not in ALL_AXES:
                raise _bad("unknown_axis", f"unknown axis {axis!r}")
        if len(axis_list) > 6:
            raise _bad("too_many_axes", "at most 6 axes supported")
        ids = resolve_selection(selection)

        def build():
            # The library warns about crowded axis counts; the API contract
            # is a hard cap at 6, checked above.
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                result = parallel_sets(table, snapshot.binning, axis_list, ids)
            return parallel_sets_wire(result)

        return cached(f"parallel-sets|{axes}|{selection}", build)

    @app.get("/api/projection")
    def projection(plane: str = "", selection: str = "all", mode: str = "auto"):
        require_plane(plane)
        if mode not in ("auto", "detail", "cluster"):
            raise _bad("unknown_mode", "mode must be auto, detail, or cluster")
        ids = nonempty(resolve_selection(selection), "projection")
        return cached(
            f"projection|{plane}|{selection}|{mode}",
            lambda: projection_wire(
                projection_plane(
                    table,
                    plane,
                    ids,
                    mode=mode,
                    seed=projection_seed(snapshot.seed, plane),
                ),
                cid_prefix=f"{plane}.{selection}",
            ),
        )

    @app.get("/api/cluster/{cid}/members")
    def cluster_members(cid: str):
        parts = cid.split(".")
        if len(parts) != 3:
            raise _bad("malformed_parameter", "cluster id must be plane.selection.index")
        plane, selection, index_text = parts
        require_plane(plane)
        index = _parse_int(index_text, "cluster index")
        ids = nonempty(resolve_selection(selection), "clustering")
        view_key = (plane, selection)
        view = cluster_view_cache.get(view_key)
        if view is None:
            view = projection_plane(
                table, plane, ids, mode="cluster",
                seed=projection_seed(snapshot.seed, plane),
            )
            cluster_view_cache[view_key] = view
        if not 0 <= index < len(view.clusters):
            raise ApiError(404, "unknown_cluster", f"no cluster {cid!r}")
        return cached(
            f"cluster|{cid}",
            lambda: {
                "id": cid,
                "node_ids": list(view.clusters[index]["member_ids"]),
            },
        )

    @app.get("/api/layout")
    def layout():
        return cached("layout", lambda: layout_wire(snapshot.layout, dataset.edges))

    @app.get("/api/khop")
    def khop(seeds: str = "", k: str = "1"):
        seed_ids = _parse_id_list(seeds, "seeds")
        for s in seed_ids:
            check_node(s)
        hops = _parse_int(k, "k")
        if hops not in K_HOP_CHOICES:
            raise _bad("malformed_parameter", f"k must be one of {list(K_HOP_CHOICES)}")
        return cached(
            f"khop|{seeds}|{k}",
            lambda: {
                "node_ids": [int(i) for i in k_hop(dataset, seed_ids, hops)],
            },
        )

    @app.get("/api/features")
    def features(selection: str = "all", sort: str = "node_order", brush: str = ""):
        if sort not in ("node_order", "frequency"):
            raise _bad("unknown_sort", "sort must be node_order or frequency")
        ids = nonempty(resolve_selection(selection), "the feature view")
        span = None
        if brush.strip():
            parts = brush.split(",")
            if len(parts) != 2:
                raise _bad("malformed_parameter", "brush must be lo,hi")
            lo = _parse_int(parts[0], "brush lo")
            hi = _parse_int(parts[1], "brush hi")
            if not 0 <= lo <= hi < dataset.feature_dim:
                raise _bad("malformed_parameter", "brush range outside dimensions")
            span = (lo, hi)

        def build():
            ordering = order_features(
                dataset,
                table,
                [int(i) for i in ids],
                mode=sort,
                seriate=ids.size <= FEATURE_SERIATION_LIMIT,
            )
            dims = list(ordering.dimension_order)
            if span is not None:
                dims = dims[span[0] : span[1] + 1]
            X = dataset.features
            rows = [[float(X[i, d]) for d in dims] for i in ordering.node_ids]
            support = [int((X[np.asarray(ids), d] > 0.0).sum()) for d in dims]
            return {
                "node_ids": list(ordering.node_ids),
                "pred": [int(table.p1[i]) for i in ordering.node_ids],
                "dimensions": dims,
                "values": rows,
                "support": support,
                "similar_pairs": list(ordering.similar_pairs),
                "sort": sort,
                "reference_node": ordering.reference_node,
            }

        return cached(f"features|{selection}|{sort}|{brush}", build)

    @app.get("/api/node/{node_id}")
    def node_detail(node_id: str):
        i = check_node(_parse_int(node_id, "node id"))

        def build():
            X = dataset.features
            similar = [
                {
                    "node_id": int(t),
                    "row": table.format_row(int(t)),
                    "features": [float(v) for v in X[int(t)]],
                }
                for t in table.similar_train_ids[i]
            ]
            return {
                "node_id": i,
                "header": table.header(),
                "row": table.format_row(i),
                "features": [float(v) for v in X[i]],
                "similar": similar,
            }

        return cached(f"node|{i}", build)

    return app


def serve(snapshot: Snapshot, bind: str = "127.0.0.1:8234") -> None:
    """Run the service until interrupted."""
    import uvicorn

    host, _, port_text = bind.rpartition(":")
    if not host or not port_text.isdigit():
        raise ValueError(f"bind address must be host:port, got {bind!r}")
    uvicorn.run(create_app(snapshot), host=host, port=int(port_text), log_level="warning")
