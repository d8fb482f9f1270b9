"""Read-only HTTP interface exposing one analysis snapshot."""

from gnnscope.service.app import ApiError, create_app, selection_token, serve
from gnnscope.service.snapshot import (
    Snapshot,
    build_snapshot,
    layout_seed,
    projection_seed,
)
from gnnscope.service.wire import (
    dump_bytes,
    layout_wire,
    parallel_sets_wire,
    projection_wire,
)

__all__ = [
    "ApiError",
    "Snapshot",
    "build_snapshot",
    "create_app",
    "dump_bytes",
    "layout_seed",
    "layout_wire",
    "parallel_sets_wire",
    "projection_seed",
    "projection_wire",
    "selection_token",
    "serve",
]
