"""Numeric kernel dispatch.

The heavy inner loops (pairwise distance matrices, BFS sweeps, projection
gradients, collision resolution, force-directed layout, linkage) exist twice:
a compiled extension (``gnnscope._kernels._native``, built from Cython when a
compiler is available) and a pure-numpy fallback with identical signatures
and tie-breaking.  Selection happens once at import time:

* ``GNNSCOPE_KERNELS=native``  require the extension, raise if missing
* ``GNNSCOPE_KERNELS=python``  force the fallback
* unset or ``auto``            prefer the extension, silently fall back

``BACKEND`` names the backend actually in use.
"""

from __future__ import annotations

import os

from gnnscope._kernels import _pyfallback

_choice = os.environ.get("GNNSCOPE_KERNELS", "auto").strip().lower()
if _choice not in ("auto", "native", "python"):
    raise RuntimeError(
        f"GNNSCOPE_KERNELS={_choice!r}: expected auto, native, or python"
    )

_impl = None
if _choice in ("auto", "native"):
    try:
        from gnnscope._kernels import _native as _impl  # type: ignore[no-redef]
    except ImportError:
        if _choice == "native":
            raise RuntimeError(
                "GNNSCOPE_KERNELS=native but the compiled extension is not "
                "installed; rebuild the package or use GNNSCOPE_KERNELS=python"
            ) from None
if _impl is None:
    _impl = _pyfallback

BACKEND: str = "native" if _impl is not _pyfallback else "python"

pairwise_mixed_sq = _impl.pairwise_mixed_sq
bfs_depths = _impl.bfs_depths
tsne_forces = _impl.tsne_forces
resolve_collisions = _impl.resolve_collisions
layout_forces = _impl.layout_forces
complete_linkage = _impl.complete_linkage

__all__ = [
    "BACKEND",
    "pairwise_mixed_sq",
    "bfs_depths",
    "tsne_forces",
    "resolve_collisions",
    "layout_forces",
    "complete_linkage",
]
