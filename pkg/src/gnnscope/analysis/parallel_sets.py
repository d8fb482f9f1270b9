"""Categorical flow aggregation: axis segments and the ribbons between them.

Counts are computed over a node selection only.  Every ribbon carries the
ids of the nodes flowing through it so a click on the ribbon can become a
selection.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from gnnscope.analysis.binning import (
    ALL_AXES,
    BinningError,
    BinningSpec,
    axis_categories,
    axis_category_order,
)
from gnnscope.metrics import MetricsTable

MAX_AXES = 6
COMFORTABLE_AXES = 4


@dataclass(frozen=True)
class AxisSegment:
    category: str
    count: int


@dataclass(frozen=True)
class Ribbon:
    """Flow between adjacent axes: nodes in category_a on the left axis and
    category_b on the right one."""

    category_a: str
    category_b: str
    count: int
    node_ids: tuple[int, ...]


@dataclass(frozen=True)
class ParallelSetsResult:
    axes: tuple[str, ...]
    segments: tuple[tuple[AxisSegment, ...], ...]
    ribbons: tuple[tuple[Ribbon, ...], ...]
    selection_size: int


def parallel_sets(
    table: MetricsTable,
    spec: BinningSpec,
    axes,
    selection,
) -> ParallelSetsResult:
    """Tally segments and ribbons for the given axis order over a selection.

    Categories appear in each axis's canonical order, empty ones omitted.
    More than four axes works but draws a warning; more than six is refused.
    """
    axes = tuple(axes)
    if not axes:
        raise ValueError("at least one axis required")
    if len(axes) > MAX_AXES:
        raise ValueError(f"at most {MAX_AXES} axes supported, got {len(axes)}")
    if len(axes) > COMFORTABLE_AXES:
        warnings.warn(
            f"{len(axes)} axes will be hard to read; prefer {COMFORTABLE_AXES} or fewer",
            stacklevel=2,
        )
    for axis in axes:
        if axis not in ALL_AXES:
            raise BinningError(f"unknown axis {axis!r}")

    ids = np.unique(np.asarray(list(selection), dtype=np.int64))
    n = len(table.gt)
    if ids.size and (ids.min() < 0 or ids.max() >= n):
        raise ValueError("selection node id out of range")

    per_axis = [axis_categories(table, spec, axis) for axis in axes]
    orders = [
        {c: k for k, c in enumerate(axis_category_order(table, spec, axis))}
        for axis in axes
    ]

    segments = []
    for cats, order in zip(per_axis, orders):
        tally: dict[str, int] = {}
        for i in ids:
            c = cats[i]
            tally[c] = tally.get(c, 0) + 1
        segments.append(
            tuple(
                AxisSegment(category=c, count=tally[c])
                for c in sorted(tally, key=order.__getitem__)
            )
        )

    ribbons = []
    for a in range(len(axes) - 1):
        flows: dict[tuple[str, str], list[int]] = {}
        for i in ids:
            key = (per_axis[a][i], per_axis[a + 1][i])
            flows.setdefault(key, []).append(int(i))
        keyed = sorted(
            flows, key=lambda k: (orders[a][k[0]], orders[a + 1][k[1]])
        )
        ribbons.append(
            tuple(
                Ribbon(
                    category_a=k[0],
                    category_b=k[1],
                    count=len(flows[k]),
                    node_ids=tuple(flows[k]),
                )
                for k in keyed
            )
        )

    return ParallelSetsResult(
        axes=axes,
        segments=tuple(segments),
        ribbons=tuple(ribbons),
        selection_size=int(ids.size),
    )
