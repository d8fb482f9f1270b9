"""Categorical views of the metric table.

Continuous metrics become half-open bins [lo, hi) named for display; the
last bin is closed so the top of the range belongs to it.  Categorical
metrics pass through with a canonical string rendering.  The default bins
are shipped here as data and can be overridden per metric.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from gnnscope.metrics import MetricsTable


class BinningError(ValueError):
    pass


@dataclass(frozen=True)
class MetricBinning:
    """Ordered bin edges and display names for one continuous metric.

    ``edges`` has one more entry than ``names``; bin i covers
    [edges[i], edges[i+1]), except the last bin which also includes its
    upper edge.  ``unreachable_name``, when set, absorbs non-finite values.
    """

    edges: tuple[float, ...]
    names: tuple[str, ...]
    unreachable_name: str | None = None

    def __post_init__(self) -> None:
        if len(self.edges) != len(self.names) + 1:
            raise BinningError("need exactly one more edge than bin names")
        if len(self.names) == 0:
            raise BinningError("at least one bin required")
        e = np.asarray(self.edges, dtype=np.float64)
        if not (np.diff(e) > 0).all():
            raise BinningError("bin edges must be strictly increasing")

    def assign(self, value: float) -> str:
        v = float(value)
        if not np.isfinite(v):
            if self.unreachable_name is None:
                raise BinningError(f"non-finite value {v} has no bin")
            return self.unreachable_name
        if v < self.edges[0] or v > self.edges[-1]:
            raise BinningError(
                f"value {v} outside binning coverage [{self.edges[0]}, {self.edges[-1]}]"
            )
        if v == self.edges[-1]:
            return self.names[-1]
        idx = int(np.searchsorted(self.edges, v, side="right")) - 1
        return self.names[idx]

    def assign_many(self, values) -> list[str]:
        return [self.assign(v) for v in np.asarray(values, dtype=np.float64)]


def _edge_label(x: float) -> str:
    # Whole numbers other than zero keep one decimal ("1.0"), matching the
    # frozen display names used throughout ("[0.75,1.0]").
    if x == int(x) and x != 0:
        return f"{x:.1f}"
    return f"{x:g}"


def quartile_binning(lo: float = 0.0, hi: float = 1.0) -> MetricBinning:
    """Four equal bins over [lo, hi], labelled with interval notation."""
    edges = tuple(lo + (hi - lo) * q / 4.0 for q in range(5))
    names = []
    for i in range(4):
        close = "]" if i == 3 else ")"
        names.append(f"[{_edge_label(edges[i])},{_edge_label(edges[i + 1])}{close}")
    return MetricBinning(edges=edges, names=tuple(names))


CONTINUOUS_AXES = (
    "confidence",
    "degree",
    "distance_to_train",
    "cn_label",
    "cn_label_pred",
    "cn_pred_label",
    "cn_pred",
)

CATEGORICAL_AXES = (
    "gt",
    "pred_gnn",
    "pred_structure",
    "pred_feature",
    "correct_gnn",
    "correct_structure",
    "correct_feature",
    "nearest_dominant",
    "topk_dominant",
)

ALL_AXES = CATEGORICAL_AXES + CONTINUOUS_AXES


@dataclass(frozen=True)
class BinningSpec:
    """Per-metric binnings, keyed by continuous axis name."""

    bins: Mapping[str, MetricBinning]

    def binning_for(self, axis: str) -> MetricBinning:
        if axis not in self.bins:
            raise BinningError(f"no binning configured for axis {axis!r}")
        return self.bins[axis]

    def replace(self, **overrides: MetricBinning) -> "BinningSpec":
        merged = dict(self.bins)
        for axis, binning in overrides.items():
            if axis not in CONTINUOUS_AXES:
                raise BinningError(f"{axis!r} is not a continuous axis")
            merged[axis] = binning
        return BinningSpec(bins=merged)


def default_binning_spec() -> BinningSpec:
    degree = MetricBinning(
        edges=(0.0, 1.0, 3.0, 6.0, 11.0, np.inf),
        names=("0", "1-2", "3-5", "6-10", ">10"),
    )
    distance = MetricBinning(
        edges=(0.0, 1.0, 2.0, 3.0, 5.0, np.inf),
        names=("0", "1", "2", "3-4", ">=5"),
        unreachable_name="unreachable",
    )
    quart = quartile_binning()
    return BinningSpec(
        bins={
            "confidence": quart,
            "degree": degree,
            "distance_to_train": distance,
            "cn_label": quart,
            "cn_label_pred": quart,
            "cn_pred_label": quart,
            "cn_pred": quart,
        }
    )


def _categorical_values(table: MetricsTable, axis: str) -> list[str]:
    if axis == "gt":
        return [str(int(v)) for v in table.gt]
    if axis == "pred_gnn":
        return [str(int(v)) for v in table.p1]
    if axis == "pred_structure":
        return [str(int(v)) for v in table.p2]
    if axis == "pred_feature":
        return [str(int(v)) for v in table.p3]
    if axis == "correct_gnn":
        return [str(bool(v)) for v in table.correct1]
    if axis == "correct_structure":
        return [str(bool(v)) for v in table.correct2]
    if axis == "correct_feature":
        return [str(bool(v)) for v in table.correct3]
    if axis == "nearest_dominant":
        return list(table.nearest_dominant)
    if axis == "topk_dominant":
        return list(table.topk_dominant)
    raise BinningError(f"unknown categorical axis {axis!r}")


def _continuous_values(table: MetricsTable, axis: str) -> np.ndarray:
    if axis == "confidence":
        return table.conf
    if axis == "degree":
        return table.deg.astype(np.float64)
    if axis == "distance_to_train":
        return table.dis
    if axis == "cn_label":
        return table.cn[:, 0]
    if axis == "cn_label_pred":
        return table.cn[:, 1]
    if axis == "cn_pred_label":
        return table.cn[:, 2]
    if axis == "cn_pred":
        return table.cn[:, 3]
    raise BinningError(f"unknown continuous axis {axis!r}")


def axis_categories(table: MetricsTable, spec: BinningSpec, axis: str) -> list[str]:
    """Per-node category strings for one axis, in node order."""
    if axis in CATEGORICAL_AXES:
        return _categorical_values(table, axis)
    if axis in CONTINUOUS_AXES:
        return spec.binning_for(axis).assign_many(_continuous_values(table, axis))
    raise BinningError(f"unknown axis {axis!r}")


def axis_category_order(table: MetricsTable, spec: BinningSpec, axis: str) -> list[str]:
    """Canonical display order of an axis's category universe."""
    if axis in CONTINUOUS_AXES:
        binning = spec.binning_for(axis)
        order = list(binning.names)
        if binning.unreachable_name is not None:
            order.append(binning.unreachable_name)
        return order
    if axis in ("gt", "pred_gnn", "pred_structure", "pred_feature"):
        classes = int(max(table.gt.max(), table.p1.max(), table.p2.max(), table.p3.max())) + 1
        return [str(c) for c in range(classes)]
    if axis.startswith("correct_"):
        return ["True", "False"]
    if axis in ("nearest_dominant", "topk_dominant"):
        return ["True", "False", "NotSure"]
    raise BinningError(f"unknown axis {axis!r}")


def bin_metrics(
    table: MetricsTable,
    spec: BinningSpec,
    axes: Sequence[str] = ALL_AXES,
) -> list[tuple[str, ...]]:
    """One categorical tuple per node, columns following ``axes``."""
    columns = [axis_categories(table, spec, axis) for axis in axes]
    return [tuple(col[i] for col in columns) for i in range(len(table.gt))]
