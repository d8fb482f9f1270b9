"""View-ready analytics over the metric table: plane distances, clustering,
projection, layouts, binning, flow aggregation, and orderings."""

from gnnscope.analysis.aggregate import aggregate_cluster, majority
from gnnscope.analysis.binning import (
    ALL_AXES,
    CATEGORICAL_AXES,
    CONTINUOUS_AXES,
    BinningError,
    BinningSpec,
    MetricBinning,
    axis_categories,
    axis_category_order,
    bin_metrics,
    default_binning_spec,
    quartile_binning,
)
from gnnscope.analysis.clustering import (
    ClusterResult,
    cluster,
    cluster_distances,
    partition_from_merges,
)
from gnnscope.analysis.layout import (
    graph_layout,
    k_hop,
    layout_epsilon,
    overlapping_pairs,
    resolve_overlap,
)
from gnnscope.analysis.ordering import (
    SIMILAR_COSINE,
    FeatureOrdering,
    cosine_similarity_matrix,
    optimal_leaf_order,
    order_features,
    ordering_cost,
)
from gnnscope.analysis.parallel_sets import (
    AxisSegment,
    ParallelSetsResult,
    Ribbon,
    parallel_sets,
)
from gnnscope.analysis.planes import (
    PLANE_BOUNDS,
    PLANES,
    aggregate_distance_matrix,
    distance_matrix,
    max_degree_of,
    plane_distance,
    plane_features,
)
from gnnscope.analysis.projection import (
    joint_probabilities,
    project,
    project_distances,
    project_distances_trace,
)
from gnnscope.analysis.views import (
    CLUSTER_THRESHOLD,
    DEFAULT_TARGET_CLUSTERS,
    ProjectionPlane,
    projection_plane,
)

__all__ = [
    "ALL_AXES",
    "CATEGORICAL_AXES",
    "CLUSTER_THRESHOLD",
    "CONTINUOUS_AXES",
    "DEFAULT_TARGET_CLUSTERS",
    "PLANES",
    "PLANE_BOUNDS",
    "SIMILAR_COSINE",
    "AxisSegment",
    "BinningError",
    "BinningSpec",
    "ClusterResult",
    "FeatureOrdering",
    "MetricBinning",
    "ParallelSetsResult",
    "ProjectionPlane",
    "Ribbon",
    "aggregate_cluster",
    "aggregate_distance_matrix",
    "axis_categories",
    "axis_category_order",
    "bin_metrics",
    "cluster",
    "cluster_distances",
    "cosine_similarity_matrix",
    "default_binning_spec",
    "distance_matrix",
    "graph_layout",
    "joint_probabilities",
    "k_hop",
    "layout_epsilon",
    "majority",
    "max_degree_of",
    "optimal_leaf_order",
    "order_features",
    "ordering_cost",
    "overlapping_pairs",
    "parallel_sets",
    "partition_from_merges",
    "plane_distance",
    "plane_features",
    "project",
    "project_distances",
    "project_distances_trace",
    "projection_plane",
    "quartile_binning",
    "resolve_overlap",
]
