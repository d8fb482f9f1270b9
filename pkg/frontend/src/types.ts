/** Wire shapes of the service API, transcribed field-for-field.
 *
 * The client never derives displayed numbers of its own: everything the
 * views show is read out of these payloads (or parsed verbatim from the
 * metric row strings, see rows.ts).
 */

export type Role = "gnn" | "structure" | "feature";

export interface Meta {
  nodes: number;
  classes: number;
  feature_dim: number;
  class_names: string[];
  accuracy: Record<Role, Record<"train" | "validation" | "test", number>>;
  k: number;
  planes: string[];
  seed: number;
  version: string;
}

export interface MetricsPayload {
  header: string[];
  node_ids: number[];
  /** Row strings exactly as the CSV export formats them. */
  rows: string[][];
}

export interface SelectionCreated {
  token: string;
  size: number;
}

export interface SelectionPayload {
  token: string;
  node_ids: number[];
}

export interface Segment {
  category: string;
  count: number;
}

export interface Ribbon {
  category_a: string;
  category_b: string;
  count: number;
  node_ids: number[];
}

export interface ParallelSetsPayload {
  axes: string[];
  selection_size: number;
  /** One list per axis. */
  segments: Segment[][];
  /** One list per adjacent axis pair. */
  ribbons: Ribbon[][];
}

export interface ClusterAggregate {
  id: string;
  member_ids: number[];
  size: number;
  gt: number;
  p1: number;
  p2: number;
  p3: number;
  conf: number;
  norm_degree: number;
  cn: number[];
  spd: number[];
  closeness: number;
  kfs: number[];
  radius: number;
}

export interface ProjectionPayload {
  plane: string;
  mode: "detail" | "cluster";
  member_ids: number[];
  coords: [number, number][];
  radii: number[];
  clusters: ClusterAggregate[] | null;
}

export interface ClusterMembersPayload {
  id: string;
  node_ids: number[];
}

export interface LayoutPayload {
  node_ids: number[];
  coords: [number, number][];
  edges: [number, number][];
}

export interface KHopPayload {
  node_ids: number[];
}

export interface FeaturesPayload {
  node_ids: number[];
  /** GNN predicted class per displayed row, aligned with node_ids. */
  pred: number[];
  /** Feature dimension indices in display order (post-brush). */
  dimensions: number[];
  /** One value row per node, aligned with dimensions. */
  values: number[][];
  /** Per displayed dimension: count of selected nodes with value > 0. */
  support: number[];
  /** Flag per adjacent displayed row pair: rows are feature-similar. */
  similar_pairs: boolean[];
  sort: "node_order" | "frequency";
  reference_node: number | null;
}

export interface SimilarEntry {
  node_id: number;
  row: string[];
  features: number[];
}

export interface NodeDetailPayload {
  node_id: number;
  header: string[];
  row: string[];
  features: number[];
  similar: SimilarEntry[];
}

export interface ApiErrorBody {
  error: { code: string; message: string };
}

export type Provenance =
  | "parallel_sets_segment"
  | "parallel_sets_ribbon"
  | "lasso"
  | "node_click"
  | "subset_filter";

export type Subset = "all" | "train" | "validation" | "test";

export type ProjectionMode = "auto" | "detail" | "cluster";
