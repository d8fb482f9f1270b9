/** The documented vocabulary of the service API: metric axes the
 * parallel-sets endpoint accepts and the four projection planes. */

export const ALL_AXES: readonly string[] = [
  "gt",
  "pred_gnn",
  "pred_structure",
  "pred_feature",
  "correct_gnn",
  "correct_structure",
  "correct_feature",
  "nearest_dominant",
  "topk_dominant",
  "confidence",
  "degree",
  "distance_to_train",
  "cn_label",
  "cn_label_pred",
  "cn_pred_label",
  "cn_pred",
];

/** The service refuses more axes than this. */
export const MAX_AXES = 6;
/** Above this the diagram gets hard to read; the chooser warns. */
export const COMFORTABLE_AXES = 4;

export const PLANES: readonly string[] = [
  "PredictionComparison",
  "SurroundingConsistency",
  "TrainStructureInfluence",
  "TrainFeatureInfluence",
];

export const PLANE_LABELS: Record<string, string> = {
  PredictionComparison: "Prediction comparison",
  SurroundingConsistency: "Surrounding consistency",
  TrainStructureInfluence: "Training structure influence",
  TrainFeatureInfluence: "Training feature influence",
};

/** Class axes carry numeric class-id categories: segments are colored by
 * class and labeled with the class name from /api/meta.  Every other axis
 * (verdicts, bins) cycles the neutral sequence. */
export const CLASS_VALUED_AXES: ReadonlySet<string> = new Set([
  "gt",
  "pred_gnn",
  "pred_structure",
  "pred_feature",
]);
