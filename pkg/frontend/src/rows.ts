/** Typed access to the per-node metric rows.
 *
 * The service formats rows as strings (identically to the CSV export);
 * this module only parses those strings back — every number here is the
 * service's own value, never a client-side recomputation.
 */

import type { MetricsPayload } from "./types.js";

export interface NodeRecord {
  nodeId: number;
  gt: number;
  predGnn: number;
  predStructure: number;
  predFeature: number;
  correctGnn: boolean;
  correctStructure: boolean;
  correctFeature: boolean;
  confidence: number;
  degree: number;
  /** cn_label, cn_label_pred, cn_pred_label, cn_pred. */
  cn: [number, number, number, number];
  /** Hops to the nearest training node; Infinity when unreachable. */
  distanceToTrain: number;
  closeness: number;
  nearestDominant: string;
  topkDominant: string;
  spd: number[];
  kfs: number[];
  similarTrainIds: number[];
}

export function parseRow(header: string[], row: string[], classCount: number): NodeRecord {
  const at = (name: string): string => {
    const idx = header.indexOf(name);
    if (idx < 0 || idx >= row.length) {
      throw new Error(`metric column ${name} missing from row`);
    }
    return row[idx]!;
  };
  const num = (name: string): number => {
    const text = at(name);
    return text === "inf" ? Infinity : Number(text);
  };
  const flag = (name: string): boolean => at(name) === "True";
  const series = (prefix: string): number[] => {
    const out: number[] = [];
    for (let c = 0; c < classCount; c += 1) out.push(num(`${prefix}_${c}`));
    return out;
  };
  const similarText = at("similar_train_ids").trim();
  return {
    nodeId: num("node_id"),
    gt: num("gt"),
    predGnn: num("pred_gnn"),
    predStructure: num("pred_structure"),
    predFeature: num("pred_feature"),
    correctGnn: flag("correct_gnn"),
    correctStructure: flag("correct_structure"),
    correctFeature: flag("correct_feature"),
    confidence: num("confidence"),
    degree: num("degree"),
    cn: [num("cn_label"), num("cn_label_pred"), num("cn_pred_label"), num("cn_pred")],
    distanceToTrain: num("distance_to_train"),
    closeness: num("closeness"),
    nearestDominant: at("nearest_dominant"),
    topkDominant: at("topk_dominant"),
    spd: series("spd"),
    kfs: series("kfs"),
    similarTrainIds: similarText === "" ? [] : similarText.split(" ").map(Number),
  };
}

export class MetricsIndex {
  private readonly records = new Map<number, NodeRecord>();
  /** Largest degree in the payload; radar glyphs use it as the spoke scale. */
  readonly maxDegree: number;

  constructor(payload: MetricsPayload, classCount: number) {
    let maxDegree = 1;
    payload.node_ids.forEach((nodeId, i) => {
      const row = payload.rows[i];
      if (!row) return;
      const record = parseRow(payload.header, row, classCount);
      this.records.set(nodeId, record);
      if (record.degree > maxDegree) maxDegree = record.degree;
    });
    this.maxDegree = maxDegree;
  }

  get(nodeId: number): NodeRecord | undefined {
    return this.records.get(nodeId);
  }

  require(nodeId: number): NodeRecord {
    const record = this.records.get(nodeId);
    if (!record) throw new Error(`no metric row for node ${nodeId}`);
    return record;
  }
}
