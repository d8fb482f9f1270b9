/** Glyph geometry for the projection planes and the graph view.
 *
 * The geometry here is this client's documented convention (angles,
 * slice order, tick placement); the encoded values themselves all come
 * from service payloads.
 *
 * - prediction comparison: pie-with-ring — outer ring colored by the
 *   ground-truth class; inner pie split into three equal sectors showing
 *   the gnn / structure / feature predictions clockwise from 12 o'clock.
 * - surrounding consistency: radar polygon over five spokes — the four
 *   center-neighbor rates then normalized degree, clockwise from
 *   12 o'clock; filled with the gnn prediction's class color.
 * - training-structure influence: split rectangle — vertical slices with
 *   widths proportional to the per-class shortest-path label shares —
 *   plus a triangular closeness tick under the rectangle at
 *   closeness × width.
 * - training-feature influence: the same split rectangle over the
 *   feature-similarity label shares, no tick.
 * - graph node: inner disc colored by ground truth, outer ring split into
 *   three equal arcs for the gnn / structure / feature predictions.
 */

import { arc } from "d3-shape";

import { svgEl } from "./dom.js";
import { classColor } from "./palette.js";
import type { NodeRecord } from "./rows.js";
import type { ClusterAggregate } from "./types.js";

const TAU = Math.PI * 2;

/** The value triple (gnn, structure, feature) a comparison glyph shows. */
export interface PredictionTriple {
  gt: number;
  predGnn: number;
  predStructure: number;
  predFeature: number;
}

function sectorPath(innerRadius: number, outerRadius: number, startFrac: number, endFrac: number): string {
  const gen = arc();
  return (
    gen({
      innerRadius,
      outerRadius,
      startAngle: startFrac * TAU,
      endAngle: endFrac * TAU,
    }) ?? ""
  );
}

export function predictionComparisonGlyph(triple: PredictionTriple, r: number): SVGGElement {
  const g = svgEl("g", { class: "glyph glyph-comparison" });
  g.appendChild(
    svgEl("path", {
      d: sectorPath(0.7 * r, r, 0, 1),
      fill: classColor(triple.gt),
      class: "ring-gt",
    }),
  );
  const sectors: [string, number][] = [
    ["gnn", triple.predGnn],
    ["structure", triple.predStructure],
    ["feature", triple.predFeature],
  ];
  sectors.forEach(([role, cls], i) => {
    g.appendChild(
      svgEl("path", {
        d: sectorPath(0, 0.62 * r, i / 3, (i + 1) / 3),
        fill: classColor(cls),
        class: `sector-${role}`,
      }),
    );
  });
  return g;
}

export function consistencyGlyph(
  cn: readonly number[],
  normDegree: number,
  fillClass: number,
  r: number,
): SVGGElement {
  const g = svgEl("g", { class: "glyph glyph-consistency" });
  const values = [...cn, normDegree];
  const points: string[] = [];
  values.forEach((value, i) => {
    const angle = -Math.PI / 2 + (i / values.length) * TAU;
    const spokeX = Math.cos(angle);
    const spokeY = Math.sin(angle);
    g.appendChild(
      svgEl("line", {
        x1: 0,
        y1: 0,
        x2: spokeX * r,
        y2: spokeY * r,
        class: "spoke",
        stroke: "#cccccc",
        "stroke-width": r * 0.04,
      }),
    );
    const v = Math.max(0, Math.min(1, value));
    points.push(`${spokeX * v * r},${spokeY * v * r}`);
  });
  g.appendChild(
    svgEl("polygon", {
      points: points.join(" "),
      fill: classColor(fillClass),
      "fill-opacity": 0.6,
      stroke: classColor(fillClass),
      class: "radar",
    }),
  );
  return g;
}

/** Slice offsets proportional to the shares; null when there is nothing
 * to split (an all-zero share vector). */
export function shareSlices(shares: readonly number[]): { start: number; width: number; cls: number }[] | null {
  const total = shares.reduce((acc, v) => acc + v, 0);
  if (total <= 0) return null;
  const out: { start: number; width: number; cls: number }[] = [];
  let cursor = 0;
  shares.forEach((share, cls) => {
    const width = share / total;
    if (width > 0) out.push({ start: cursor, width, cls });
    cursor += width;
  });
  return out;
}

function splitRectangle(shares: readonly number[], r: number, g: SVGGElement): void {
  const width = 2 * r;
  const height = 1.4 * r;
  const slices = shareSlices(shares);
  if (slices === null) {
    g.appendChild(
      svgEl("rect", {
        x: -r,
        y: -height / 2,
        width,
        height,
        fill: "#dddddd",
        class: "slice-empty",
      }),
    );
    return;
  }
  for (const slice of slices) {
    g.appendChild(
      svgEl("rect", {
        x: -r + slice.start * width,
        y: -height / 2,
        width: slice.width * width,
        height,
        fill: classColor(slice.cls),
        class: `slice slice-${slice.cls}`,
      }),
    );
  }
}

export function structureInfluenceGlyph(
  spd: readonly number[],
  closeness: number,
  r: number,
): SVGGElement {
  const g = svgEl("g", { class: "glyph glyph-structure" });
  splitRectangle(spd, r, g);
  const tickX = -r + Math.max(0, Math.min(1, closeness)) * 2 * r;
  const base = 0.7 * r + 0.1 * r;
  const h = 0.35 * r;
  g.appendChild(
    svgEl("polygon", {
      points: `${tickX},${base} ${tickX - h / 2},${base + h} ${tickX + h / 2},${base + h}`,
      fill: "#333333",
      class: "closeness-tick",
    }),
  );
  return g;
}

export function featureInfluenceGlyph(kfs: readonly number[], r: number): SVGGElement {
  const g = svgEl("g", { class: "glyph glyph-feature" });
  splitRectangle(kfs, r, g);
  return g;
}

export function graphNodeGlyph(record: NodeRecord, r: number): SVGGElement {
  const g = svgEl("g", { class: "glyph glyph-node" });
  const ring: [string, number][] = [
    ["gnn", record.predGnn],
    ["structure", record.predStructure],
    ["feature", record.predFeature],
  ];
  ring.forEach(([role, cls], i) => {
    g.appendChild(
      svgEl("path", {
        d: sectorPath(0.62 * r, r, i / 3, (i + 1) / 3),
        fill: classColor(cls),
        class: `ring-${role}`,
      }),
    );
  });
  g.appendChild(
    svgEl("circle", {
      cx: 0,
      cy: 0,
      r: 0.55 * r,
      fill: classColor(record.gt),
      class: "core-gt",
    }),
  );
  return g;
}

/** The per-plane glyph for one projected node. */
export function planeGlyphForNode(plane: string, record: NodeRecord, maxDegree: number, r: number): SVGGElement {
  switch (plane) {
    case "PredictionComparison":
      return predictionComparisonGlyph(record, r);
    case "SurroundingConsistency":
      return consistencyGlyph(record.cn, record.degree / Math.max(1, maxDegree), record.predGnn, r);
    case "TrainStructureInfluence":
      return structureInfluenceGlyph(record.spd, record.closeness, r);
    case "TrainFeatureInfluence":
      return featureInfluenceGlyph(record.kfs, r);
    default:
      throw new Error(`unknown plane ${plane}`);
  }
}

/** The per-plane glyph for one cluster aggregate. */
export function planeGlyphForCluster(plane: string, agg: ClusterAggregate, r: number): SVGGElement {
  switch (plane) {
    case "PredictionComparison":
      return predictionComparisonGlyph(
        { gt: agg.gt, predGnn: agg.p1, predStructure: agg.p2, predFeature: agg.p3 },
        r,
      );
    case "SurroundingConsistency":
      return consistencyGlyph(agg.cn, agg.norm_degree, agg.p1, r);
    case "TrainStructureInfluence":
      return structureInfluenceGlyph(agg.spd, agg.closeness, r);
    case "TrainFeatureInfluence":
      return featureInfluenceGlyph(agg.kfs, r);
    default:
      throw new Error(`unknown plane ${plane}`);
  }
}
