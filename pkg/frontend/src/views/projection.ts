/** Projection View: the four metric planes side by side, one panel each.
 *
 * Detail mode draws one plane glyph per selected node; cluster mode draws
 * one sized glyph per cluster with click drill-down to its members.  A
 * lasso on any panel turns the caught glyphs into the selection, and the
 * selected nodes are connected across panels with linking polylines.
 * Hovering a glyph shows its identity and the encoded metric values.
 */

import { ApiFailure, STALE, type ApiClient } from "../api.js";
import { PLANES, PLANE_LABELS } from "../catalog.js";
import { clearChildren, errorBanner, htmlEl, svgEl } from "../dom.js";
import { planeGlyphForCluster, planeGlyphForNode } from "../glyphs.js";
import { SELECTION_COLOR } from "../palette.js";
import type { MetricsIndex } from "../rows.js";
import type { Store } from "../store.js";
import type { ProjectionPayload, Provenance } from "../types.js";

export const PANEL = 260;
export const PANEL_GAP = 16;
export const PANEL_PAD = 22;
/** Cross-plane linking lines are capped to keep large lassos readable. */
export const LINK_LINE_CAP = 60;

export type SelectHandler = (ids: number[], provenance: Provenance) => void;

interface PlacedGlyph {
  /** data-node-id for detail glyphs, cluster id for cluster glyphs. */
  key: string;
  nodeId: number | null;
  memberIds: number[];
  x: number;
  y: number;
}

/** Even-odd ray test; vertices in panel pixel coordinates. */
export function pointInPolygon(x: number, y: number, polygon: [number, number][]): boolean {
  let inside = false;
  for (let i = 0, j = polygon.length - 1; i < polygon.length; j = i, i += 1) {
    const [xi, yi] = polygon[i]!;
    const [xj, yj] = polygon[j]!;
    const crosses = yi > y !== yj > y && x < ((xj - xi) * (y - yi)) / (yj - yi) + xi;
    if (crosses) inside = !inside;
  }
  return inside;
}

function fitToPanel(coords: [number, number][], radii: number[]): {
  place: (xy: [number, number]) => [number, number];
  scaleR: (r: number) => number;
} {
  if (coords.length === 0) {
    return { place: () => [PANEL / 2, PANEL / 2], scaleR: () => 4 };
  }
  let minX = Infinity;
  let maxX = -Infinity;
  let minY = Infinity;
  let maxY = -Infinity;
  for (const [x, y] of coords) {
    if (x < minX) minX = x;
    if (x > maxX) maxX = x;
    if (y < minY) minY = y;
    if (y > maxY) maxY = y;
  }
  const extent = Math.max(maxX - minX, maxY - minY, 1e-9);
  const usable = PANEL - 2 * PANEL_PAD;
  const k = usable / extent;
  const offX = (usable - (maxX - minX) * k) / 2;
  const offY = (usable - (maxY - minY) * k) / 2;
  return {
    place: ([x, y]) => [PANEL_PAD + offX + (x - minX) * k, PANEL_PAD + offY + (y - minY) * k],
    scaleR: (r) => Math.max(3, r * k),
  };
}

export class ProjectionView {
  readonly el: HTMLElement;
  private body: HTMLElement;
  private detail: HTMLElement;
  private svg: SVGSVGElement | null = null;
  private linkLayer: SVGGElement | null = null;
  private placed = new Map<string, PlacedGlyph[]>();
  private renderStamp = 0;

  constructor(
    root: HTMLElement,
    private readonly client: ApiClient,
    private readonly store: Store,
    private readonly metrics: MetricsIndex,
    private readonly onSelect: SelectHandler,
  ) {
    this.el = htmlEl("section", "view projection-view");
    this.el.appendChild(htmlEl("h2", "view-title", "Projection"));
    this.body = htmlEl("div", "view-body");
    this.el.appendChild(this.body);
    this.detail = htmlEl("div", "hover-detail");
    this.el.appendChild(this.detail);
    root.appendChild(this.el);
    store.subscribe((_state, changed) => {
      if (
        changed.has("selectionToken") ||
        changed.has("subset") ||
        changed.has("mode") ||
        changed.has("selectionIds")
      ) {
        void this.render();
      }
    });
  }

  async render(): Promise<void> {
    const stamp = ++this.renderStamp;
    const { mode } = this.store.get();
    const selection = this.store.selectionKey();

    const width = PLANES.length * PANEL + (PLANES.length - 1) * PANEL_GAP;
    const svg = svgEl("svg", {
      width,
      height: PANEL + 18,
      viewBox: `0 0 ${width} ${PANEL + 18}`,
      class: "projection-svg",
    });
    this.placed = new Map();

    const results = await Promise.all(
      PLANES.map(async (plane) => {
        try {
          return { plane, payload: await this.client.projection(plane, selection, mode) };
        } catch (failure) {
          return { plane, failure };
        }
      }),
    );
    if (stamp !== this.renderStamp) return;

    clearChildren(this.body);
    results.forEach((result, i) => {
      const panel = svgEl("g", {
        transform: `translate(${i * (PANEL + PANEL_GAP)},18)`,
        class: "plane-panel",
        "data-plane": result.plane,
      });
      const title = svgEl("text", { x: 4, y: -6, class: "plane-title" });
      title.textContent = PLANE_LABELS[result.plane] ?? result.plane;
      panel.appendChild(title);
      panel.appendChild(
        svgEl("rect", {
          x: 0,
          y: 0,
          width: PANEL,
          height: PANEL,
          class: "plane-frame",
          fill: "#fbfbfd",
          stroke: "#d5d9e0",
        }),
      );
      if ("failure" in result && result.failure !== undefined) {
        const failure = result.failure;
        const message =
          failure instanceof ApiFailure ? `${failure.code}: ${failure.message}` : String(failure);
        this.body.appendChild(errorBanner(`${result.plane}: ${message}`));
        svg.appendChild(panel);
        return;
      }
      const payload = (result as { payload: ProjectionPayload | typeof STALE }).payload;
      if (payload === STALE) {
        svg.appendChild(panel);
        return;
      }
      this.drawPanel(panel, result.plane, payload);
      svg.appendChild(panel);
    });

    this.linkLayer = svgEl("g", { class: "link-lines" });
    svg.appendChild(this.linkLayer);
    this.svg = svg;
    this.body.appendChild(svg);
    this.drawLinkLines();
  }

  private drawPanel(panel: SVGGElement, plane: string, payload: ProjectionPayload): void {
    const fit = fitToPanel(payload.coords, payload.radii);
    const placed: PlacedGlyph[] = [];
    const selected = new Set(this.store.get().selectionIds);

    if (payload.mode === "detail") {
      payload.member_ids.forEach((nodeId, i) => {
        const coord = payload.coords[i];
        const radius = payload.radii[i];
        if (!coord || radius === undefined) return;
        const [x, y] = fit.place(coord);
        const r = fit.scaleR(radius);
        const record = this.metrics.get(nodeId);
        if (!record) return;
        const glyph = planeGlyphForNode(plane, record, this.metrics.maxDegree, r);
        const group = svgEl("g", {
          class: `point${selected.has(nodeId) ? " sel" : ""}`,
          transform: `translate(${x},${y})`,
          "data-node-id": nodeId,
        });
        if (selected.has(nodeId)) {
          group.appendChild(
            svgEl("circle", {
              r: r * 1.45,
              fill: "none",
              stroke: SELECTION_COLOR,
              "stroke-width": 1.5,
              class: "sel-ring",
            }),
          );
        }
        group.appendChild(glyph);
        group.addEventListener("mouseenter", () => this.showNodeDetail(plane, nodeId));
        group.addEventListener("mouseleave", () => this.clearDetail());
        panel.appendChild(group);
        placed.push({ key: String(nodeId), nodeId, memberIds: [nodeId], x, y });
      });
    } else {
      (payload.clusters ?? []).forEach((cluster, i) => {
        const coord = payload.coords[i];
        const radius = payload.radii[i];
        if (!coord || radius === undefined) return;
        const [x, y] = fit.place(coord);
        const r = fit.scaleR(radius);
        const glyph = planeGlyphForCluster(plane, cluster, r);
        const group = svgEl("g", {
          class: "cluster",
          transform: `translate(${x},${y})`,
          "data-cluster-id": cluster.id,
          "data-size": cluster.size,
        });
        group.appendChild(glyph);
        group.addEventListener("mouseenter", () => this.showClusterDetail(plane, cluster.id, cluster.size));
        group.addEventListener("mouseleave", () => this.clearDetail());
        group.addEventListener("click", () => void this.drillDown(cluster.id));
        panel.appendChild(group);
        placed.push({ key: cluster.id, nodeId: null, memberIds: [...cluster.member_ids], x, y });
      });
    }

    this.placed.set(plane, placed);
    this.attachLasso(panel, plane);
  }

  /** Cluster → detail drill-down: fetch the membership and select it. */
  private async drillDown(cid: string): Promise<void> {
    try {
      const members = await this.client.clusterMembers(cid);
      this.store.update({ mode: "detail" });
      this.onSelect(members.node_ids, "lasso");
    } catch (failure) {
      const message =
        failure instanceof ApiFailure ? `${failure.code}: ${failure.message}` : String(failure);
      this.body.appendChild(errorBanner(message));
    }
  }

  private attachLasso(panel: SVGGElement, plane: string): void {
    const overlay = svgEl("rect", {
      x: 0,
      y: 0,
      width: PANEL,
      height: PANEL,
      fill: "transparent",
      class: "lasso-overlay",
    });
    let tracing: [number, number][] | null = null;
    let trace: SVGPolylineElement | null = null;

    const localPoint = (event: MouseEvent): [number, number] => {
      const rect = overlay.getBoundingClientRect();
      return [event.clientX - rect.left, event.clientY - rect.top];
    };

    overlay.addEventListener("mousedown", (event) => {
      event.preventDefault();
      tracing = [localPoint(event)];
      trace = svgEl("polyline", {
        class: "lasso-trace",
        fill: "none",
        stroke: "#555555",
        "stroke-dasharray": "4 3",
      });
      panel.appendChild(trace);
    });
    // Move/up handlers live on the panel so a lasso keeps tracking while
    // the pointer crosses glyphs (events bubble up from them).
    panel.addEventListener("mousemove", (event) => {
      if (!tracing || !trace) return;
      tracing.push(localPoint(event));
      trace.setAttribute("points", tracing.map(([x, y]) => `${x},${y}`).join(" "));
    });
    panel.addEventListener("mouseup", () => {
      if (!tracing) return;
      const polygon = tracing;
      tracing = null;
      trace?.remove();
      trace = null;
      if (polygon.length < 3) return;
      const caught: number[] = [];
      for (const glyph of this.placed.get(plane) ?? []) {
        if (pointInPolygon(glyph.x, glyph.y, polygon)) caught.push(...glyph.memberIds);
      }
      if (caught.length > 0) this.onSelect(caught, "lasso");
    });
    // The overlay sits above the frame but below the glyphs so glyph
    // hover/click still work; lasso starts on empty panel space.
    const frame = panel.querySelector(".plane-frame");
    if (frame && frame.nextSibling) panel.insertBefore(overlay, frame.nextSibling);
    else panel.appendChild(overlay);
  }

  /** Polylines joining each selected node's glyph across the panels. */
  private drawLinkLines(): void {
    if (!this.svg || !this.linkLayer) return;
    clearChildren(this.linkLayer);
    const selected = this.store.get().selectionIds.slice(0, LINK_LINE_CAP);
    for (const nodeId of selected) {
      const stops: [number, number][] = [];
      PLANES.forEach((plane, i) => {
        const hit = (this.placed.get(plane) ?? []).find((g) => g.nodeId === nodeId);
        if (hit) stops.push([i * (PANEL + PANEL_GAP) + hit.x, 18 + hit.y]);
      });
      if (stops.length < 2) continue;
      this.linkLayer.appendChild(
        svgEl("polyline", {
          points: stops.map(([x, y]) => `${x},${y}`).join(" "),
          class: "link-line",
          "data-node-id": nodeId,
          fill: "none",
          stroke: SELECTION_COLOR,
          "stroke-opacity": 0.35,
        }),
      );
    }
  }

  private showNodeDetail(plane: string, nodeId: number): void {
    const record = this.metrics.get(nodeId);
    if (!record) return;
    const parts = [
      `node ${nodeId}`,
      `gt ${record.gt}`,
      `pred ${record.predGnn}/${record.predStructure}/${record.predFeature}`,
      `conf ${record.confidence}`,
      `cn ${record.cn.join(", ")}`,
      `closeness ${record.closeness}`,
    ];
    this.detail.textContent = `${PLANE_LABELS[plane] ?? plane} — ${parts.join(" · ")}`;
    this.detail.dataset["nodeId"] = String(nodeId);
    this.store.update({ hoveredNode: nodeId });
  }

  private showClusterDetail(plane: string, cid: string, size: number): void {
    this.detail.textContent = `${PLANE_LABELS[plane] ?? plane} — cluster ${cid} · ${size} nodes`;
    delete this.detail.dataset["nodeId"];
  }

  private clearDetail(): void {
    this.detail.textContent = "";
    delete this.detail.dataset["nodeId"];
    this.store.update({ hoveredNode: null });
  }
}
