/** Graph View: the node-link diagram over the service layout.
 *
 * Nodes wear the four-part glyph (ground-truth core, three-sector
 * prediction ring).  The current selection is outlined; Extended mode
 * overlays the selection's 1- or 2-hop neighborhood from /api/khop; the
 * filter toggle hides everything outside selection ∪ neighborhood.  A
 * corner minimap shows the whole layout with the visible window, and
 * clicking it recenters the main view.  Hovering a node doubles its
 * radius.  Above CANVAS_THRESHOLD visible nodes the view falls back from
 * SVG to a canvas rendering.
 */

import { ApiFailure, STALE, type ApiClient } from "../api.js";
import { clearChildren, errorBanner, htmlEl, svgEl } from "../dom.js";
import { graphNodeGlyph } from "../glyphs.js";
import { classColor, HOP_COLOR, SELECTION_COLOR } from "../palette.js";
import type { MetricsIndex } from "../rows.js";
import type { Store } from "../store.js";
import type { LayoutPayload, Provenance } from "../types.js";

export const SIZE = 420;
export const MINI = 96;
export const NODE_RADIUS = 9;
export const CANVAS_THRESHOLD = 2000;

export type SelectHandler = (ids: number[], provenance: Provenance) => void;

export function renderMode(visibleNodes: number): "svg" | "canvas" {
  return visibleNodes > CANVAS_THRESHOLD ? "canvas" : "svg";
}

function fitLayout(coords: [number, number][]): (xy: [number, number]) => [number, number] {
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
  if (!Number.isFinite(minX)) return () => [SIZE / 2, SIZE / 2];
  const extent = Math.max(maxX - minX, maxY - minY, 1e-9);
  const pad = 26;
  const k = (SIZE - 2 * pad) / extent;
  const offX = (SIZE - 2 * pad - (maxX - minX) * k) / 2;
  const offY = (SIZE - 2 * pad - (maxY - minY) * k) / 2;
  return ([x, y]) => [pad + offX + (x - minX) * k, pad + offY + (y - minY) * k];
}

export class GraphView {
  readonly el: HTMLElement;
  private body: HTMLElement;
  private renderStamp = 0;
  private positions = new Map<number, [number, number]>();

  constructor(
    root: HTMLElement,
    private readonly client: ApiClient,
    private readonly store: Store,
    private readonly metrics: MetricsIndex,
    private readonly layoutPayload: LayoutPayload,
    private readonly classNames: string[],
    private readonly onSelect: SelectHandler,
  ) {
    this.el = htmlEl("section", "view graph-view");
    this.el.appendChild(htmlEl("h2", "view-title", "Graph"));
    this.body = htmlEl("div", "view-body");
    this.el.appendChild(this.body);
    root.appendChild(this.el);
    const place = fitLayout(layoutPayload.coords);
    layoutPayload.node_ids.forEach((nodeId, i) => {
      const coord = layoutPayload.coords[i];
      if (coord) this.positions.set(nodeId, place(coord));
    });
    store.subscribe((_state, changed) => {
      if (
        changed.has("selectionIds") ||
        changed.has("hopMode") ||
        changed.has("filterUnfocused") ||
        changed.has("viewport")
      ) {
        void this.render();
      }
    });
  }

  async render(): Promise<void> {
    const stamp = ++this.renderStamp;
    const state = this.store.get();
    const selected = new Set(state.selectionIds);

    let hopSet = new Set<number>();
    if (state.hopMode !== 0 && selected.size > 0) {
      try {
        const payload = await this.client.khop([...selected], state.hopMode);
        if (stamp !== this.renderStamp) return;
        if (payload !== STALE) hopSet = new Set(payload.node_ids);
      } catch (failure) {
        if (stamp !== this.renderStamp) return;
        clearChildren(this.body);
        const message =
          failure instanceof ApiFailure ? `${failure.code}: ${failure.message}` : String(failure);
        this.body.appendChild(errorBanner(message));
        return;
      }
    }

    clearChildren(this.body);
    const focus = new Set<number>([...selected, ...hopSet]);
    const filtering = state.filterUnfocused && focus.size > 0;
    const visible = (nodeId: number): boolean => !filtering || focus.has(nodeId);
    const visibleCount = this.layoutPayload.node_ids.filter(visible).length;
    const mode = renderMode(visibleCount);
    this.body.dataset["renderMode"] = mode;
    if (mode === "canvas") {
      this.renderCanvas(visible);
    } else {
      this.renderSvg(selected, hopSet, visible);
    }
    this.renderMinimap(visible);
  }

  private viewportTransform(): string {
    const { cx, cy, zoom } = this.store.get().viewport;
    const tx = SIZE / 2 - zoom * cx * SIZE;
    const ty = SIZE / 2 - zoom * cy * SIZE;
    return `translate(${tx},${ty}) scale(${zoom})`;
  }

  private renderSvg(selected: Set<number>, hopSet: Set<number>, visible: (n: number) => boolean): void {
    const svg = svgEl("svg", {
      width: SIZE,
      height: SIZE,
      viewBox: `0 0 ${SIZE} ${SIZE}`,
      class: "graph-svg",
    });
    const world = svgEl("g", { class: "world", transform: this.viewportTransform() });
    svg.appendChild(world);

    for (const [a, b] of this.layoutPayload.edges) {
      if (!visible(a) || !visible(b)) continue;
      const pa = this.positions.get(a);
      const pb = this.positions.get(b);
      if (!pa || !pb) continue;
      world.appendChild(
        svgEl("line", {
          x1: pa[0],
          y1: pa[1],
          x2: pb[0],
          y2: pb[1],
          class: "edge",
          stroke: "#c8cdd4",
          "data-edge": `${a}-${b}`,
        }),
      );
    }

    for (const nodeId of this.layoutPayload.node_ids) {
      if (!visible(nodeId)) continue;
      const pos = this.positions.get(nodeId);
      const record = this.metrics.get(nodeId);
      if (!pos || !record) continue;
      const [x, y] = pos;
      const classes = ["node"];
      if (selected.has(nodeId)) classes.push("sel");
      if (!selected.has(nodeId) && hopSet.has(nodeId)) classes.push("hop");
      const group = svgEl("g", {
        class: classes.join(" "),
        transform: `translate(${x},${y})`,
        "data-node-id": nodeId,
      });
      if (selected.has(nodeId)) {
        group.appendChild(
          svgEl("circle", {
            r: NODE_RADIUS * 1.5,
            fill: "none",
            stroke: SELECTION_COLOR,
            "stroke-width": 1.8,
            class: "sel-ring",
          }),
        );
      } else if (hopSet.has(nodeId)) {
        group.appendChild(
          svgEl("circle", {
            r: NODE_RADIUS * 1.5,
            fill: "none",
            stroke: HOP_COLOR,
            "stroke-dasharray": "3 2",
            class: "hop-ring",
          }),
        );
      }
      group.appendChild(graphNodeGlyph(record, NODE_RADIUS));
      group.addEventListener("mouseenter", () => {
        group.setAttribute("transform", `translate(${x},${y}) scale(2)`);
        group.classList.add("hovered");
      });
      group.addEventListener("mouseleave", () => {
        group.setAttribute("transform", `translate(${x},${y})`);
        group.classList.remove("hovered");
      });
      group.addEventListener("click", () => this.onSelect([nodeId], "node_click"));
      world.appendChild(group);
    }

    this.body.appendChild(svg);
    this.body.appendChild(this.legend());
  }

  private renderCanvas(visible: (n: number) => boolean): void {
    const canvas = htmlEl("canvas", "graph-canvas");
    canvas.width = SIZE;
    canvas.height = SIZE;
    const ctx = canvas.getContext?.("2d") ?? null;
    if (ctx) {
      ctx.clearRect(0, 0, SIZE, SIZE);
      ctx.strokeStyle = "#c8cdd4";
      for (const [a, b] of this.layoutPayload.edges) {
        if (!visible(a) || !visible(b)) continue;
        const pa = this.positions.get(a);
        const pb = this.positions.get(b);
        if (!pa || !pb) continue;
        ctx.beginPath();
        ctx.moveTo(pa[0], pa[1]);
        ctx.lineTo(pb[0], pb[1]);
        ctx.stroke();
      }
      for (const nodeId of this.layoutPayload.node_ids) {
        if (!visible(nodeId)) continue;
        const pos = this.positions.get(nodeId);
        const record = this.metrics.get(nodeId);
        if (!pos || !record) continue;
        ctx.beginPath();
        ctx.fillStyle = classColor(record.gt);
        ctx.arc(pos[0], pos[1], 2.2, 0, Math.PI * 2);
        ctx.fill();
      }
    }
    this.body.appendChild(canvas);
    this.body.appendChild(this.legend());
  }

  private legend(): HTMLElement {
    const legend = htmlEl("div", "legend graph-legend");
    this.classNames.forEach((name, classId) => {
      const entry = htmlEl("span", "legend-entry");
      const swatch = htmlEl("span", "legend-swatch");
      swatch.style.backgroundColor = classColor(classId);
      entry.appendChild(swatch);
      entry.appendChild(document.createTextNode(name));
      legend.appendChild(entry);
    });
    return legend;
  }

  private renderMinimap(visible: (n: number) => boolean): void {
    const mini = svgEl("svg", {
      width: MINI,
      height: MINI,
      viewBox: `0 0 ${MINI} ${MINI}`,
      class: "minimap",
    });
    mini.appendChild(
      svgEl("rect", {
        x: 0,
        y: 0,
        width: MINI,
        height: MINI,
        fill: "#f2f4f7",
        class: "minimap-frame",
      }),
    );
    const shrink = MINI / SIZE;
    for (const nodeId of this.layoutPayload.node_ids) {
      if (!visible(nodeId)) continue;
      const pos = this.positions.get(nodeId);
      const record = this.metrics.get(nodeId);
      if (!pos || !record) continue;
      mini.appendChild(
        svgEl("circle", {
          cx: pos[0] * shrink,
          cy: pos[1] * shrink,
          r: 1.6,
          fill: classColor(record.gt),
          class: "minimap-node",
        }),
      );
    }
    const { cx, cy, zoom } = this.store.get().viewport;
    const w = MINI / zoom;
    mini.appendChild(
      svgEl("rect", {
        x: cx * MINI - w / 2,
        y: cy * MINI - w / 2,
        width: w,
        height: w,
        fill: "none",
        stroke: "#444444",
        class: "minimap-window",
      }),
    );
    mini.addEventListener("click", (event) => {
      const rect = mini.getBoundingClientRect();
      const x = (event.clientX - rect.left) / MINI;
      const y = (event.clientY - rect.top) / MINI;
      const viewport = this.store.get().viewport;
      this.store.update({ viewport: { ...viewport, cx: x, cy: y } });
    });
    this.body.appendChild(mini);
  }
}
