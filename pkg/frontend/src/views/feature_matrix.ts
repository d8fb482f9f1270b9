/** Feature Matrix View: a brushable support-frequency bar chart over the
 * feature dimensions and, under it, one matrix row per selected node.
 *
 * Bar heights encode the payload's per-dimension support counts; matrix
 * cells are colored by each row's predicted class with opacity scaled by
 * the cell value; consecutive rows the service flagged as feature-similar
 * are joined with a border.  Sorting (node order vs. support frequency)
 * and the brush range are service-side: both just re-query.  Clicking a
 * row opens the node's detail — its metric row plus the top-k most
 * feature-similar training nodes, in the service's similarity order.
 */

import { ApiFailure, STALE, type ApiClient } from "../api.js";
import { clearChildren, errorBanner, htmlEl, svgEl } from "../dom.js";
import { classColor } from "../palette.js";
import { parseRow } from "../rows.js";
import type { Store } from "../store.js";
import type { FeaturesPayload, NodeDetailPayload } from "../types.js";

export const CHART_WIDTH = 560;
export const CHART_HEIGHT = 56;
export const CELL = 14;

export class FeatureMatrixView {
  readonly el: HTMLElement;
  private body: HTMLElement;
  private detailPanel: HTMLElement;
  private renderStamp = 0;

  constructor(
    root: HTMLElement,
    private readonly client: ApiClient,
    private readonly store: Store,
    private readonly classCount: number,
  ) {
    this.el = htmlEl("section", "view feature-matrix-view");
    this.el.appendChild(htmlEl("h2", "view-title", "Feature Matrix"));
    const controls = htmlEl("div", "feature-controls");
    const sortButton = htmlEl("button", "sort-toggle");
    sortButton.type = "button";
    const labelFor = (sort: string) =>
      sort === "node_order" ? "sort: node order" : "sort: support frequency";
    sortButton.textContent = labelFor(this.store.get().featureSort);
    sortButton.addEventListener("click", () => {
      const next = this.store.get().featureSort === "node_order" ? "frequency" : "node_order";
      sortButton.textContent = labelFor(next);
      this.store.update({ featureSort: next });
    });
    controls.appendChild(sortButton);
    const clearBrush = htmlEl("button", "clear-brush", "clear brush");
    clearBrush.type = "button";
    clearBrush.addEventListener("click", () => this.store.update({ brush: null }));
    controls.appendChild(clearBrush);
    this.el.appendChild(controls);
    this.body = htmlEl("div", "view-body");
    this.el.appendChild(this.body);
    this.detailPanel = htmlEl("div", "node-detail");
    this.el.appendChild(this.detailPanel);
    root.appendChild(this.el);
    store.subscribe((_state, changed) => {
      if (
        changed.has("selectionToken") ||
        changed.has("subset") ||
        changed.has("selectionIds") ||
        changed.has("featureSort") ||
        changed.has("brush")
      ) {
        void this.render();
      }
    });
  }

  async render(): Promise<void> {
    const stamp = ++this.renderStamp;
    const { featureSort, brush } = this.store.get();
    const selection = this.store.selectionKey();
    let chart: FeaturesPayload;
    let matrix: FeaturesPayload;
    try {
      // Chart first, matrix second: the bar chart always spans the full
      // displayed order so brush positions stay addressable; the matrix
      // shows the brushed slice.  Sequential awaits keep the shared
      // request family from marking its own sibling stale.
      const chartResult = await this.client.features(selection, featureSort, null);
      if (chartResult === STALE || stamp !== this.renderStamp) return;
      chart = chartResult;
      if (brush !== null) {
        const matrixResult = await this.client.features(selection, featureSort, brush);
        if (matrixResult === STALE || stamp !== this.renderStamp) return;
        matrix = matrixResult;
      } else {
        matrix = chart;
      }
    } catch (failure) {
      if (stamp !== this.renderStamp) return;
      clearChildren(this.body);
      const message =
        failure instanceof ApiFailure ? `${failure.code}: ${failure.message}` : String(failure);
      this.body.appendChild(errorBanner(message));
      return;
    }
    clearChildren(this.body);
    this.body.appendChild(this.renderChart(chart));
    this.body.appendChild(this.renderMatrix(matrix));
  }

  private renderChart(payload: FeaturesPayload): SVGSVGElement {
    const dims = payload.dimensions;
    const barW = dims.length > 0 ? CHART_WIDTH / dims.length : CHART_WIDTH;
    const maxSupport = Math.max(1, ...payload.support);
    const svg = svgEl("svg", {
      width: CHART_WIDTH,
      height: CHART_HEIGHT + 14,
      viewBox: `0 0 ${CHART_WIDTH} ${CHART_HEIGHT + 14}`,
      class: "frequency-chart",
    });
    dims.forEach((dim, i) => {
      const support = payload.support[i] ?? 0;
      const h = (support / maxSupport) * CHART_HEIGHT;
      const bar = svgEl("rect", {
        x: i * barW,
        y: CHART_HEIGHT - h,
        width: Math.max(barW - 1, 1),
        height: h,
        fill: "#7a93b4",
        class: "frequency-bar",
        "data-dimension": dim,
        "data-position": i,
        "data-support": support,
      });
      const title = svgEl("title");
      title.textContent = `dimension ${dim}: ${support} > 0`;
      bar.appendChild(title);
      svg.appendChild(bar);
    });

    const { brush } = this.store.get();
    if (brush !== null) {
      svg.appendChild(
        svgEl("rect", {
          x: brush[0] * barW,
          y: 0,
          width: (brush[1] - brush[0] + 1) * barW,
          height: CHART_HEIGHT,
          class: "brush-window",
          fill: "#35507a",
          "fill-opacity": 0.15,
          stroke: "#35507a",
        }),
      );
    }

    let dragStart: number | null = null;
    const positionAt = (event: MouseEvent): number => {
      const rect = svg.getBoundingClientRect();
      const x = event.clientX - rect.left;
      if (dims.length === 0) return 0;
      return Math.max(0, Math.min(dims.length - 1, Math.floor(x / barW)));
    };
    svg.addEventListener("mousedown", (event) => {
      event.preventDefault();
      dragStart = positionAt(event);
    });
    svg.addEventListener("mouseup", (event) => {
      if (dragStart === null) return;
      const a = dragStart;
      const b = positionAt(event);
      dragStart = null;
      this.store.update({ brush: [Math.min(a, b), Math.max(a, b)] });
    });
    return svg;
  }

  private renderMatrix(payload: FeaturesPayload): HTMLElement {
    const wrap = htmlEl("div", "matrix");
    let maxValue = 0;
    for (const row of payload.values) {
      for (const v of row) if (v > maxValue) maxValue = v;
    }
    if (maxValue <= 0) maxValue = 1;

    payload.node_ids.forEach((nodeId, i) => {
      const rowEl = htmlEl("div", "matrix-row");
      rowEl.dataset["nodeId"] = String(nodeId);
      if (payload.similar_pairs[i]) rowEl.classList.add("similar-next");
      const pred = payload.pred[i] ?? 0;
      const label = htmlEl("span", "row-label", String(nodeId));
      label.style.color = classColor(pred);
      rowEl.appendChild(label);
      const cells = payload.values[i] ?? [];
      cells.forEach((value, j) => {
        const cell = htmlEl("span", "cell");
        cell.dataset["dimension"] = String(payload.dimensions[j]);
        cell.dataset["value"] = String(value);
        cell.style.width = `${CELL}px`;
        cell.style.height = `${CELL}px`;
        cell.style.display = "inline-block";
        cell.style.backgroundColor = classColor(pred);
        cell.style.opacity = String(Math.max(0, Math.min(1, value / maxValue)));
        rowEl.appendChild(cell);
      });
      rowEl.addEventListener("click", () => void this.showNode(nodeId));
      wrap.appendChild(rowEl);
    });
    return wrap;
  }

  private async showNode(nodeId: number): Promise<void> {
    let payload: NodeDetailPayload;
    try {
      payload = await this.client.nodeDetail(nodeId);
    } catch (failure) {
      clearChildren(this.detailPanel);
      const message =
        failure instanceof ApiFailure ? `${failure.code}: ${failure.message}` : String(failure);
      this.detailPanel.appendChild(errorBanner(message));
      return;
    }
    clearChildren(this.detailPanel);
    const close = htmlEl("button", "close-detail", "close");
    close.type = "button";
    close.addEventListener("click", () => clearChildren(this.detailPanel));
    this.detailPanel.appendChild(close);
    this.detailPanel.appendChild(
      htmlEl("h3", "", `node ${payload.node_id} and its similar training nodes`),
    );
    const rows = htmlEl("div", "detail-rows");
    const addRow = (id: number, row: string[], features: number[], kind: string) => {
      const record = parseRow(payload.header, row, this.classCount);
      const el = htmlEl("div", `detail-row ${kind}`);
      el.dataset["nodeId"] = String(id);
      const label = htmlEl("span", "row-label", `${id} (pred ${record.predGnn})`);
      label.style.color = classColor(record.predGnn);
      el.appendChild(label);
      const maxValue = Math.max(1e-9, ...features);
      features.forEach((value, j) => {
        const cell = htmlEl("span", "cell");
        cell.dataset["dimension"] = String(j);
        cell.dataset["value"] = String(value);
        cell.style.backgroundColor = classColor(record.predGnn);
        cell.style.opacity = String(Math.max(0, Math.min(1, value / maxValue)));
        el.appendChild(cell);
      });
      rows.appendChild(el);
    };
    addRow(payload.node_id, payload.row, payload.features, "clicked");
    for (const entry of payload.similar) {
      addRow(entry.node_id, entry.row, entry.features, "similar");
    }
    this.detailPanel.appendChild(rows);
  }
}
