/** Parallel Sets: one horizontal band per axis, segments sized
 * proportionally to their counts, trapezoid ribbons between adjacent
 * bands.  Every displayed number is the payload's own value; the view
 * performs no tallying of its own.
 *
 * Interactions: click a segment or ribbon to turn its nodes into the
 * current selection; drag an axis label onto another to reorder (which
 * re-queries, since the tally shape depends on axis order); the axis
 * chooser lives in the control panel.
 */

import { ApiFailure, STALE, type ApiClient } from "../api.js";
import { CLASS_VALUED_AXES } from "../catalog.js";
import { clearChildren, errorBanner, htmlEl, svgEl } from "../dom.js";
import { classColor, sequenceColor } from "../palette.js";
import type { Store } from "../store.js";
import { moveAxis } from "../store.js";
import type { ParallelSetsPayload, Provenance } from "../types.js";

export const WIDTH = 760;
export const AXIS_BAND = 18;
export const AXIS_GAP = 64;
export const LABEL_LANE = 150;

export type SelectHandler = (ids: number[], provenance: Provenance) => void;

/** Node ids behind one segment, derived from the adjacent ribbon lists
 * (the payload carries ids on ribbons only).  Needs at least two axes. */
export function segmentNodeIds(
  payload: ParallelSetsPayload,
  axisIndex: number,
  category: string,
): number[] | null {
  if (payload.axes.length < 2) return null;
  const ids: number[] = [];
  if (axisIndex === 0) {
    for (const ribbon of payload.ribbons[0] ?? []) {
      if (ribbon.category_a === category) ids.push(...ribbon.node_ids);
    }
  } else {
    for (const ribbon of payload.ribbons[axisIndex - 1] ?? []) {
      if (ribbon.category_b === category) ids.push(...ribbon.node_ids);
    }
  }
  return ids;
}

interface SegmentBox {
  x: number;
  width: number;
  /** Cursor for packing outgoing/incoming ribbons left to right. */
  outCursor: number;
  inCursor: number;
}

export class ParallelSetsView {
  readonly el: HTMLElement;
  private body: HTMLElement;
  private status: HTMLElement;
  private dragFrom: number | null = null;
  private lastKey = "";

  constructor(
    root: HTMLElement,
    private readonly client: ApiClient,
    private readonly store: Store,
    private readonly classNames: string[],
    private readonly onSelect: SelectHandler,
  ) {
    this.el = htmlEl("section", "view parallel-sets-view");
    this.el.appendChild(htmlEl("h2", "view-title", "Parallel Sets"));
    this.status = htmlEl("div", "view-status");
    this.el.appendChild(this.status);
    this.body = htmlEl("div", "view-body");
    this.el.appendChild(this.body);
    root.appendChild(this.el);
    store.subscribe((_state, changed) => {
      if (
        changed.has("axes") ||
        changed.has("selectionToken") ||
        changed.has("subset") ||
        changed.has("selectionIds")
      ) {
        void this.render();
      }
    });
  }

  async render(): Promise<void> {
    const axes = this.store.get().axes;
    const selection = this.store.selectionKey();
    const key = `${axes.join(",")}|${selection}`;
    this.lastKey = key;
    let payload: ParallelSetsPayload;
    try {
      const result = await this.client.parallelSets(axes, selection);
      if (result === STALE || this.lastKey !== key) return;
      payload = result;
    } catch (failure) {
      if (this.lastKey !== key) return;
      this.showError(failure);
      return;
    }
    this.status.textContent = "";
    this.draw(payload);
  }

  private showError(failure: unknown): void {
    clearChildren(this.body);
    const message =
      failure instanceof ApiFailure
        ? `${failure.code}: ${failure.message}`
        : String(failure);
    this.body.appendChild(errorBanner(message));
  }

  private categoryLabel(axis: string, category: string): string {
    if (CLASS_VALUED_AXES.has(axis)) {
      const classId = Number(category);
      const name = this.classNames[classId];
      if (name !== undefined && name !== category) return `${name}`;
    }
    return category;
  }

  private categoryColor(axis: string, category: string, position: number): string {
    if (CLASS_VALUED_AXES.has(axis)) return classColor(Number(category));
    return sequenceColor(position);
  }

  private draw(payload: ParallelSetsPayload): void {
    clearChildren(this.body);
    const axisCount = payload.axes.length;
    const height = axisCount * AXIS_BAND + Math.max(0, axisCount - 1) * AXIS_GAP + 24;
    const svg = svgEl("svg", {
      width: WIDTH,
      height,
      viewBox: `0 0 ${WIDTH} ${height}`,
      class: "parallel-sets-svg",
    });
    const usable = WIDTH - LABEL_LANE - 10;
    const total = payload.selection_size;
    const caption = htmlEl("div", "selection-size");
    caption.dataset["selectionSize"] = String(total);
    caption.textContent = `selection size ${total}`;
    this.body.appendChild(caption);

    const rowY = (i: number) => 12 + i * (AXIS_BAND + AXIS_GAP);
    const boxes: Map<string, SegmentBox>[] = [];

    payload.axes.forEach((axis, axisIndex) => {
      const segs = payload.segments[axisIndex] ?? [];
      const y = rowY(axisIndex);
      const rowBoxes = new Map<string, SegmentBox>();
      boxes.push(rowBoxes);

      const label = svgEl("text", {
        x: 4,
        y: y + AXIS_BAND - 4,
        class: "axis-label",
        "data-axis": axis,
        "data-axis-index": axisIndex,
      });
      label.textContent = axis;
      label.addEventListener("mousedown", (event) => {
        event.preventDefault();
        this.dragFrom = axisIndex;
      });
      label.addEventListener("mouseup", () => {
        const from = this.dragFrom;
        this.dragFrom = null;
        if (from === null || from === axisIndex) return;
        this.store.update({ axes: moveAxis(this.store.get().axes, from, axisIndex) });
      });
      svg.appendChild(label);

      let cursor = LABEL_LANE;
      segs.forEach((segment, position) => {
        const width = total > 0 ? (segment.count / total) * usable : 0;
        rowBoxes.set(segment.category, {
          x: cursor,
          width,
          outCursor: cursor,
          inCursor: cursor,
        });
        const group = svgEl("g", {
          class: "segment",
          "data-axis": axis,
          "data-category": segment.category,
          "data-count": segment.count,
        });
        const rect = svgEl("rect", {
          x: cursor,
          y,
          width: Math.max(width, 0),
          height: AXIS_BAND,
          fill: this.categoryColor(axis, segment.category, position),
          class: "segment-rect",
        });
        group.appendChild(rect);
        const text = svgEl("text", {
          x: cursor + 2,
          y: y - 3,
          class: "segment-label",
        });
        text.textContent = `${this.categoryLabel(axis, segment.category)} · ${segment.count}`;
        group.appendChild(text);
        const title = svgEl("title");
        title.textContent = `${axis} = ${segment.category}: ${segment.count}`;
        group.appendChild(title);
        group.addEventListener("click", () => {
          const ids = segmentNodeIds(payload, axisIndex, segment.category);
          if (ids === null || ids.length === 0) return;
          this.onSelect(ids, "parallel_sets_segment");
        });
        svg.appendChild(group);
        cursor += width + 2;
      });
    });

    payload.ribbons.forEach((band, bandIndex) => {
      const yTop = rowY(bandIndex) + AXIS_BAND;
      const yBottom = rowY(bandIndex + 1);
      for (const ribbon of band) {
        const top = boxes[bandIndex]?.get(ribbon.category_a);
        const bottom = boxes[bandIndex + 1]?.get(ribbon.category_b);
        if (!top || !bottom) continue;
        const width = total > 0 ? (ribbon.count / total) * usable : 0;
        const x0 = top.outCursor;
        const x1 = bottom.inCursor;
        top.outCursor += width;
        bottom.inCursor += width;
        const path = svgEl("polygon", {
          points: `${x0},${yTop} ${x0 + width},${yTop} ${x1 + width},${yBottom} ${x1},${yBottom}`,
          class: "ribbon",
          "data-category-a": ribbon.category_a,
          "data-category-b": ribbon.category_b,
          "data-count": ribbon.count,
          "fill-opacity": 0.35,
          fill: "#9aa7b5",
        });
        const title = svgEl("title");
        title.textContent = `${ribbon.category_a} → ${ribbon.category_b}: ${ribbon.count}`;
        path.appendChild(title);
        path.addEventListener("click", () => {
          if (ribbon.node_ids.length === 0) return;
          this.onSelect([...ribbon.node_ids], "parallel_sets_ribbon");
        });
        svg.appendChild(path);
      }
    });

    this.body.appendChild(svg);
  }
}
