/** Control panel: subset filter, axis chooser, projection mode, graph
 * hop expansion and filtering, plus the snapshot's accuracy readout. */

import { ALL_AXES, COMFORTABLE_AXES, MAX_AXES } from "../catalog.js";
import { clearChildren, htmlEl } from "../dom.js";
import type { Store } from "../store.js";
import type { Meta, ProjectionMode, Subset } from "../types.js";

const SUBSETS: Subset[] = ["all", "train", "validation", "test"];
const ROLES = ["gnn", "structure", "feature"] as const;
const SPLITS = ["train", "validation", "test"] as const;

export type SubsetHandler = (subset: Subset) => void;

export class ControlPanel {
  readonly el: HTMLElement;
  private modal: HTMLElement | null = null;

  constructor(
    root: HTMLElement,
    private readonly store: Store,
    private readonly meta: Meta,
    private readonly onSubset: SubsetHandler,
    private readonly onClearSelection: () => void,
  ) {
    this.el = htmlEl("section", "view control-panel");
    this.el.appendChild(htmlEl("h2", "view-title", "Controls"));

    const subsetRow = htmlEl("div", "control-row subset-row");
    subsetRow.appendChild(htmlEl("label", "", "subset "));
    const subsetSelect = htmlEl("select", "subset-select");
    for (const subset of SUBSETS) {
      const option = htmlEl("option", "", subset);
      option.value = subset;
      subsetSelect.appendChild(option);
    }
    subsetSelect.value = store.get().subset;
    subsetSelect.addEventListener("change", () => {
      this.onSubset(subsetSelect.value as Subset);
    });
    subsetRow.appendChild(subsetSelect);
    const clear = htmlEl("button", "clear-selection", "clear selection");
    clear.type = "button";
    clear.addEventListener("click", () => this.onClearSelection());
    subsetRow.appendChild(clear);
    this.el.appendChild(subsetRow);

    const axesRow = htmlEl("div", "control-row axes-row");
    const axesLabel = htmlEl("span", "axes-current");
    const refreshAxes = () => {
      axesLabel.textContent = `axes: ${store.get().axes.join(" → ")}`;
    };
    refreshAxes();
    store.subscribe((_s, changed) => {
      if (changed.has("axes")) refreshAxes();
    });
    const chooser = htmlEl("button", "axis-chooser-open", "choose axes…");
    chooser.type = "button";
    chooser.addEventListener("click", () => this.openAxisChooser());
    axesRow.appendChild(chooser);
    axesRow.appendChild(axesLabel);
    this.el.appendChild(axesRow);

    const modeRow = htmlEl("div", "control-row mode-row");
    modeRow.appendChild(htmlEl("label", "", "projection mode "));
    const modeSelect = htmlEl("select", "mode-select");
    for (const mode of ["auto", "detail", "cluster"]) {
      const option = htmlEl("option", "", mode);
      option.value = mode;
      modeSelect.appendChild(option);
    }
    modeSelect.value = store.get().mode;
    modeSelect.addEventListener("change", () => {
      store.update({ mode: modeSelect.value as ProjectionMode });
    });
    modeRow.appendChild(modeSelect);
    this.el.appendChild(modeRow);

    const hopRow = htmlEl("div", "control-row hop-row");
    hopRow.appendChild(htmlEl("label", "", "extended hops "));
    const hopSelect = htmlEl("select", "hop-select");
    for (const value of ["0", "1", "2"]) {
      const option = htmlEl("option", "", value === "0" ? "off" : value);
      option.value = value;
      hopSelect.appendChild(option);
    }
    hopSelect.value = String(store.get().hopMode);
    hopSelect.addEventListener("change", () => {
      store.update({ hopMode: Number(hopSelect.value) as 0 | 1 | 2 });
    });
    hopRow.appendChild(hopSelect);
    const filterLabel = htmlEl("label", "filter-label", " hide unfocused ");
    const filterToggle = htmlEl("input", "filter-toggle");
    filterToggle.type = "checkbox";
    filterToggle.checked = store.get().filterUnfocused;
    filterToggle.addEventListener("change", () => {
      store.update({ filterUnfocused: filterToggle.checked });
    });
    filterLabel.prepend(filterToggle);
    hopRow.appendChild(filterLabel);
    this.el.appendChild(hopRow);

    this.el.appendChild(this.accuracyTable());
    root.appendChild(this.el);
  }

  private accuracyTable(): HTMLElement {
    const table = htmlEl("table", "accuracy-table");
    const head = htmlEl("tr");
    head.appendChild(htmlEl("th", "", "model"));
    for (const split of SPLITS) head.appendChild(htmlEl("th", "", split));
    table.appendChild(head);
    for (const role of ROLES) {
      const tr = htmlEl("tr");
      tr.appendChild(htmlEl("td", "", role));
      for (const split of SPLITS) {
        const cell = htmlEl("td", "accuracy-cell");
        const value = this.meta.accuracy[role]?.[split];
        cell.dataset["role"] = role;
        cell.dataset["split"] = split;
        cell.dataset["value"] = String(value);
        cell.textContent = value === undefined ? "–" : String(value);
        tr.appendChild(cell);
      }
      table.appendChild(tr);
    }
    return table;
  }

  private openAxisChooser(): void {
    this.closeAxisChooser();
    const modal = htmlEl("div", "axis-modal");
    modal.appendChild(htmlEl("h3", "", "Parallel-sets axes"));
    const warning = htmlEl("div", "axis-warning");
    modal.appendChild(warning);
    const current = this.store.get().axes;
    const boxes = new Map<string, HTMLInputElement>();
    const list = htmlEl("div", "axis-options");
    for (const axis of ALL_AXES) {
      const label = htmlEl("label", "axis-option");
      const box = htmlEl("input");
      box.type = "checkbox";
      box.value = axis;
      box.checked = current.includes(axis);
      boxes.set(axis, box);
      label.appendChild(box);
      label.appendChild(document.createTextNode(` ${axis}`));
      list.appendChild(label);
    }
    modal.appendChild(list);

    const apply = htmlEl("button", "axis-apply", "apply");
    apply.type = "button";
    const refresh = () => {
      const count = [...boxes.values()].filter((b) => b.checked).length;
      if (count === 0) {
        warning.textContent = "pick at least one axis";
        apply.disabled = true;
      } else if (count > MAX_AXES) {
        warning.textContent = `at most ${MAX_AXES} axes supported`;
        apply.disabled = true;
      } else if (count > COMFORTABLE_AXES) {
        warning.textContent = `${count} axes will be hard to read; prefer ${COMFORTABLE_AXES} or fewer`;
        apply.disabled = false;
      } else {
        warning.textContent = "";
        apply.disabled = false;
      }
    };
    for (const box of boxes.values()) box.addEventListener("change", refresh);
    refresh();

    apply.addEventListener("click", () => {
      const chosen = new Set(
        [...boxes.entries()].filter(([, b]) => b.checked).map(([axis]) => axis),
      );
      // Keep the current order for axes that stay, append new ones after.
      const kept = this.store.get().axes.filter((a) => chosen.has(a));
      const added = ALL_AXES.filter((a) => chosen.has(a) && !kept.includes(a));
      this.store.update({ axes: [...kept, ...added] });
      this.closeAxisChooser();
    });
    modal.appendChild(apply);
    const cancel = htmlEl("button", "axis-cancel", "cancel");
    cancel.type = "button";
    cancel.addEventListener("click", () => this.closeAxisChooser());
    modal.appendChild(cancel);

    this.modal = modal;
    this.el.appendChild(modal);
  }

  private closeAxisChooser(): void {
    if (this.modal) {
      clearChildren(this.modal);
      this.modal.remove();
      this.modal = null;
    }
  }
}
