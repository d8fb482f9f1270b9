/** Single-page view state with plain pub/sub.
 *
 * Views subscribe and re-render from snapshots; all mutation funnels
 * through update(), which notifies with the exact set of changed keys so
 * each view can ignore irrelevant changes.
 */

import type { ProjectionMode, Subset } from "./types.js";

export interface Viewport {
  /** Center of the visible window in layout coordinates (unit square). */
  cx: number;
  cy: number;
  /** Magnification; 1 shows the whole layout. */
  zoom: number;
}

export interface ViewState {
  subset: Subset;
  /** Token of the current explicit selection; null means "the subset". */
  selectionToken: string | null;
  /** The id set the service echoed back for selectionToken. */
  selectionIds: number[];
  /** Parallel-sets axes in display order. */
  axes: string[];
  /** Focused plane for drill-down interactions. */
  plane: string;
  mode: ProjectionMode;
  /** Graph hop expansion: 0 = off, otherwise the k of /api/khop. */
  hopMode: 0 | 1 | 2;
  /** Hide graph nodes outside selection ∪ hop expansion. */
  filterUnfocused: boolean;
  viewport: Viewport;
  featureSort: "node_order" | "frequency";
  /** Displayed-dimension positions [lo, hi], inclusive, or null for all. */
  brush: [number, number] | null;
  hoveredNode: number | null;
}

export const DEFAULT_AXES = ["correct_gnn", "correct_structure", "correct_feature", "gt"];

export function initialState(planes: string[]): ViewState {
  return {
    subset: "all",
    selectionToken: null,
    selectionIds: [],
    axes: [...DEFAULT_AXES],
    plane: planes[0] ?? "",
    mode: "auto",
    hopMode: 0,
    filterUnfocused: false,
    viewport: { cx: 0.5, cy: 0.5, zoom: 1 },
    featureSort: "node_order",
    brush: null,
    hoveredNode: null,
  };
}

export type Listener = (state: ViewState, changed: ReadonlySet<keyof ViewState>) => void;

export class Store {
  private listeners = new Set<Listener>();

  constructor(private state: ViewState) {}

  get(): ViewState {
    return this.state;
  }

  /** The selection parameter views pass to the API. */
  selectionKey(): string {
    return this.state.selectionToken ?? this.state.subset;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  update(patch: Partial<ViewState>): void {
    const changed = new Set<keyof ViewState>();
    for (const key of Object.keys(patch) as (keyof ViewState)[]) {
      if (this.state[key] !== patch[key]) changed.add(key);
    }
    if (changed.size === 0) return;
    this.state = { ...this.state, ...patch };
    for (const listener of [...this.listeners]) listener(this.state, changed);
  }
}

/** Move one axis to a new position, keeping the list a permutation of the
 * original (the reorder invariant). */
export function moveAxis(axes: readonly string[], from: number, to: number): string[] {
  const next = [...axes];
  if (from < 0 || from >= next.length || to < 0 || to >= next.length) return next;
  const [picked] = next.splice(from, 1);
  next.splice(to, 0, picked!);
  return next;
}
