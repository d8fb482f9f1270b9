/** Application wiring: boot sequence, linked selection, and the four
 * coordinated views plus the control panel.
 *
 * Every selection, whatever view created it, is echoed through the
 * service: POST /api/selection yields a token, GET /api/selection/{token}
 * returns the id set the service stored, and only that echoed set enters
 * the store.  All views therefore highlight exactly the same ids.
 */

import { ApiClient, ApiFailure } from "./api.js";
import type { Config } from "./config.js";
import { errorBanner, htmlEl } from "./dom.js";
import { MetricsIndex } from "./rows.js";
import { initialState, Store } from "./store.js";
import type { Meta, Provenance, Subset } from "./types.js";
import { ControlPanel } from "./views/control_panel.js";
import { FeatureMatrixView } from "./views/feature_matrix.js";
import { GraphView } from "./views/graph.js";
import { ParallelSetsView } from "./views/parallel_sets.js";
import { ProjectionView } from "./views/projection.js";

export class App {
  private constructor(
    readonly client: ApiClient,
    readonly store: Store,
    readonly meta: Meta,
    readonly metrics: MetricsIndex,
    readonly parallelSets: ParallelSetsView,
    readonly projection: ProjectionView,
    readonly graph: GraphView,
    readonly featureMatrix: FeatureMatrixView,
    readonly controls: ControlPanel,
    private readonly statusArea: HTMLElement,
  ) {}

  static async boot(root: HTMLElement, config: Config, fetchFn?: typeof fetch): Promise<App> {
    const client = new ApiClient(config.baseUrl, fetchFn);
    const statusArea = htmlEl("div", "app-status");
    root.appendChild(statusArea);

    const [meta, metricsPayload, layoutPayload] = await Promise.all([
      client.meta(),
      client.metrics("all"),
      client.layout(),
    ]);
    const metrics = new MetricsIndex(metricsPayload, meta.classes);
    const store = new Store(initialState(meta.planes));

    let app: App;
    const select = (ids: number[], provenance: Provenance) => void app.select(ids, provenance);

    const controls = new ControlPanel(
      root,
      store,
      meta,
      (subset) => void app.applySubset(subset),
      () => void app.clearSelection(),
    );
    const parallelSets = new ParallelSetsView(root, client, store, meta.class_names, select);
    const projection = new ProjectionView(root, client, store, metrics, select);
    const graph = new GraphView(root, client, store, metrics, layoutPayload, meta.class_names, select);
    const featureMatrix = new FeatureMatrixView(root, client, store, meta.classes);

    app = new App(
      client,
      store,
      meta,
      metrics,
      parallelSets,
      projection,
      graph,
      featureMatrix,
      controls,
      statusArea,
    );
    await Promise.all([
      parallelSets.render(),
      projection.render(),
      graph.render(),
      featureMatrix.render(),
    ]);
    return app;
  }

  /** Echo a view-made selection through the service and highlight the
   * id set the service stored. */
  async select(ids: number[], provenance: Provenance): Promise<void> {
    this.statusArea.textContent = "";
    try {
      const created = await this.client.createSelection(ids, provenance);
      const echoed = await this.client.getSelection(created.token);
      this.store.update({
        selectionToken: created.token,
        selectionIds: [...echoed.node_ids],
      });
    } catch (failure) {
      this.surface(failure);
    }
  }

  /** Subset filter: subsets are service-side selection tokens, so the
   * highlighted ids are still the service's echo. */
  async applySubset(subset: Subset): Promise<void> {
    this.statusArea.textContent = "";
    try {
      const ids = subset === "all" ? [] : (await this.client.getSelection(subset)).node_ids;
      this.store.update({ subset, selectionToken: null, selectionIds: [...ids] });
    } catch (failure) {
      this.surface(failure);
    }
  }

  async clearSelection(): Promise<void> {
    await this.applySubset(this.store.get().subset);
  }

  private surface(failure: unknown): void {
    const message =
      failure instanceof ApiFailure ? `${failure.code}: ${failure.message}` : String(failure);
    this.statusArea.textContent = "";
    this.statusArea.appendChild(errorBanner(message));
  }
}
