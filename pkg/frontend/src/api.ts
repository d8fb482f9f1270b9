/** Typed client for the service API.
 *
 * Concurrency: requests are grouped into named families (one per view
 * resource).  Each family carries a sequence number; a response that
 * comes back after a newer request in the same family was issued is
 * reported as STALE and must be discarded by the caller, so slow
 * responses can never overwrite fresh ones.
 */

import type {
  ApiErrorBody,
  ClusterMembersPayload,
  FeaturesPayload,
  KHopPayload,
  LayoutPayload,
  Meta,
  MetricsPayload,
  NodeDetailPayload,
  ParallelSetsPayload,
  ProjectionMode,
  ProjectionPayload,
  Provenance,
  SelectionCreated,
  SelectionPayload,
  Subset,
} from "./types.js";

export class ApiFailure extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiFailure";
  }
}

/** Marker for a response that lost the race against a newer request. */
export const STALE: unique symbol = Symbol("stale");
export type Stale = typeof STALE;

export class ApiClient {
  private readonly sequence = new Map<string, number>();

  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = (...args) => fetch(...args),
  ) {}

  private async requestJson<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    let body: unknown;
    try {
      body = await response.json();
    } catch {
      throw new ApiFailure(response.status, "malformed_response", "response body was not JSON");
    }
    if (!response.ok) {
      const err = (body as ApiErrorBody).error;
      throw new ApiFailure(
        response.status,
        err?.code ?? "unknown_error",
        err?.message ?? `request failed with status ${response.status}`,
      );
    }
    return body as T;
  }

  /** GET within a request family; resolves to STALE when outraced. */
  private async latest<T>(family: string, path: string): Promise<T | Stale> {
    const ticket = (this.sequence.get(family) ?? 0) + 1;
    this.sequence.set(family, ticket);
    try {
      const payload = await this.requestJson<T>(path);
      return this.sequence.get(family) === ticket ? payload : STALE;
    } catch (failure) {
      if (this.sequence.get(family) !== ticket) return STALE;
      throw failure;
    }
  }

  meta(): Promise<Meta> {
    return this.requestJson("/api/meta");
  }

  metrics(subset: Subset): Promise<MetricsPayload> {
    return this.requestJson(`/api/metrics?subset=${subset}`);
  }

  createSelection(nodeIds: number[], provenance: Provenance): Promise<SelectionCreated> {
    return this.requestJson("/api/selection", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ node_ids: nodeIds, provenance }),
    });
  }

  getSelection(token: string): Promise<SelectionPayload> {
    return this.requestJson(`/api/selection/${token}`);
  }

  parallelSets(axes: string[], selection: string): Promise<ParallelSetsPayload | Stale> {
    return this.latest("parallel-sets", `/api/parallel-sets?axes=${axes.join(",")}&selection=${selection}`);
  }

  projection(
    plane: string,
    selection: string,
    mode: ProjectionMode,
  ): Promise<ProjectionPayload | Stale> {
    return this.latest(
      `projection:${plane}`,
      `/api/projection?plane=${plane}&selection=${selection}&mode=${mode}`,
    );
  }

  clusterMembers(cid: string): Promise<ClusterMembersPayload> {
    return this.requestJson(`/api/cluster/${cid}/members`);
  }

  layout(): Promise<LayoutPayload> {
    return this.requestJson("/api/layout");
  }

  khop(seeds: number[], k: 1 | 2): Promise<KHopPayload | Stale> {
    return this.latest("khop", `/api/khop?seeds=${seeds.join(",")}&k=${k}`);
  }

  features(
    selection: string,
    sort: "node_order" | "frequency",
    brush: [number, number] | null,
  ): Promise<FeaturesPayload | Stale> {
    const brushPart = brush ? `&brush=${brush[0]},${brush[1]}` : "";
    return this.latest("features", `/api/features?selection=${selection}&sort=${sort}${brushPart}`);
  }

  nodeDetail(nodeId: number): Promise<NodeDetailPayload> {
    return this.requestJson(`/api/node/${nodeId}`);
  }
}
