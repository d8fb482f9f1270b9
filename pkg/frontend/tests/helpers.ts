/** Shared test harness: a fetch stub that replays captured service
 * traffic and records every request the client makes.
 *
 * The bank (tests/fixtures/bank.json, written by scripts/capture_fixtures.py)
 * holds real request/response pairs recorded against the live service on
 * the six-node fixture graph, so every assertion here compares the DOM
 * against genuine API responses.  An un-captured URL throws: the client
 * may only speak the recorded protocol.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { App } from "../src/app.js";
import type {
  Meta,
  MetricsPayload,
  ParallelSetsPayload,
  ProjectionPayload,
} from "../src/types.js";

export interface BankResponse {
  status: number;
  body: unknown;
}

export interface BankSelection {
  node_ids: number[];
  provenance: string;
  token: string;
  size: number;
}

export interface BankTargets {
  axes: string[];
  moved_axes: string[];
  segment: { axis: string; axis_index: number; category: string; ids: number[]; token: string };
  ribbon: { band: number; category_a: string; category_b: string; ids: number[]; token: string };
  lasso: { plane: string; cut: number; ids: number[]; token: string };
  node_click: { id: number; token: string };
  cluster: { cid: string; ids: number[]; token: string };
  test_subset_ids: number[];
  meta: { classes: number; nodes: number };
}

export interface Bank {
  responses: Record<string, BankResponse>;
  selections: BankSelection[];
  targets: BankTargets;
}

const here = dirname(fileURLToPath(import.meta.url));
export const bank: Bank = JSON.parse(
  readFileSync(join(here, "fixtures", "bank.json"), "utf8"),
) as Bank;

/** Typed accessor for a captured GET body; throws when not captured. */
export function captured<T>(path: string): T {
  const entry = bank.responses[`GET ${path}`];
  if (!entry) throw new Error(`no captured response for GET ${path}`);
  return JSON.parse(JSON.stringify(entry.body)) as T;
}

export const metaFixture = (): Meta => captured<Meta>("/api/meta");
export const metricsFixture = (): MetricsPayload => captured<MetricsPayload>("/api/metrics?subset=all");
export const parallelSetsAll = (): ParallelSetsPayload =>
  captured<ParallelSetsPayload>(
    `/api/parallel-sets?axes=${bank.targets.axes.join(",")}&selection=all`,
  );
export const projectionAll = (plane: string): ProjectionPayload =>
  captured<ProjectionPayload>(`/api/projection?plane=${plane}&selection=all&mode=auto`);

export interface RecordedRequest {
  method: string;
  path: string;
  body: { node_ids: number[]; provenance: string } | null;
}

function dedupe(ids: number[]): number[] {
  return [...new Set(ids)];
}

function jsonResponse(status: number, body: unknown): Response {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: async () => JSON.parse(JSON.stringify(body)),
  } as unknown as Response;
}

/** Fetch stub over the bank.  GETs replay captured responses; selection
 * POSTs are matched by (deduplicated id list, provenance) against the
 * captured selections, mirroring how the service stores them. */
export function bankFetch(): { fetchFn: typeof fetch; requests: RecordedRequest[] } {
  const requests: RecordedRequest[] = [];
  const fetchFn = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const path = String(input);
    const method = (init?.method ?? "GET").toUpperCase();
    if (method === "POST" && path === "/api/selection") {
      const posted = JSON.parse(String(init?.body)) as {
        node_ids: number[];
        provenance: string;
      };
      requests.push({ method, path, body: posted });
      const wanted = JSON.stringify([dedupe(posted.node_ids), posted.provenance]);
      const hit = bank.selections.find(
        (s) => JSON.stringify([s.node_ids, s.provenance]) === wanted,
      );
      if (!hit) throw new Error(`no captured selection for ${wanted}`);
      return jsonResponse(200, { token: hit.token, size: hit.size });
    }
    requests.push({ method, path, body: null });
    const entry = bank.responses[`${method} ${path}`];
    if (!entry) throw new Error(`no captured response for ${method} ${path}`);
    return jsonResponse(entry.status, entry.body);
  }) as typeof fetch;
  return { fetchFn, requests };
}

/** Boot the full app against the bank on a fresh DOM. */
export async function bootApp(): Promise<{
  app: App;
  root: HTMLElement;
  requests: RecordedRequest[];
}> {
  document.body.innerHTML = "";
  const root = document.createElement("div");
  document.body.appendChild(root);
  const { fetchFn, requests } = bankFetch();
  const app = await App.boot(root, { baseUrl: "" }, fetchFn);
  return { app, root, requests };
}

/** Drain the microtask/timer interleaving of an async render cascade. */
export async function flush(turns = 10): Promise<void> {
  for (let i = 0; i < turns; i += 1) {
    await new Promise<void>((resolve) => setTimeout(resolve, 0));
  }
}

export function click(el: Element): void {
  el.dispatchEvent(new MouseEvent("click", { bubbles: true }));
}

export function mouse(
  el: Element,
  type: string,
  clientX = 0,
  clientY = 0,
): void {
  el.dispatchEvent(new MouseEvent(type, { bubbles: true, clientX, clientY }));
}

export function numAttr(el: Element, name: string): number {
  const raw = el.getAttribute(name);
  if (raw === null) throw new Error(`missing attribute ${name}`);
  return Number(raw);
}

export function idSet(ids: Iterable<number>): Set<number> {
  return new Set(ids);
}

/** data-node-id values of every element matching the selector. */
export function nodeIdsOf(root: ParentNode, selector: string): number[] {
  return [...root.querySelectorAll(selector)].map((el) => numAttr(el, "data-node-id"));
}

/** Parse "translate(x,y)" glyph placements. */
export function translateOf(el: Element): [number, number] {
  const transform = el.getAttribute("transform") ?? "";
  const match = /translate\(([-\d.e]+),([-\d.e]+)\)/.exec(transform);
  if (!match) throw new Error(`no translate in transform "${transform}"`);
  return [Number(match[1]), Number(match[2])];
}
