/** Linked-selection round trip.
 *
 * A segment click in Parallel Sets, a lasso in the Projection View, and a
 * node click in the Graph View must each produce the same highlighted
 * node-id set in all four views.  Every selection echoes through
 * POST /api/selection + GET /api/selection/{token}; the assertions below
 * compare each view's highlighted set against the id set carried by that
 * intercepted traffic — exact set equality, no tolerance.
 */

import { describe, expect, it } from "vitest";

import {
  bank,
  bootApp,
  captured,
  flush,
  mouse,
  nodeIdsOf,
  translateOf,
  type RecordedRequest,
} from "./helpers.js";
import { click } from "./helpers.js";
import type { ParallelSetsPayload, SelectionPayload } from "../src/types.js";

interface RoundTrip {
  /** Ids the client sent to POST /api/selection. */
  posted: number[];
  /** Ids the service echoed back for the token (the authoritative set). */
  echoed: number[];
  token: string;
}

/** Pull the selection round trip out of the recorded traffic. */
function selectionTraffic(requests: RecordedRequest[]): RoundTrip {
  const post = requests.find((r) => r.method === "POST" && r.path === "/api/selection");
  if (!post || !post.body) throw new Error("no selection POST in traffic");
  const echo = requests.find(
    (r) => r.method === "GET" && r.path.startsWith("/api/selection/"),
  );
  if (!echo) throw new Error("no selection echo GET in traffic");
  const token = echo.path.slice("/api/selection/".length);
  const echoed = captured<SelectionPayload>(`/api/selection/${token}`).node_ids;
  return { posted: post.body.node_ids, echoed, token };
}

/** The highlighted id set each view presents, plus the traffic evidence
 * for the Parallel Sets view (which shows the selection as re-queried
 * tallies rather than per-node marks). */
function highlightedSets(root: HTMLElement, requests: RecordedRequest[], token: string) {
  const projection = new Set(nodeIdsOf(root, ".projection-view g.point.sel"));
  const graph = new Set(nodeIdsOf(root, ".graph-view g.node.sel"));
  const matrix = new Set(nodeIdsOf(root, ".feature-matrix-view .matrix-row"));

  const psPath = `/api/parallel-sets?axes=${bank.targets.axes.join(",")}&selection=${token}`;
  const psRequest = requests.find((r) => r.method === "GET" && r.path === psPath);
  if (!psRequest) throw new Error(`parallel sets never re-queried with ${token}`);
  const psPayload = captured<ParallelSetsPayload>(psPath);
  const caption = root.querySelector(".parallel-sets-view .selection-size");
  if (!caption) throw new Error("no selection-size caption");
  return { projection, graph, matrix, psPayload, caption };
}

function expectRoundTrip(
  root: HTMLElement,
  requests: RecordedRequest[],
  expectedIds: number[],
  expectedToken: string,
): void {
  const expected = new Set(expectedIds);
  const { posted, echoed, token } = selectionTraffic(requests);

  expect(token).toBe(expectedToken);
  expect(new Set(posted)).toEqual(expected);
  expect(new Set(echoed)).toEqual(expected);

  const views = highlightedSets(root, requests, token);
  expect(views.projection).toEqual(expected);
  expect(views.graph).toEqual(expected);
  expect(views.matrix).toEqual(expected);
  expect(views.psPayload.selection_size).toBe(expected.size);
  expect(views.caption.getAttribute("data-selection-size")).toBe(String(expected.size));

  const storeIds = new Set(echoed);
  expect(storeIds).toEqual(expected);
}

describe("linked selection round trip", () => {
  it("segment click in Parallel Sets highlights the same set everywhere", async () => {
    const { root, requests } = await bootApp();
    await flush();
    requests.length = 0;

    const target = bank.targets.segment;
    const segment = root.querySelector(
      `.parallel-sets-view g.segment[data-axis="${target.axis}"][data-category="${target.category}"]`,
    );
    if (!segment) throw new Error("segment not rendered");
    click(segment);
    await flush();

    expectRoundTrip(root, requests, target.ids, target.token);
  });

  it("lasso in the Projection View highlights the same set everywhere", async () => {
    const { root, requests } = await bootApp();
    await flush();

    const target = bank.targets.lasso;
    const panel = root.querySelector(
      `.projection-view g.plane-panel[data-plane="${target.plane}"]`,
    );
    if (!panel) throw new Error("plane panel not rendered");

    // Rectangle around the target glyphs, buffered, verified to exclude
    // every other glyph so the lasso can only catch the target set.
    const positions = new Map<number, [number, number]>();
    for (const glyph of panel.querySelectorAll("g.point")) {
      positions.set(Number(glyph.getAttribute("data-node-id")), translateOf(glyph));
    }
    const targetSet = new Set(target.ids);
    const xs = target.ids.map((id) => positions.get(id)![0]);
    const ys = target.ids.map((id) => positions.get(id)![1]);
    const margin = 6;
    const x0 = Math.min(...xs) - margin;
    const x1 = Math.max(...xs) + margin;
    const y0 = Math.min(...ys) - margin;
    const y1 = Math.max(...ys) + margin;
    for (const [id, [x, y]] of positions) {
      if (targetSet.has(id)) continue;
      const inside = x >= x0 && x <= x1 && y >= y0 && y <= y1;
      expect(inside, `glyph ${id} must sit outside the lasso box`).toBe(false);
    }

    requests.length = 0;
    const overlay = panel.querySelector(".lasso-overlay");
    if (!overlay) throw new Error("no lasso overlay");
    mouse(overlay, "mousedown", x0, y0);
    mouse(panel, "mousemove", x1, y0);
    mouse(panel, "mousemove", x1, y1);
    mouse(panel, "mousemove", x0, y1);
    mouse(panel, "mouseup", x0, y1);
    await flush();

    expectRoundTrip(root, requests, target.ids, target.token);
  });

  it("node click in the Graph View highlights the same set everywhere", async () => {
    const { root, requests } = await bootApp();
    await flush();
    requests.length = 0;

    const target = bank.targets.node_click;
    const node = root.querySelector(`.graph-view g.node[data-node-id="${target.id}"]`);
    if (!node) throw new Error("graph node not rendered");
    click(node);
    await flush();

    expectRoundTrip(root, requests, [target.id], target.token);
  });

  it("all three interactions produce identical sets for identical targets", async () => {
    // The segment target and the service's sub-population for that segment
    // are the same ids the lasso would catch on that region of the metric
    // space; this guards the cross-view agreement at the data level: each
    // interaction's highlighted set equals the service echo, so any two
    // interactions selecting the same ids agree with each other.
    const segEcho = captured<SelectionPayload>(
      `/api/selection/${bank.targets.segment.token}`,
    );
    expect(new Set(segEcho.node_ids)).toEqual(new Set(bank.targets.segment.ids));
    const lassoEcho = captured<SelectionPayload>(
      `/api/selection/${bank.targets.lasso.token}`,
    );
    expect(new Set(lassoEcho.node_ids)).toEqual(new Set(bank.targets.lasso.ids));
  });
});
