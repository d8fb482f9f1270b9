/** View-state store: snapshot defaults, change notification with exact
 * changed-key sets, and the axis-reorder permutation invariant. */

import { describe, expect, it } from "vitest";

import { DEFAULT_AXES, initialState, moveAxis, Store, type ViewState } from "../src/store.js";

function freshStore(): Store {
  return new Store(initialState(["P1", "P2"]));
}

describe("initialState", () => {
  it("starts on the whole population with no explicit selection", () => {
    const state = initialState(["P1", "P2"]);
    expect(state.subset).toBe("all");
    expect(state.selectionToken).toBeNull();
    expect(state.selectionIds).toEqual([]);
    expect(state.axes).toEqual(DEFAULT_AXES);
    expect(state.axes).not.toBe(DEFAULT_AXES);
    expect(state.plane).toBe("P1");
    expect(state.mode).toBe("auto");
    expect(state.hopMode).toBe(0);
    expect(state.filterUnfocused).toBe(false);
    expect(state.viewport).toEqual({ cx: 0.5, cy: 0.5, zoom: 1 });
    expect(state.featureSort).toBe("node_order");
    expect(state.brush).toBeNull();
    expect(state.hoveredNode).toBeNull();
  });

  it("tolerates an empty plane list", () => {
    expect(initialState([]).plane).toBe("");
  });
});

describe("update notifications", () => {
  it("reports exactly the keys whose values changed", () => {
    const store = freshStore();
    const seen: ReadonlySet<keyof ViewState>[] = [];
    store.subscribe((_s, changed) => seen.push(changed));
    store.update({ subset: "test", mode: "auto", hopMode: 1 });
    expect(seen.length).toBe(1);
    expect([...seen[0]!].sort()).toEqual(["hopMode", "subset"]);
    expect(store.get().subset).toBe("test");
    expect(store.get().hopMode).toBe(1);
  });

  it("skips notification entirely when nothing changed", () => {
    const store = freshStore();
    let fired = 0;
    store.subscribe(() => (fired += 1));
    store.update({ subset: "all", mode: "auto" });
    const before = store.get();
    store.update({});
    expect(fired).toBe(0);
    expect(store.get()).toBe(before);
  });

  it("treats a fresh array instance as a change (re-selection re-renders)", () => {
    const store = freshStore();
    let fired = 0;
    store.subscribe((_s, changed) => {
      fired += 1;
      expect(changed.has("selectionIds")).toBe(true);
    });
    store.update({ selectionIds: [5] });
    store.update({ selectionIds: [5] });
    expect(fired).toBe(2);
  });

  it("replaces the snapshot object on change", () => {
    const store = freshStore();
    const before = store.get();
    store.update({ hopMode: 2 });
    expect(store.get()).not.toBe(before);
    expect(before.hopMode).toBe(0);
  });

  it("unsubscribe stops delivery", () => {
    const store = freshStore();
    let fired = 0;
    const off = store.subscribe(() => (fired += 1));
    store.update({ hopMode: 1 });
    off();
    store.update({ hopMode: 2 });
    expect(fired).toBe(1);
  });
});

describe("selectionKey", () => {
  it("is the token when set, otherwise the subset", () => {
    const store = freshStore();
    expect(store.selectionKey()).toBe("all");
    store.update({ subset: "test" });
    expect(store.selectionKey()).toBe("test");
    store.update({ selectionToken: "abc123" });
    expect(store.selectionKey()).toBe("abc123");
    store.update({ selectionToken: null });
    expect(store.selectionKey()).toBe("test");
  });
});

describe("moveAxis", () => {
  const axes = ["a", "b", "c", "d"];

  it("moves forward and backward, always a permutation of the input", () => {
    expect(moveAxis(axes, 0, 2)).toEqual(["b", "c", "a", "d"]);
    expect(moveAxis(axes, 3, 0)).toEqual(["d", "a", "b", "c"]);
    expect(moveAxis(axes, 1, 1)).toEqual(axes);
    for (let from = 0; from < axes.length; from += 1) {
      for (let to = 0; to < axes.length; to += 1) {
        expect([...moveAxis(axes, from, to)].sort()).toEqual([...axes].sort());
      }
    }
  });

  it("ignores out-of-range positions and never mutates its input", () => {
    expect(moveAxis(axes, -1, 2)).toEqual(axes);
    expect(moveAxis(axes, 0, 4)).toEqual(axes);
    expect(moveAxis(axes, 9, 9)).toEqual(axes);
    const copy = [...axes];
    moveAxis(axes, 0, 3);
    expect(axes).toEqual(copy);
  });
});
