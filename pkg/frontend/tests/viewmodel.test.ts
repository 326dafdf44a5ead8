import { describe, expect, it } from "vitest";
import flow from "./fixtures/session_flow.json";

import {
  buildViewModel,
  canSatisfy,
  canUnsatisfy,
  changedIds,
  StateDoc,
} from "../src/model.js";

const initial = flow.initialState as unknown as StateDoc;
const afterDeluxe = flow.afterDeluxe as unknown as StateDoc;
const afterFrame = flow.afterFrame as unknown as StateDoc;

describe("view model derivation", () => {
  it("builds the tree from the top constraint", () => {
    const vm = buildViewModel(initial, null, new Set());
    expect(vm.root?.constraint.id).toBe(initial.top);
    const sectionIds = vm.root!.children.map((c) => c.constraint.id);
    expect(sectionIds).toContain("package_section");
    expect(sectionIds).toContain("opener_section");
  });

  it("is a pure function of the state document", () => {
    const a = buildViewModel(initial, null, new Set());
    const b = buildViewModel(initial, null, new Set());
    expect(JSON.stringify(a.root)).toBe(JSON.stringify(b.root));
  });

  it("highlights nothing without a previous state", () => {
    expect(buildViewModel(initial, null, new Set()).highlights.size).toBe(0);
  });

  it("highlights the activation ripple of a step", () => {
    const changed = changedIds(afterDeluxe, afterFrame);
    expect(changed.has("sunroof_section")).toBe(true);
    expect(changed.has("frame")).toBe(true);
    expect(changed.has("engine_section")).toBe(false);
  });

  it("collapse flags are local state, not derived", () => {
    const collapsed = new Set(["package_section"]);
    const vm = buildViewModel(initial, null, collapsed);
    expect(vm.collapsed.has("package_section")).toBe(true);
  });
});

describe("action gating", () => {
  it("never offers unsatisfy on satisfied or pinned-satisfied nodes", () => {
    expect(canUnsatisfy("satisfied")).toBe(false);
    expect(canUnsatisfy("satisfied_yet")).toBe(false);
    expect(canUnsatisfy("undetermined")).toBe(true);
    expect(canUnsatisfy("unsatisfied")).toBe(true);
  });

  it("never offers satisfy on unsatisfied or pinned-unsatisfied nodes", () => {
    expect(canSatisfy("unsatisfied")).toBe(false);
    expect(canSatisfy("unsatisfied_yet")).toBe(false);
    expect(canSatisfy("undetermined")).toBe(true);
    expect(canSatisfy("satisfied")).toBe(true);
  });
});
