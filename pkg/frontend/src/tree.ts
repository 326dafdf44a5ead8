// Constraint-tree rendering: one <li> per node, color-coded by satisfaction
// value, dotted when inactive, with min/max badges and gated task buttons.

import {
  canSatisfy,
  canUnsatisfy,
  ConstraintState,
  TreeNode,
  VALUE_LABELS,
  ViewModel,
} from "./model.js";

export interface TreeHandlers {
  onTask(constraint: string, polarity: "satisfy" | "unsatisfy"): void;
  onToggleCollapse(constraint: string): void;
}

function nodeLabel(c: ConstraintState): string {
  if (c.kind === "base" && c.relation) {
    return `${c.id}: ${c.variable} ${c.relation.kind} ${c.relation.value}`;
  }
  return c.id;
}

function renderNode(
  node: TreeNode,
  vm: ViewModel,
  handlers: TreeHandlers,
  pending: boolean,
): HTMLElement {
  const c = node.constraint;
  const li = document.createElement("li");
  li.dataset.constraint = c.id;
  li.classList.add("node", `value-${c.value}`, c.active ? "active" : "inactive");
  if (vm.highlights.has(c.id)) li.classList.add("highlight");

  const row = document.createElement("div");
  row.className = "node-row";

  if (node.children.length > 0) {
    const toggle = document.createElement("button");
    toggle.className = "collapse-toggle";
    toggle.textContent = vm.collapsed.has(c.id) ? "+" : "−";
    toggle.addEventListener("click", () => handlers.onToggleCollapse(c.id));
    row.appendChild(toggle);
  }

  const label = document.createElement("span");
  label.className = "node-label";
  label.textContent = nodeLabel(c);
  label.title = VALUE_LABELS[c.value];
  row.appendChild(label);

  if (c.kind !== "base") {
    const badge = document.createElement("span");
    badge.className = "bounds-badge";
    badge.textContent = `${c.kind} [${c.min ?? "·"},${c.max ?? "·"}]`;
    row.appendChild(badge);
  }

  const value = document.createElement("span");
  value.className = "value-chip";
  value.textContent = c.value;
  row.appendChild(value);

  if (c.active) {
    if (canSatisfy(c.value)) {
      const b = document.createElement("button");
      b.className = "task-btn satisfy";
      b.textContent = "satisfy";
      b.disabled = pending;
      b.addEventListener("click", () => handlers.onTask(c.id, "satisfy"));
      row.appendChild(b);
    }
    if (canUnsatisfy(c.value)) {
      const b = document.createElement("button");
      b.className = "task-btn unsatisfy";
      b.textContent = "unsatisfy";
      b.disabled = pending;
      b.addEventListener("click", () => handlers.onTask(c.id, "unsatisfy"));
      row.appendChild(b);
    }
  }

  li.appendChild(row);
  if (node.children.length > 0 && !vm.collapsed.has(c.id)) {
    const ul = document.createElement("ul");
    for (const child of node.children) {
      ul.appendChild(renderNode(child, vm, handlers, pending));
    }
    li.appendChild(ul);
  }
  return li;
}

export function renderTree(
  container: HTMLElement,
  vm: ViewModel,
  handlers: TreeHandlers,
  pending: boolean,
): void {
  container.textContent = "";
  if (!vm.root) {
    const p = document.createElement("p");
    p.className = "render-error";
    p.textContent = "malformed state: no tree root";
    container.appendChild(p);
    return;
  }
  const ul = document.createElement("ul");
  ul.className = "tree-root";
  ul.appendChild(renderNode(vm.root, vm, handlers, pending));
  container.appendChild(ul);
}
