// Variable panel, activator annotations, and the step toolbar.

import type { StateDoc } from "./model.js";

export interface ControlHandlers {
  onAssign(variable: string, value: string): void;
  onUndo(): void;
  onCompleteFirst(): void;
  onCountAll(): void;
}

export function renderVariables(
  container: HTMLElement,
  state: StateDoc,
  handlers: ControlHandlers,
  pending: boolean,
  highlights: Set<string>,
): void {
  container.textContent = "";
  for (const v of state.variables) {
    const row = document.createElement("div");
    row.className = `var-row ${v.active ? "active" : "inactive"}`;
    row.dataset.variable = v.id;
    if (highlights.has(v.id)) row.classList.add("highlight");

    const name = document.createElement("span");
    name.className = "var-name";
    name.textContent = v.initial ? `${v.id} *` : v.id;
    row.appendChild(name);

    if (v.assignment !== null) {
      const chip = document.createElement("span");
      chip.className = "assignment";
      chip.textContent = v.assignment;
      row.appendChild(chip);
    } else {
      for (const value of v.domain) {
        const b = document.createElement("button");
        b.className = "assign-btn";
        b.textContent = value;
        b.disabled = pending || !v.active;
        b.addEventListener("click", () => handlers.onAssign(v.id, value));
        row.appendChild(b);
      }
    }
    container.appendChild(row);
  }
}

export function renderActivators(container: HTMLElement, state: StateDoc): void {
  container.textContent = "";
  for (const a of state.activators) {
    const row = document.createElement("div");
    row.className = "activator-row";
    row.dataset.activator = a.id;
    if (a.fired) row.classList.add("fired");
    if (a.violated) row.classList.add("violated");
    const arrow = a.action === "activate" ? "⇒ activate" : "⇒ keep inactive";
    row.textContent =
      `${a.id}: ${a.condition.kind} ${a.condition.ref} ${arrow} ` +
      a.targets.join(", ");
    container.appendChild(row);
  }
}

export function renderToolbar(
  container: HTMLElement,
  state: StateDoc,
  handlers: ControlHandlers,
  pending: boolean,
): void {
  container.textContent = "";
  const undo = document.createElement("button");
  undo.id = "undo-btn";
  undo.textContent = "Undo";
  undo.disabled = pending || state.stepLog.length === 0;
  undo.addEventListener("click", handlers.onUndo);

  const complete = document.createElement("button");
  complete.id = "complete-btn";
  complete.textContent = "Complete (first)";
  complete.disabled = pending;
  complete.addEventListener("click", handlers.onCompleteFirst);

  const count = document.createElement("button");
  count.id = "count-btn";
  count.textContent = "Count all completions";
  count.disabled = pending;
  count.addEventListener("click", handlers.onCountAll);

  const steps = document.createElement("span");
  steps.id = "step-indicator";
  steps.textContent = `steps: ${state.stepLog.length}, tick: ${state.tick}`;

  container.append(undo, complete, count, steps);
}
