// Application wiring: one live session, at most one in-flight step, and a
// full re-render from the freshly fetched state after every action.

import { ApiError, SessionApi, StepAction } from "./api.js";
import { buildViewModel, StateDoc } from "./model.js";
import { renderActivators, renderToolbar, renderVariables } from "./controls.js";
import { renderTree } from "./tree.js";

export class App {
  private sessionId: string | null = null;
  private state: StateDoc | null = null;
  private previous: StateDoc | null = null;
  private collapsed = new Set<string>();
  private pending = false;

  constructor(
    private readonly api: SessionApi,
    private readonly root: Document = document,
  ) {}

  private el(id: string): HTMLElement {
    const node = this.root.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node;
  }

  private banner(text: string, kind: "info" | "error" = "info"): void {
    const banner = this.el("banner");
    banner.textContent = text;
    banner.className = text ? `banner ${kind}` : "banner";
  }

  async start(problemText: string): Promise<void> {
    this.sessionId = await this.api.createSession(problemText);
    this.previous = null;
    this.state = await this.api.getState(this.sessionId);
    this.banner("");
    this.render();
  }

  async refresh(): Promise<void> {
    if (!this.sessionId) return;
    this.previous = this.state;
    this.state = await this.api.getState(this.sessionId);
    this.render();
  }

  private async step(action: StepAction): Promise<void> {
    if (!this.sessionId || this.pending) return;
    this.pending = true;
    this.render();
    try {
      const next = await this.api.applyStep(this.sessionId, action);
      if (next.failure) {
        // a failed step leaves the session untouched; keep the old view
        this.banner(`step failed: ${next.failure}`, "error");
      } else {
        this.previous = this.state;
        this.state = next;
        if (next.solutionCount !== undefined) {
          this.banner(`${next.solutionCount} solutions`);
        } else {
          this.banner("");
        }
      }
    } catch (err) {
      const detail = err instanceof ApiError ? err.message : String(err);
      this.banner(`request failed: ${detail}`, "error");
    } finally {
      this.pending = false;
      this.render();
    }
  }

  render(): void {
    if (!this.state) return;
    const vm = buildViewModel(this.state, this.previous, this.collapsed);
    const handlers = {
      onTask: (constraint: string, polarity: "satisfy" | "unsatisfy") =>
        void this.step({ action: "task", constraint, polarity }),
      onToggleCollapse: (cid: string) => {
        if (this.collapsed.has(cid)) this.collapsed.delete(cid);
        else this.collapsed.add(cid);
        this.render();
      },
      onAssign: (variable: string, value: string) =>
        void this.step({ action: "assign", variable, value }),
      onUndo: () => void this.step({ action: "undo" }),
      onCompleteFirst: () => void this.step({ action: "complete", mode: "first" }),
      onCountAll: () => void this.step({ action: "complete", mode: "all" }),
    };
    renderTree(this.el("tree"), vm, handlers, this.pending);
    renderVariables(this.el("variables"), this.state, handlers, this.pending, vm.highlights);
    renderActivators(this.el("activators"), this.state);
    renderToolbar(this.el("toolbar"), this.state, handlers, this.pending);
  }
}

export function bootstrap(): void {
  const api = new SessionApi(
    (window as unknown as { DMC_API_BASE?: string }).DMC_API_BASE ?? "",
  );
  const app = new App(api);
  const loadButton = document.getElementById("load-car");
  loadButton?.addEventListener("click", async () => {
    try {
      const text = await api.fetchFixture("car");
      await app.start(text);
    } catch (err) {
      const banner = document.getElementById("banner");
      if (banner) {
        banner.textContent = `could not load: ${String(err)}`;
        banner.className = "banner error";
      }
    }
  });
  const form = document.getElementById("problem-form");
  form?.addEventListener("submit", async (event) => {
    event.preventDefault();
    const area = document.getElementById("problem-text") as HTMLTextAreaElement;
    await app.start(area.value);
  });
}

if (typeof window !== "undefined" && typeof document !== "undefined"
    && document.getElementById("tree")) {
  bootstrap();
}
