// State documents served by the session API, plus the derived view model.
// The client holds no solver logic: everything it shows is a function of the
// last fetched state document and local UI flags.

export type SatValue =
  | "undetermined"
  | "satisfied"
  | "unsatisfied"
  | "satisfied_yet"
  | "unsatisfied_yet";

export interface RelationState {
  kind: "=" | "!=";
  value: string;
}

export interface ConstraintState {
  id: string;
  kind: "base" | "meta" | "receiver" | "allreceiver" | "top";
  parent: string | null;
  children: string[];
  active: boolean;
  value: SatValue;
  variable?: string;
  relation?: RelationState;
  min: number | null;
  max: number | null;
}

export interface VariableState {
  id: string;
  domain: string[];
  assignment: string | null;
  active: boolean;
  initial: boolean;
}

export interface ActivatorState {
  id: string;
  condition: { kind: string; ref: string };
  action: "activate" | "require-inactive";
  targets: string[];
  fired: boolean;
  violated: boolean;
}

export interface StepEntry {
  step: number;
  action: Record<string, unknown>;
  tick: number;
  activation: { fired: string[]; violated: string[] };
}

export interface StateDoc {
  top: string;
  tick: number;
  constraints: ConstraintState[];
  variables: VariableState[];
  activators: ActivatorState[];
  stepLog: StepEntry[];
  lastActivation: { fired: string[]; violated: string[] };
  failure?: string;
  solutions?: Record<string, string>[];
  solutionCount?: number;
}

export interface TreeNode {
  constraint: ConstraintState;
  children: TreeNode[];
}

export interface ViewModel {
  root: TreeNode | null;
  byId: Map<string, ConstraintState>;
  highlights: Set<string>;
  collapsed: Set<string>;
}

/** Ids whose rendered facts (activity, value, assignment) changed between
 * two state documents; used to flash the activation ripple of a step. */
export function changedIds(prev: StateDoc | null, next: StateDoc): Set<string> {
  const out = new Set<string>();
  if (!prev) return out;
  const prevCons = new Map(prev.constraints.map((c) => [c.id, c]));
  for (const c of next.constraints) {
    const p = prevCons.get(c.id);
    if (p && (p.active !== c.active || p.value !== c.value)) out.add(c.id);
  }
  const prevVars = new Map(prev.variables.map((v) => [v.id, v]));
  for (const v of next.variables) {
    const p = prevVars.get(v.id);
    if (p && (p.active !== v.active || p.assignment !== v.assignment)) out.add(v.id);
  }
  return out;
}

export function buildViewModel(
  state: StateDoc,
  prev: StateDoc | null,
  collapsed: Set<string>,
): ViewModel {
  const byId = new Map(state.constraints.map((c) => [c.id, c]));
  const build = (id: string): TreeNode => ({
    constraint: byId.get(id)!,
    children: byId.get(id)!.children.filter((ch) => byId.has(ch)).map(build),
  });
  return {
    root: byId.has(state.top) ? build(state.top) : null,
    byId,
    highlights: changedIds(prev, state),
    collapsed,
  };
}

/** Action gating mirrors the solver's pruning: a task that is certain to fail
 * is never offered. */
export function canSatisfy(value: SatValue): boolean {
  return value !== "unsatisfied" && value !== "unsatisfied_yet";
}

export function canUnsatisfy(value: SatValue): boolean {
  return value !== "satisfied" && value !== "satisfied_yet";
}

export const VALUE_LABELS: Record<SatValue, string> = {
  undetermined: "undetermined",
  satisfied: "satisfied",
  unsatisfied: "unsatisfied",
  satisfied_yet: "satisfied-yet (cannot become unsatisfied)",
  unsatisfied_yet: "unsatisfied-yet (cannot become satisfied)",
};
