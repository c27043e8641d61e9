/** Pure view-state transitions; the DOM is rebuilt from state after each one. */

import type { ThreadExport } from "./types.js";

export type Condition = "raw" | "argument_only" | "separated" | "decomposed";

export const CONDITIONS: readonly Condition[] = [
  "raw",
  "argument_only",
  "separated",
  "decomposed",
];

/** Conditions in which an argument can be selected. */
const SELECTABLE: readonly Condition[] = ["separated", "decomposed"];

export interface ViewState {
  condition: Condition;
  selectedArgument: number | null;
  thread: ThreadExport;
}

export function initialState(thread: ThreadExport): ViewState {
  return { condition: "raw", selectedArgument: null, thread };
}

/** Switching out of separated/decomposed drops any argument selection. */
export function setCondition(state: ViewState, condition: Condition): ViewState {
  const keepSelection = SELECTABLE.includes(condition);
  return {
    condition,
    selectedArgument: keepSelection ? state.selectedArgument : null,
    thread: state.thread,
  };
}

/** No-op outside separated/decomposed or for an unknown argument id. */
export function selectArgument(state: ViewState, argumentId: number | null): ViewState {
  if (!SELECTABLE.includes(state.condition)) return state;
  if (argumentId !== null && !state.thread.arguments.some((a) => a.argument_id === argumentId)) {
    console.warn(`select_argument: unknown argument ${argumentId}`);
    return state;
  }
  if (argumentId === state.selectedArgument) return state;
  return { condition: state.condition, selectedArgument: argumentId, thread: state.thread };
}
