/** Entry point: load the first thread, then route radio changes to state. */

import { loadIndex, loadThread } from "./api.js";
import { render, renderError } from "./render.js";
import type { Condition, ViewState } from "./state.js";
import { CONDITIONS, initialState, selectArgument, setCondition } from "./state.js";

function wire(root: HTMLElement, first: ViewState): void {
  let state = first;
  const apply = (next: ViewState) => {
    if (next !== state) {
      state = next;
      render(state, root);
    }
  };
  root.addEventListener("change", (event) => {
    const target = event.target;
    if (!(target instanceof HTMLInputElement)) return;
    if (target.name === "condition" && CONDITIONS.includes(target.value as Condition)) {
      apply(setCondition(state, target.value as Condition));
    } else if (target.name === "argument") {
      apply(selectArgument(state, target.value === "" ? null : Number(target.value)));
    }
  });
  render(state, root);
}

async function start(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");
  try {
    const index = await loadIndex();
    if (index.length === 0) {
      renderError("No exported threads found.", root);
      return;
    }
    const thread = await loadThread(index[0].file);
    wire(root, initialState(thread));
  } catch (error) {
    renderError(error instanceof Error ? error.message : String(error), root);
  }
}

void start();
