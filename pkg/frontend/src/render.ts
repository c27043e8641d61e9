/** DOM construction for the four thread representations.

Rendering is total on a valid state: the whole tree under the root is
rebuilt from scratch, so collapsed-section expansion is transient across
condition switches by construction.
*/

import type { Component, Standpoint, ThreadExport, ViewQuote } from "./types.js";
import { effectiveLabels } from "./types.js";
import type { Condition, ViewState } from "./state.js";
import { CONDITIONS } from "./state.js";

export const COMPONENT_CLASSES: Record<Component, string> = {
  claim: "comp-claim",
  ground: "comp-ground",
  warrant: "comp-warrant",
};

export const STANDPOINT_CLASSES: Record<Standpoint, string> = {
  support: "side-support",
  against: "side-against",
};

export const COMPONENT_COLORS: Record<Component, string> = {
  claim: "#1f77b4",
  ground: "#2ca02c",
  warrant: "#ff7f0e",
};

export const AGAINST_COLOR = "#d62728";

const CONDITION_TITLES: Record<Condition, string> = {
  raw: "Raw",
  argument_only: "Argument only",
  separated: "Separated arguments",
  decomposed: "Decomposed arguments",
};

type Emphasis = "plain" | "greyed";

function quoteEmphasis(state: ViewState, quote: ViewQuote): Emphasis {
  if (state.condition === "raw") return "plain";
  const effective = effectiveLabels(quote);
  const nonArgumentative =
    effective !== null && effective.labels.level1 === "non_argumentative";
  if (state.condition === "argument_only" || state.selectedArgument === null) {
    return nonArgumentative ? "greyed" : "plain";
  }
  const selected = state.thread.arguments.find(
    (a) => a.argument_id === state.selectedArgument,
  );
  return selected && selected.quote_ids.includes(quote.id) ? "plain" : "greyed";
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function buildHeader(thread: ThreadExport): HTMLElement {
  const header = el("header", "thread-head");
  header.appendChild(el("h1", undefined, thread.title));
  const n = thread.comments.length;
  header.appendChild(el("span", "meta", `${n} comment${n === 1 ? "" : "s"}`));
  return header;
}

function buildConditionsNav(state: ViewState): HTMLElement {
  const nav = el("nav", "conditions");
  for (const condition of CONDITIONS) {
    const label = el("label");
    const radio = el("input");
    radio.type = "radio";
    radio.name = "condition";
    radio.value = condition;
    radio.checked = condition === state.condition;
    label.appendChild(radio);
    label.appendChild(document.createTextNode(` ${CONDITION_TITLES[condition]}`));
    nav.appendChild(label);
  }
  return nav;
}

function buildSidebar(state: ViewState): HTMLElement {
  const aside = el("aside", "sidebar");
  aside.appendChild(el("h2", undefined, "Arguments"));
  if (state.thread.arguments.length === 0) {
    aside.appendChild(el("p", "empty-state", "No arguments in this thread."));
    return aside;
  }
  const all = el("label");
  const allRadio = el("input");
  allRadio.type = "radio";
  allRadio.name = "argument";
  allRadio.value = "";
  allRadio.checked = state.selectedArgument === null;
  all.appendChild(allRadio);
  all.appendChild(document.createTextNode(" All arguments"));
  aside.appendChild(all);
  for (const argument of state.thread.arguments) {
    const label = el("label");
    const radio = el("input");
    radio.type = "radio";
    radio.name = "argument";
    radio.value = String(argument.argument_id);
    radio.checked = argument.argument_id === state.selectedArgument;
    label.appendChild(radio);
    const n = argument.quote_ids.length;
    label.appendChild(
      document.createTextNode(
        ` Argument ${argument.argument_id} (${n} quote${n === 1 ? "" : "s"})`,
      ),
    );
    aside.appendChild(label);
  }
  return aside;
}

function buildQuote(state: ViewState, quote: ViewQuote): HTMLElement {
  const node = el("p", "quote", quote.text);
  node.dataset.quoteId = String(quote.id);
  if (state.condition === "raw") return node;

  if (quoteEmphasis(state, quote) === "greyed") node.classList.add("greyed");
  const effective = effectiveLabels(quote);
  if (effective === null) return node;

  if (state.condition === "decomposed") {
    const { component, standpoint } = effective.labels;
    if (component) node.classList.add(COMPONENT_CLASSES[component]);
    if (standpoint) node.classList.add(STANDPOINT_CLASSES[standpoint]);
  }
  node.appendChild(el("span", `source-badge source-${effective.source}`, effective.source));
  return node;
}

function buildComment(state: ViewState, index: number): HTMLElement {
  const comment = state.thread.comments.find((c) => c.index === index)!;
  const quotes = state.thread.quotes.filter((q) => q.comment_index === index);

  const article = el("article", "comment");
  article.dataset.commentIndex = String(index);
  const head = el("header", "comment-head");
  head.appendChild(el("span", "author", comment.author));
  const time = el("time", undefined, comment.created_at);
  time.setAttribute("datetime", comment.created_at);
  head.appendChild(time);
  article.appendChild(head);

  const body = el("div", "quotes");
  for (const quote of quotes) body.appendChild(buildQuote(state, quote));

  const allGreyed =
    state.condition !== "raw" &&
    quotes.length > 0 &&
    quotes.every((q) => quoteEmphasis(state, q) === "greyed");
  if (allGreyed) {
    const details = el("details", "collapsed");
    const n = quotes.length;
    details.appendChild(el("summary", undefined, `${n} hidden quote${n === 1 ? "" : "s"}`));
    details.appendChild(body);
    article.appendChild(details);
  } else {
    article.appendChild(body);
  }
  return article;
}

function buildLegend(): HTMLElement {
  const legend = el("footer", "legend");
  for (const component of ["claim", "ground", "warrant"] as const) {
    const item = el("span", "legend-item");
    item.dataset.class = COMPONENT_CLASSES[component];
    const swatch = el("span", "swatch");
    swatch.style.backgroundColor = COMPONENT_COLORS[component];
    item.appendChild(swatch);
    item.appendChild(document.createTextNode(component));
    legend.appendChild(item);
  }
  for (const standpoint of ["support", "against"] as const) {
    const item = el("span", "legend-item");
    item.dataset.class = STANDPOINT_CLASSES[standpoint];
    const swatch = el("span", `swatch swatch-${standpoint}`);
    if (standpoint === "against") swatch.style.borderLeftColor = AGAINST_COLOR;
    item.appendChild(swatch);
    item.appendChild(document.createTextNode(standpoint));
    legend.appendChild(item);
  }
  return legend;
}

/** Rebuild the whole view under `root` from the given state. */
export function render(state: ViewState, root: HTMLElement): void {
  const pieces: HTMLElement[] = [buildHeader(state.thread), buildConditionsNav(state)];

  const layout = el("div", "layout");
  if (state.condition === "separated" || state.condition === "decomposed") {
    layout.appendChild(buildSidebar(state));
  }
  const main = el("main", "thread");
  for (const comment of state.thread.comments) {
    main.appendChild(buildComment(state, comment.index));
  }
  layout.appendChild(main);
  pieces.push(layout);

  if (state.condition === "decomposed") pieces.push(buildLegend());
  root.replaceChildren(...pieces);
}

/** Replace the view with an error banner; nothing else is rendered. */
export function renderError(message: string, root: HTMLElement): void {
  root.replaceChildren(el("div", "error-banner", message));
}
