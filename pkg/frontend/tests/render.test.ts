import { beforeEach, describe, expect, it } from "vitest";

import {
  AGAINST_COLOR,
  COMPONENT_CLASSES,
  COMPONENT_COLORS,
  render,
  renderError,
} from "../src/render";
import type { ViewState } from "../src/state";
import { initialState, selectArgument, setCondition } from "../src/state";
import { parseExport } from "../src/types";
import type { ThreadExport } from "../src/types";
import { fixtureExport } from "./fixture";

const ANNOTATION_SELECTOR =
  ".greyed, .collapsed, .comp-claim, .comp-ground, .comp-warrant, " +
  ".side-support, .side-against, .source-badge, .legend, .sidebar";

let root: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = "";
  root = document.createElement("div");
  document.body.appendChild(root);
});

function thread(): ThreadExport {
  return parseExport(fixtureExport());
}

function show(state: ViewState): HTMLElement {
  render(state, root);
  return root;
}

function quoteIds(selector: string): number[] {
  return [...root.querySelectorAll<HTMLElement>(selector)]
    .map((node) => Number(node.dataset.quoteId))
    .sort((a, b) => a - b);
}

/** Quotes neither greyed nor hidden inside a collapsed section. */
function fullyVisibleIds(): number[] {
  return quoteIds(".quote:not(.greyed)").filter((id) => {
    const node = root.querySelector(`[data-quote-id="${id}"]`)!;
    return node.closest("details.collapsed") === null;
  });
}

function hexToRgb(hex: string): string {
  const n = parseInt(hex.slice(1), 16);
  return `rgb(${(n >> 16) & 255}, ${(n >> 8) & 255}, ${n & 255})`;
}

describe("raw", () => {
  it("shows the header and every quote verbatim", () => {
    show(initialState(thread()));
    expect(root.querySelector("h1")!.textContent).toBe("Tabs freeze after update");
    expect(root.querySelector(".meta")!.textContent).toBe("3 comments");
    expect(root.querySelectorAll(".quote")).toHaveLength(8);
    expect(root.textContent).toContain("Please add proper tabs.");
  });

  it("renders zero annotation-specific markup", () => {
    show(initialState(thread()));
    expect(root.querySelectorAll(ANNOTATION_SELECTOR)).toHaveLength(0);
    expect(root.querySelectorAll("details")).toHaveLength(0);
  });
});

describe("argument_only", () => {
  it("greys exactly the non-argumentative quotes", () => {
    show(setCondition(initialState(thread()), "argument_only"));
    // quote 2 and 3 are gold non-argumentative, quote 4 predicted so
    expect(quoteIds(".quote.greyed")).toEqual([2, 3, 4]);
    expect(root.querySelectorAll(".quote.greyed")).toHaveLength(3);
  });

  it("collapses exactly the fully non-argumentative comments", () => {
    show(setCondition(initialState(thread()), "argument_only"));
    const collapsed = [...root.querySelectorAll<HTMLElement>("article.comment")]
      .filter((c) => c.querySelector("details.collapsed") !== null)
      .map((c) => Number(c.dataset.commentIndex));
    expect(collapsed).toEqual([1]);
    const summary = root.querySelector("details.collapsed > summary")!;
    expect(summary.textContent).toBe("2 hidden quotes");
  });

  it("labels each annotated quote with its source", () => {
    show(setCondition(initialState(thread()), "argument_only"));
    const badge = (id: number) =>
      root.querySelector(`[data-quote-id="${id}"] .source-badge`)!.textContent;
    expect(badge(0)).toBe("gold");
    expect(badge(4)).toBe("predicted");
  });

  it("adds no component or standpoint classes", () => {
    show(setCondition(initialState(thread()), "argument_only"));
    expect(
      root.querySelectorAll(".comp-claim, .comp-ground, .comp-warrant, .side-support, .side-against"),
    ).toHaveLength(0);
  });
});

describe("separated", () => {
  it("shows the sidebar with one radio per argument", () => {
    show(setCondition(initialState(thread()), "separated"));
    const radios = [...root.querySelectorAll<HTMLInputElement>('input[name="argument"]')];
    expect(radios.map((r) => r.value)).toEqual(["", "1", "2"]);
    expect(radios[0].checked).toBe(true);
  });

  it("matches argument_only when nothing is selected", () => {
    show(setCondition(initialState(thread()), "separated"));
    expect(quoteIds(".quote.greyed")).toEqual([2, 3, 4]);
  });

  it("shows exactly the selected argument's quotes", () => {
    const data = thread();
    for (const argument of data.arguments) {
      const state = selectArgument(
        setCondition(initialState(data), "separated"),
        argument.argument_id,
      );
      show(state);
      expect(fullyVisibleIds()).toEqual([...argument.quote_ids].sort((a, b) => a - b));
      const checked = root.querySelector<HTMLInputElement>('input[name="argument"]:checked')!;
      expect(checked.value).toBe(String(argument.argument_id));
    }
  });

  it("collapses comments with no quote from the selected argument", () => {
    show(selectArgument(setCondition(initialState(thread()), "separated"), 2));
    const collapsed = [...root.querySelectorAll<HTMLElement>("article.comment")]
      .filter((c) => c.querySelector("details.collapsed") !== null)
      .map((c) => Number(c.dataset.commentIndex));
    expect(collapsed).toEqual([0, 1]);
  });

  it("shows an empty-state message when the export has no arguments", () => {
    const data = { ...thread(), arguments: [] };
    show(setCondition(initialState(data), "separated"));
    expect(root.querySelector(".sidebar .empty-state")!.textContent).toBe(
      "No arguments in this thread.",
    );
    expect(root.querySelectorAll('input[name="argument"]')).toHaveLength(0);
  });
});

describe("decomposed", () => {
  it("applies component and standpoint classes per the labels", () => {
    show(setCondition(initialState(thread()), "decomposed"));
    const classes = (id: number) => root.querySelector(`[data-quote-id="${id}"]`)!.classList;
    expect(classes(0).contains("comp-claim")).toBe(true);
    expect(classes(0).contains("side-support")).toBe(true);
    expect(classes(1).contains("comp-ground")).toBe(true);
    expect(classes(5).contains("comp-warrant")).toBe(true);
    expect(classes(5).contains("side-against")).toBe(true);
    expect(classes(7).contains("comp-ground")).toBe(true);
    expect(classes(2).contains("comp-claim")).toBe(false);
    expect(classes(2).contains("side-support")).toBe(false);
  });

  it("keeps the legend mapping one-to-one with the rendered classes", () => {
    show(setCondition(initialState(thread()), "decomposed"));
    const legendClasses = [...root.querySelectorAll<HTMLElement>(".legend-item")].map(
      (item) => item.dataset.class,
    );
    expect(legendClasses).toEqual([
      "comp-claim",
      "comp-ground",
      "comp-warrant",
      "side-support",
      "side-against",
    ]);
    const rendered = new Set<string>();
    for (const quote of root.querySelectorAll(".quote")) {
      for (const cls of quote.classList) {
        if (cls.startsWith("comp-") || cls.startsWith("side-")) rendered.add(cls);
      }
    }
    expect(new Set(legendClasses)).toEqual(rendered);
  });

  it("uses the fixed component colors and against accent in the legend", () => {
    show(setCondition(initialState(thread()), "decomposed"));
    const swatch = (cls: string) =>
      root.querySelector<HTMLElement>(`.legend-item[data-class="${cls}"] .swatch`)!;
    for (const [component, cls] of Object.entries(COMPONENT_CLASSES)) {
      expect(swatch(cls).style.backgroundColor).toBe(
        hexToRgb(COMPONENT_COLORS[component as keyof typeof COMPONENT_COLORS]),
      );
    }
    expect(swatch("side-against").style.borderLeftColor).toBe(hexToRgb(AGAINST_COLOR));
  });

  it("keeps separated selection behavior", () => {
    show(selectArgument(setCondition(initialState(thread()), "decomposed"), 2));
    expect(fullyVisibleIds()).toEqual([5, 6]);
  });
});

describe("error banner", () => {
  it("replaces the whole view, leaving no partial render", () => {
    show(initialState(thread()));
    renderError("invalid thread export: quotes is not an array", root);
    expect(root.children).toHaveLength(1);
    expect(root.querySelector(".error-banner")!.textContent).toContain(
      "invalid thread export",
    );
    expect(root.querySelectorAll(".quote")).toHaveLength(0);
  });
});
