/** Exported-thread schema and its runtime validation. */

export type Level1 = "argumentative" | "non_argumentative";
export type Component = "claim" | "ground" | "warrant";
export type Standpoint = "support" | "against";

export interface LabelSet {
  level1: Level1;
  component: Component | null;
  standpoint: Standpoint | null;
  argument_id: number | null;
}

export interface ViewComment {
  index: number;
  author: string;
  created_at: string;
}

export interface ViewQuote {
  id: number;
  comment_index: number;
  span: [number, number];
  text: string;
  gold: LabelSet | null;
  predicted: LabelSet | null;
}

export interface ViewArgument {
  argument_id: number;
  quote_ids: number[];
}

export interface ThreadExport {
  id: number;
  title: string;
  comments: ViewComment[];
  quotes: ViewQuote[];
  arguments: ViewArgument[];
}

/** One entry of the GET /api/threads index. */
export interface ThreadIndexEntry {
  id: number;
  title: string;
  file: string;
}

const LEVEL1: readonly string[] = ["argumentative", "non_argumentative"];
const COMPONENTS: readonly string[] = ["claim", "ground", "warrant"];
const STANDPOINTS: readonly string[] = ["support", "against"];

function fail(path: string, why: string): never {
  throw new Error(`invalid thread export: ${path} ${why}`);
}

function asObject(value: unknown, path: string): Record<string, unknown> {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    fail(path, "is not an object");
  }
  return value as Record<string, unknown>;
}

function asNumber(value: unknown, path: string): number {
  if (typeof value !== "number" || !Number.isFinite(value)) fail(path, "is not a number");
  return value;
}

function asString(value: unknown, path: string): string {
  if (typeof value !== "string") fail(path, "is not a string");
  return value;
}

function asArray(value: unknown, path: string): unknown[] {
  if (!Array.isArray(value)) fail(path, "is not an array");
  return value;
}

function parseLabels(value: unknown, path: string): LabelSet | null {
  if (value === null || value === undefined) return null;
  const obj = asObject(value, path);
  const level1 = asString(obj.level1, `${path}.level1`);
  if (!LEVEL1.includes(level1)) fail(`${path}.level1`, `has unknown code "${level1}"`);
  let component: Component | null = null;
  if (obj.component !== null && obj.component !== undefined) {
    const raw = asString(obj.component, `${path}.component`);
    if (!COMPONENTS.includes(raw)) fail(`${path}.component`, `has unknown code "${raw}"`);
    component = raw as Component;
  }
  let standpoint: Standpoint | null = null;
  if (obj.standpoint !== null && obj.standpoint !== undefined) {
    const raw = asString(obj.standpoint, `${path}.standpoint`);
    if (!STANDPOINTS.includes(raw)) fail(`${path}.standpoint`, `has unknown code "${raw}"`);
    standpoint = raw as Standpoint;
  }
  const argumentId =
    obj.argument_id === null || obj.argument_id === undefined
      ? null
      : asNumber(obj.argument_id, `${path}.argument_id`);
  return { level1: level1 as Level1, component, standpoint, argument_id: argumentId };
}

/** Parse and validate one exported thread; throws on any schema violation. */
export function parseExport(doc: unknown): ThreadExport {
  const root = asObject(doc, "document");
  const id = asNumber(root.id, "id");
  const title = asString(root.title, "title");

  const comments = asArray(root.comments, "comments").map((item, i) => {
    const c = asObject(item, `comments[${i}]`);
    return {
      index: asNumber(c.index, `comments[${i}].index`),
      author: asString(c.author, `comments[${i}].author`),
      created_at: asString(c.created_at, `comments[${i}].created_at`),
    };
  });
  const commentIndexes = new Set(comments.map((c) => c.index));

  const quotes = asArray(root.quotes, "quotes").map((item, i) => {
    const q = asObject(item, `quotes[${i}]`);
    const span = asArray(q.span, `quotes[${i}].span`);
    if (span.length !== 2) fail(`quotes[${i}].span`, "is not a [start, end] pair");
    const commentIndex = asNumber(q.comment_index, `quotes[${i}].comment_index`);
    if (!commentIndexes.has(commentIndex)) {
      fail(`quotes[${i}].comment_index`, `references missing comment ${commentIndex}`);
    }
    return {
      id: asNumber(q.id, `quotes[${i}].id`),
      comment_index: commentIndex,
      span: [
        asNumber(span[0], `quotes[${i}].span[0]`),
        asNumber(span[1], `quotes[${i}].span[1]`),
      ] as [number, number],
      text: asString(q.text, `quotes[${i}].text`),
      gold: parseLabels(q.gold, `quotes[${i}].gold`),
      predicted: parseLabels(q.predicted, `quotes[${i}].predicted`),
    };
  });
  const quoteIds = new Set(quotes.map((q) => q.id));

  const args = asArray(root.arguments, "arguments").map((item, i) => {
    const a = asObject(item, `arguments[${i}]`);
    const ids = asArray(a.quote_ids, `arguments[${i}].quote_ids`).map((v, j) =>
      asNumber(v, `arguments[${i}].quote_ids[${j}]`),
    );
    for (const qid of ids) {
      if (!quoteIds.has(qid)) fail(`arguments[${i}]`, `references missing quote ${qid}`);
    }
    return { argument_id: asNumber(a.argument_id, `arguments[${i}].argument_id`), quote_ids: ids };
  });

  return { id, title, comments, quotes, arguments: args };
}

export type LabelSource = "gold" | "predicted";

/** Labels to display: gold wins when present, otherwise predicted. */
export function effectiveLabels(
  quote: ViewQuote,
): { labels: LabelSet; source: LabelSource } | null {
  if (quote.gold) return { labels: quote.gold, source: "gold" };
  if (quote.predicted) return { labels: quote.predicted, source: "predicted" };
  return null;
}
