/** Read-only data access: the thread index and individual exports. */

import type { ThreadExport, ThreadIndexEntry } from "./types.js";
import { parseExport } from "./types.js";

export async function loadIndex(): Promise<ThreadIndexEntry[]> {
  const response = await fetch("/api/threads");
  if (!response.ok) throw new Error(`thread index: HTTP ${response.status}`);
  const doc: unknown = await response.json();
  if (!Array.isArray(doc)) throw new Error("thread index: not an array");
  return doc as ThreadIndexEntry[];
}

export async function loadThread(file: string): Promise<ThreadExport> {
  const response = await fetch(`/threads/${file}`);
  if (!response.ok) throw new Error(`thread ${file}: HTTP ${response.status}`);
  return parseExport(await response.json());
}
