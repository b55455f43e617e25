/** Explorer state: current graph/lens/cover/summary/selection, the
 * debounced recompute loop with newest-edit-wins semantics, and
 * URL-encodable view state for shareable links.
 */

import type { ServiceClient } from "./api.js";
import { coverAfterEdit, type IntervalEdit } from "./coverEditor.js";
import { propagateSelection, selectionIsLive, emptyHighlights, type Highlights, type Selection } from "./selection.js";
import type { CoverJson, SummaryJson } from "./types.js";

export function debounce<A extends unknown[]>(fn: (...args: A) => void, ms: number) {
  let timer: ReturnType<typeof setTimeout> | null = null;
  let pending: A | null = null;
  const call = (...args: A) => {
    pending = args;
    if (timer !== null) clearTimeout(timer);
    timer = setTimeout(() => {
      timer = null;
      const args2 = pending as A;
      pending = null;
      fn(...args2);
    }, ms);
  };
  call.cancel = () => {
    if (timer !== null) clearTimeout(timer);
    timer = null;
    pending = null;
  };
  call.flush = () => {
    if (timer === null) return;
    clearTimeout(timer);
    timer = null;
    const args2 = pending as A;
    pending = null;
    fn(...args2);
  };
  return call;
}

export interface LensSpec {
  kind: string;
  params: Record<string, number>;
}

export interface ExplorerSnapshot {
  graphId: string | null;
  lens: LensSpec;
  cover: CoverJson | null;
  summary: SummaryJson | null;
  selection: Selection;
  highlights: Highlights;
  busy: boolean;
  coverDirty: boolean;
}

const DEBOUNCE_MS = 150;

/** Drives the edit -> recompute -> refresh loop. At most one in-flight
 * recompute matters: responses carry the token of the edit that issued
 * them, and stale responses are dropped. */
export class ExplorerState {
  graphId: string | null = null;
  lens: LensSpec = { kind: "l2", params: {} };
  cover: CoverJson | null = null;
  summary: SummaryJson | null = null;
  selection: Selection = { kind: "none" };
  busy = false;
  coverDirty = false;

  private token = 0;
  private listeners: Array<(s: ExplorerSnapshot) => void> = [];
  private readonly requestRecompute: ReturnType<typeof debounce<[number]>>;

  constructor(
    private readonly client: ServiceClient,
    debounceMs: number = DEBOUNCE_MS,
  ) {
    this.requestRecompute = debounce((token: number) => void this.recompute(token), debounceMs);
  }

  onChange(listener: (s: ExplorerSnapshot) => void): void {
    this.listeners.push(listener);
  }

  snapshot(): ExplorerSnapshot {
    return {
      graphId: this.graphId,
      lens: this.lens,
      cover: this.cover,
      summary: this.summary,
      selection: this.selection,
      highlights: this.summary
        ? propagateSelection(this.summary, this.selection)
        : emptyHighlights(),
      busy: this.busy,
      coverDirty: this.coverDirty,
    };
  }

  private emit(): void {
    const snap = this.snapshot();
    for (const listener of this.listeners) listener(snap);
  }

  setGraph(graphId: string): void {
    this.graphId = graphId;
    this.summary = null;
    this.selection = { kind: "none" };
    this.emit();
  }

  setLens(lens: LensSpec): void {
    this.lens = lens;
    this.scheduleRecompute();
  }

  setCover(cover: CoverJson): void {
    this.cover = cover;
    this.scheduleRecompute();
  }

  select(selection: Selection): void {
    this.selection = selection;
    this.emit();
  }

  /** A drag released on one cover box: swap in the edited interval
   * (others untouched by reference) and schedule the recompute. */
  applyIntervalEdit(edit: IntervalEdit): void {
    if (!this.cover) throw new Error("no cover loaded");
    this.cover = coverAfterEdit(this.cover, edit);
    this.coverDirty = true;
    this.scheduleRecompute();
  }

  scheduleRecompute(): void {
    if (!this.graphId || !this.cover) return;
    this.token += 1;
    this.busy = true;
    this.emit();
    this.requestRecompute(this.token);
  }

  /** Force the debounce timer now (used by tests and the lens selector). */
  flush(): void {
    this.requestRecompute.flush();
  }

  private async recompute(token: number): Promise<void> {
    if (!this.graphId || !this.cover) return;
    let summary: SummaryJson;
    try {
      summary = await this.client.postMog(
        this.graphId,
        { kind: this.lens.kind, params: this.lens.params },
        this.cover,
      );
    } catch (error) {
      if (token === this.token) {
        this.busy = false;
        this.emit();
      }
      throw error;
    }
    if (token !== this.token) return; // a newer edit superseded this response
    this.summary = summary;
    this.busy = false;
    this.coverDirty = false;
    if (!selectionIsLive(summary, this.selection)) {
      this.selection = { kind: "none" };
    }
    this.emit();
  }
}

/** Shareable view state <-> URL query string. */
export function encodeState(graphId: string, lens: LensSpec, cover: CoverJson): string {
  const params = new URLSearchParams();
  params.set("graph", graphId);
  params.set("lens", lens.kind);
  if (Object.keys(lens.params).length) params.set("lensParams", JSON.stringify(lens.params));
  params.set("cover", JSON.stringify(cover));
  return params.toString();
}

export function decodeState(
  query: string,
): { graphId: string; lens: LensSpec; cover: CoverJson } | null {
  const params = new URLSearchParams(query);
  const graphId = params.get("graph");
  const kind = params.get("lens");
  const cover = params.get("cover");
  if (!graphId || !kind || !cover) return null;
  const lensParams = params.get("lensParams");
  return {
    graphId,
    lens: { kind, params: lensParams ? (JSON.parse(lensParams) as Record<string, number>) : {} },
    cover: JSON.parse(cover) as CoverJson,
  };
}
