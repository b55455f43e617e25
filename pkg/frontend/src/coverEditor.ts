/** Cover-box drag logic and the request shaping for interval edits.
 *
 * All functions are pure. Unedited intervals are carried through by
 * reference, so their JSON serialization in the outgoing recompute request
 * is byte-identical to what the service last sent.
 */

import type { CoverJson, IntervalJson } from "./types.js";

export type DragMode = "shift" | "lo" | "hi";

export interface DragState {
  id: number;
  mode: DragMode;
  startLo: number;
  startHi: number;
}

export interface IntervalEdit {
  id: number;
  lo: number;
  hi: number;
}

/** Bounds after dragging by `delta` lens units; null when the drag would
 * invert the interval (caller snaps the box back). */
export function applyDrag(drag: DragState, delta: number): IntervalEdit | null {
  let lo = drag.startLo;
  let hi = drag.startHi;
  switch (drag.mode) {
    case "shift":
      lo += delta;
      hi += delta;
      break;
    case "lo":
      lo += delta;
      break;
    case "hi":
      hi += delta;
      break;
  }
  if (!(lo < hi)) return null;
  return { id: drag.id, lo, hi };
}

/** The modify_interval-shaped payload for one edit. */
export function modifyIntervalRequest(edit: IntervalEdit): { id: number; lo: number; hi: number } {
  return { id: edit.id, lo: edit.lo, hi: edit.hi };
}

/** New cover with one interval replaced; every other interval is the same
 * object as before (byte-identical when serialized). Provenance becomes
 * manual: the cover is no longer the uniform formula's output. */
export function coverAfterEdit(cover: CoverJson, edit: IntervalEdit): CoverJson {
  if (!cover.intervals.some((iv) => iv.id === edit.id)) {
    throw new Error(`no interval with id ${edit.id}`);
  }
  const intervals = cover.intervals.map((iv) =>
    iv.id === edit.id ? { id: edit.id, lo: edit.lo, hi: edit.hi } : iv,
  );
  return { provenance: "manual", intervals };
}

/** Open sub-ranges of [0,1] no interval covers (gaps are legal, flagged). */
export function coverageGaps(intervals: IntervalJson[]): Array<[number, number]> {
  const sorted = [...intervals].sort((a, b) => a.lo - b.lo);
  const gaps: Array<[number, number]> = [];
  let cursor = 0;
  for (const iv of sorted) {
    if (iv.lo > cursor) gaps.push([cursor, iv.lo]);
    cursor = Math.max(cursor, iv.hi);
    if (cursor >= 1) break;
  }
  if (cursor < 1) gaps.push([cursor, 1]);
  return gaps;
}

/** Midpoint-based box color, matching the per-lens colormap used for
 * nodes so the cover panel and the views agree. */
export function intervalMidpoint(iv: IntervalJson): number {
  return (iv.lo + iv.hi) / 2;
}
