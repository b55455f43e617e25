/** Three-way selection propagation, computed entirely client-side from the
 * memberships the service ships with every summary.
 *
 * - Selecting a cover element highlights its preimage in the graph and
 *   every summary node that element generated.
 * - Selecting a summary node highlights its member cluster and the cover
 *   element that generated it.
 * - Selecting a summary edge splits the two clusters into
 *   source-only / target-only / intersection, each rendered in its own
 *   color.
 */

import type { SummaryJson } from "./types.js";

export type Selection =
  | { kind: "none" }
  | { kind: "cover-element"; intervalId: number }
  | { kind: "summary-node"; nodeId: number }
  | { kind: "summary-edge"; source: number; target: number };

export interface EdgeParts {
  sourceOnly: Set<string>;
  targetOnly: Set<string>;
  intersection: Set<string>;
}

export interface Highlights {
  graphNodes: Set<string>;
  summaryNodes: Set<number>;
  intervals: Set<number>;
  /** Only set for edge selections. */
  edgeParts: EdgeParts | null;
}

export function emptyHighlights(): Highlights {
  return { graphNodes: new Set(), summaryNodes: new Set(), intervals: new Set(), edgeParts: null };
}

export function propagateSelection(summary: SummaryJson, selection: Selection): Highlights {
  const out = emptyHighlights();
  switch (selection.kind) {
    case "none":
      return out;
    case "cover-element": {
      out.intervals.add(selection.intervalId);
      for (const node of summary.nodes) {
        if (node.interval !== selection.intervalId) continue;
        out.summaryNodes.add(node.id);
        for (const member of node.members) out.graphNodes.add(member);
      }
      return out;
    }
    case "summary-node": {
      const node = summary.nodes.find((n) => n.id === selection.nodeId);
      if (!node) return out; // stale id: selection dissolves
      out.summaryNodes.add(node.id);
      out.intervals.add(node.interval);
      for (const member of node.members) out.graphNodes.add(member);
      return out;
    }
    case "summary-edge": {
      const source = summary.nodes.find((n) => n.id === selection.source);
      const target = summary.nodes.find((n) => n.id === selection.target);
      const edge = summary.edges.find(
        (e) =>
          (e.source === selection.source && e.target === selection.target) ||
          (e.source === selection.target && e.target === selection.source),
      );
      if (!source || !target || !edge) return out;
      out.summaryNodes.add(source.id).add(target.id);
      out.intervals.add(source.interval).add(target.interval);
      const inter = new Set(edge.intersection);
      const parts: EdgeParts = {
        sourceOnly: new Set(source.members.filter((m) => !inter.has(m))),
        targetOnly: new Set(target.members.filter((m) => !inter.has(m))),
        intersection: inter,
      };
      out.edgeParts = parts;
      for (const m of source.members) out.graphNodes.add(m);
      for (const m of target.members) out.graphNodes.add(m);
      return out;
    }
  }
}

/** True when the selection still resolves against the given summary;
 * recomputes drop stale selections instead of guessing. */
export function selectionIsLive(summary: SummaryJson, selection: Selection): boolean {
  switch (selection.kind) {
    case "none":
      return true;
    case "cover-element":
      return summary.nodes.some((n) => n.interval === selection.intervalId);
    case "summary-node":
      return summary.nodes.some((n) => n.id === selection.nodeId);
    case "summary-edge":
      return summary.edges.some(
        (e) =>
          (e.source === selection.source && e.target === selection.target) ||
          (e.source === selection.target && e.target === selection.source),
      );
  }
}
