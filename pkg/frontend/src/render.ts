/** Canvas painters for the two force views and the SVG cover designer.
 *
 * Visual encodings: node fill from a per-lens sequential colormap, summary
 * node radius grows with member count, edge width with weight or
 * intersection size. Edge selection shows source-only / target-only /
 * intersection in three distinct colors.
 */

import { applyDrag, intervalMidpoint, type DragState, type IntervalEdit } from "./coverEditor.js";
import type { Highlights } from "./selection.js";
import type { CoverJson, GraphJson, HistogramJson, SummaryJson } from "./types.js";

const TINTS: Record<string, [number, number, number]> = {
  agd: [178, 24, 43],
  density: [27, 120, 55],
  laplacian_l2: [118, 42, 131],
  laplacian_l3: [118, 42, 131],
  pagerank_log: [217, 72, 1],
  index: [33, 102, 172],
};

export const SELECT_COLOR = "#2166ac";
export const EDGE_PART_COLORS = {
  sourceOnly: "#762a83", // purple
  targetOnly: "#5ab4e5", // sky blue
  intersection: "#2166ac", // blue
};

export function lensColor(kind: string, value: number): string {
  const [r, g, b] = TINTS[kind] ?? [80, 80, 80];
  const v = Math.min(Math.max(value, 0), 1);
  const mix = (c: number) => Math.round(245 + (c - 245) * v);
  return `rgb(${mix(r)},${mix(g)},${mix(b)})`;
}

interface Projected {
  x: number;
  y: number;
}

class Projector {
  private scale = 1;
  private ox = 0;
  private oy = 0;

  fit(points: Array<{ x?: number; y?: number }>, width: number, height: number, pad = 24): void {
    const xs = points.map((p) => p.x ?? 0);
    const ys = points.map((p) => p.y ?? 0);
    if (!xs.length) return;
    const lo = [Math.min(...xs), Math.min(...ys)];
    const hi = [Math.max(...xs), Math.max(...ys)];
    const span = Math.max(hi[0] - lo[0], hi[1] - lo[1], 1e-9);
    this.scale = (Math.min(width, height) - 2 * pad) / span;
    this.ox = pad - lo[0] * this.scale;
    this.oy = pad - lo[1] * this.scale;
  }

  to(p: { x?: number; y?: number }): Projected {
    return { x: (p.x ?? 0) * this.scale + this.ox, y: (p.y ?? 0) * this.scale + this.oy };
  }
}

export class GraphView {
  private readonly projector = new Projector();
  private positions = new Map<string, Projected>();

  constructor(private readonly canvas: HTMLCanvasElement) {}

  draw(graph: GraphJson, lensByNode: Map<string, number>, lensKind: string, highlights: Highlights): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const { width, height } = this.canvas;
    ctx.clearRect(0, 0, width, height);
    this.projector.fit(graph.nodes, width, height);
    this.positions.clear();
    for (const node of graph.nodes) this.positions.set(node.id, this.projector.to(node));

    ctx.strokeStyle = "#cccccc";
    for (const edge of graph.edges) {
      const a = this.positions.get(edge.source);
      const b = this.positions.get(edge.target);
      if (!a || !b) continue;
      ctx.lineWidth = 0.5 + 1.5 * (edge.weight ?? 1);
      ctx.beginPath();
      ctx.moveTo(a.x, a.y);
      ctx.lineTo(b.x, b.y);
      ctx.stroke();
    }
    const anySelection = highlights.graphNodes.size > 0;
    for (const node of graph.nodes) {
      const p = this.positions.get(node.id);
      if (!p) continue;
      let fill = lensColor(lensKind, lensByNode.get(node.id) ?? 0.5);
      let radius = 4;
      if (highlights.edgeParts) {
        if (highlights.edgeParts.intersection.has(node.id)) fill = EDGE_PART_COLORS.intersection;
        else if (highlights.edgeParts.sourceOnly.has(node.id)) fill = EDGE_PART_COLORS.sourceOnly;
        else if (highlights.edgeParts.targetOnly.has(node.id)) fill = EDGE_PART_COLORS.targetOnly;
      } else if (highlights.graphNodes.has(node.id)) {
        fill = SELECT_COLOR;
      }
      if (highlights.graphNodes.has(node.id)) radius = 5.5;
      else if (anySelection) radius = 3;
      ctx.beginPath();
      ctx.fillStyle = fill;
      ctx.globalAlpha = anySelection && !highlights.graphNodes.has(node.id) ? 0.35 : 1.0;
      ctx.arc(p.x, p.y, radius, 0, 2 * Math.PI);
      ctx.fill();
      ctx.globalAlpha = 1.0;
    }
  }
}

export class SummaryView {
  private readonly projector = new Projector();
  private hits: Array<{ id: number; x: number; y: number; r: number }> = [];
  private edgeHits: Array<{ source: number; target: number; x1: number; y1: number; x2: number; y2: number }> = [];

  constructor(private readonly canvas: HTMLCanvasElement) {}

  draw(summary: SummaryJson, lensKind: string, highlights: Highlights): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const { width, height } = this.canvas;
    ctx.clearRect(0, 0, width, height);
    this.projector.fit(summary.nodes, width, height);
    const pos = new Map<number, Projected>();
    for (const node of summary.nodes) pos.set(node.id, this.projector.to(node));
    const maxSize = Math.max(1, ...summary.nodes.map((n) => n.size));
    const maxWeight = Math.max(1, ...summary.edges.map((e) => e.weight));

    this.edgeHits = [];
    for (const edge of summary.edges) {
      const a = pos.get(edge.source);
      const b = pos.get(edge.target);
      if (!a || !b) continue;
      const selected =
        highlights.summaryNodes.has(edge.source) && highlights.summaryNodes.has(edge.target);
      ctx.strokeStyle = selected && highlights.edgeParts ? SELECT_COLOR : "#999999";
      ctx.lineWidth = 1 + 6 * (edge.weight / maxWeight);
      ctx.beginPath();
      ctx.moveTo(a.x, a.y);
      ctx.lineTo(b.x, b.y);
      ctx.stroke();
      this.edgeHits.push({ source: edge.source, target: edge.target, x1: a.x, y1: a.y, x2: b.x, y2: b.y });
    }

    this.hits = [];
    for (const node of summary.nodes) {
      const p = pos.get(node.id);
      if (!p) continue;
      const radius = 6 + 16 * (node.size / maxSize);
      ctx.beginPath();
      ctx.fillStyle = lensColor(lensKind, node.mean_lens);
      ctx.strokeStyle = highlights.summaryNodes.has(node.id) ? SELECT_COLOR : "#333333";
      ctx.lineWidth = highlights.summaryNodes.has(node.id) ? 3 : 1;
      ctx.arc(p.x, p.y, radius, 0, 2 * Math.PI);
      ctx.fill();
      ctx.stroke();
      this.hits.push({ id: node.id, x: p.x, y: p.y, r: radius });
    }
  }

  /** Topmost node under the pointer, else nearest edge within 6px. */
  pick(x: number, y: number): { node?: number; edge?: { source: number; target: number } } {
    for (let i = this.hits.length - 1; i >= 0; i -= 1) {
      const h = this.hits[i];
      if ((x - h.x) ** 2 + (y - h.y) ** 2 <= h.r ** 2) return { node: h.id };
    }
    for (const e of this.edgeHits) {
      const dx = e.x2 - e.x1;
      const dy = e.y2 - e.y1;
      const len2 = dx * dx + dy * dy;
      if (len2 === 0) continue;
      const t = Math.max(0, Math.min(1, ((x - e.x1) * dx + (y - e.y1) * dy) / len2));
      const px = e.x1 + t * dx;
      const py = e.y1 + t * dy;
      if ((x - px) ** 2 + (y - py) ** 2 <= 36) return { edge: { source: e.source, target: e.target } };
    }
    return {};
  }
}

/** Histogram + draggable cover boxes, honest SVG with pointer events. */
export class CoverPanel {
  onEdit: ((edit: IntervalEdit) => void) | null = null;
  onSelect: ((intervalId: number) => void) | null = null;

  private drag: (DragState & { pointerStart: number }) | null = null;
  private cover: CoverJson = { provenance: "uniform", intervals: [] };
  private histogram: HistogramJson | null = null;
  private lensKind = "index";
  private highlights: Set<number> = new Set();

  constructor(private readonly svg: SVGSVGElement) {
    svg.addEventListener("pointermove", (event) => this.pointerMove(event));
    svg.addEventListener("pointerup", (event) => this.pointerUp(event));
    svg.addEventListener("pointerleave", () => this.cancelDrag());
  }

  update(cover: CoverJson, histogram: HistogramJson | null, lensKind: string, highlighted: Set<number>): void {
    this.cover = cover;
    this.histogram = histogram;
    this.lensKind = lensKind;
    this.highlights = highlighted;
    this.redraw();
  }

  private geometry() {
    const width = this.svg.clientWidth || 320;
    const height = this.svg.clientHeight || 420;
    const histWidth = width * 0.55;
    const toY = (value: number) => height - 16 - value * (height - 32);
    const fromY = (y: number) => (height - 16 - y) / (height - 32);
    return { width, height, histWidth, toY, fromY };
  }

  private redraw(): void {
    const { width, histWidth, toY } = this.geometry();
    const parts: string[] = [];
    if (this.histogram) {
      const maxCount = Math.max(1, ...this.histogram.counts);
      for (let i = 0; i < this.histogram.counts.length; i += 1) {
        const y1 = toY(this.histogram.bin_edges[i + 1]);
        const y2 = toY(this.histogram.bin_edges[i]);
        const w = (histWidth - 8) * (this.histogram.counts[i] / maxCount);
        parts.push(
          `<rect x="4" y="${y1}" width="${Math.max(w, 0.5)}" height="${Math.max(y2 - y1 - 1, 1)}" fill="#b0b0b0"/>`,
        );
      }
    }
    const boxWidth = (width - histWidth - 12) / Math.max(this.cover.intervals.length, 1);
    this.cover.intervals.forEach((iv, i) => {
      const x = histWidth + 8 + i * boxWidth;
      const yTop = toY(Math.min(iv.hi, 1.35));
      const yBottom = toY(Math.max(iv.lo, -0.35));
      const fill = lensColor(this.lensKind, Math.min(Math.max(intervalMidpoint(iv), 0), 1));
      const stroke = this.highlights.has(iv.id) ? SELECT_COLOR : "#444444";
      parts.push(
        `<g class="cover-box" data-id="${iv.id}">` +
          `<rect data-role="shift" data-id="${iv.id}" x="${x}" y="${yTop}" width="${boxWidth - 6}" ` +
          `height="${Math.max(yBottom - yTop, 2)}" fill="${fill}" stroke="${stroke}" stroke-width="2" rx="3"/>` +
          `<rect data-role="hi" data-id="${iv.id}" x="${x}" y="${yTop - 3}" width="${boxWidth - 6}" height="7" fill="#00000022" cursor="ns-resize"/>` +
          `<rect data-role="lo" data-id="${iv.id}" x="${x}" y="${yBottom - 4}" width="${boxWidth - 6}" height="7" fill="#00000022" cursor="ns-resize"/>` +
          `</g>`,
      );
    });
    parts.push(`<line x1="0" y1="${toY(0)}" x2="${width}" y2="${toY(0)}" stroke="#888888" stroke-dasharray="3 3"/>`);
    parts.push(`<line x1="0" y1="${toY(1)}" x2="${width}" y2="${toY(1)}" stroke="#888888" stroke-dasharray="3 3"/>`);
    this.svg.innerHTML = parts.join("");
    for (const el of Array.from(this.svg.querySelectorAll("rect[data-role]"))) {
      el.addEventListener("pointerdown", (event) => this.pointerDown(event as PointerEvent));
    }
  }

  private pointerDown(event: PointerEvent): void {
    const target = event.target as SVGRectElement;
    const id = Number(target.dataset.id);
    const mode = target.dataset.role as DragState["mode"];
    const iv = this.cover.intervals.find((candidate) => candidate.id === id);
    if (!iv) return;
    this.drag = { id, mode, startLo: iv.lo, startHi: iv.hi, pointerStart: event.clientY };
    this.svg.setPointerCapture(event.pointerId);
    event.preventDefault();
  }

  private dragEdit(event: PointerEvent): IntervalEdit | null {
    if (!this.drag) return null;
    const { height } = this.geometry();
    const deltaLens = -(event.clientY - this.drag.pointerStart) / (height - 32);
    return applyDrag(this.drag, deltaLens);
  }

  private pointerMove(event: PointerEvent): void {
    if (!this.drag) return;
    const edit = this.dragEdit(event);
    if (!edit) return; // inverted: keep the last good geometry (snap back)
    const intervals = this.cover.intervals.map((iv) => (iv.id === edit.id ? edit : iv));
    this.cover = { ...this.cover, intervals };
    this.redraw();
  }

  private pointerUp(event: PointerEvent): void {
    if (!this.drag) return;
    const edit = this.dragEdit(event);
    const moved = Math.abs(event.clientY - this.drag.pointerStart) > 2;
    const id = this.drag.id;
    this.drag = null;
    if (!moved) {
      this.onSelect?.(id);
      return;
    }
    if (edit) this.onEdit?.(edit);
    else this.redraw(); // snapped back
  }

  private cancelDrag(): void {
    if (!this.drag) return;
    this.drag = null;
    this.redraw();
  }
}
