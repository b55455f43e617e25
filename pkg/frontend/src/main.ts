/** Explorer bootstrap: toolbar, the two linked force views, and the cover
 * designer, wired through ExplorerState against the HTTP service.
 *
 * Service base URL: ?service=… query parameter, default same origin, and
 * http://127.0.0.1:8080 when opened from a file.
 */

import { ServiceClient } from "./api.js";
import { coverageGaps } from "./coverEditor.js";
import { CoverPanel, GraphView, SummaryView } from "./render.js";
import { decodeState, encodeState, ExplorerState } from "./state.js";
import type { CoverJson, GraphJson, LensPayload } from "./types.js";

const LENS_OPTIONS = ["l2", "l3", "agd", "density", "pagerank", "index"];

function element<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
}

function serviceBase(): string {
  const override = new URLSearchParams(window.location.search).get("service");
  if (override) return override.replace(/\/$/, "");
  if (window.location.protocol === "file:") return "http://127.0.0.1:8080";
  return "";
}

function uniformCover(n: number, epsilon: number): CoverJson {
  const intervals = [];
  for (let i = 0; i < n; i += 1) {
    intervals.push({ id: i, lo: i / n - epsilon, hi: (i + 1) / n + epsilon });
  }
  return { provenance: "uniform", n, epsilon, intervals };
}

async function boot(): Promise<void> {
  const client = new ServiceClient(serviceBase());
  const state = new ExplorerState(client);

  const graphView = new GraphView(element<HTMLCanvasElement>("graph-canvas"));
  const summaryView = new SummaryView(element<HTMLCanvasElement>("summary-canvas"));
  const coverPanel = new CoverPanel(document.getElementById("cover-svg") as unknown as SVGSVGElement);
  const status = element<HTMLSpanElement>("status");
  const lensSelect = element<HTMLSelectElement>("lens-select");
  const nInput = element<HTMLInputElement>("n-input");
  const epsInput = element<HTMLInputElement>("eps-input");
  const fileInput = element<HTMLInputElement>("file-input");

  for (const kind of LENS_OPTIONS) {
    const option = document.createElement("option");
    option.value = kind;
    option.textContent = kind;
    lensSelect.appendChild(option);
  }

  let graph: GraphJson | null = null;
  let lensPayload: LensPayload | null = null;
  const lensByNode = new Map<string, number>();

  async function refreshLens(): Promise<void> {
    if (!state.graphId) return;
    status.textContent = "computing lens…";
    lensPayload = await client.getLens(state.graphId, state.lens.kind, state.lens.params, () => {
      status.textContent = "lens queued on the service…";
    });
    lensByNode.clear();
    for (const v of lensPayload.values) lensByNode.set(v.node, v.normalized);
    status.textContent = lensPayload.constant ? "warning: constant lens (all nodes at 0.5)" : "";
  }

  state.onChange((snap) => {
    if (graph && lensPayload) {
      graphView.draw(graph, lensByNode, lensPayload.kind, snap.highlights);
    }
    if (snap.summary && lensPayload) {
      summaryView.draw(snap.summary, lensPayload.kind, snap.highlights);
    }
    if (snap.cover) {
      coverPanel.update(snap.cover, lensPayload?.histogram ?? null, lensPayload?.kind ?? "index", snap.highlights.intervals);
      const gaps = coverageGaps(snap.cover.intervals);
      if (gaps.length) status.textContent = `cover gaps: ${gaps.map(([a, b]) => `(${a.toFixed(2)}, ${b.toFixed(2)})`).join(" ")}`;
    }
    if (snap.busy) status.textContent = "recomputing summary…";
    if (snap.graphId && snap.cover) {
      const query = encodeState(snap.graphId, snap.lens, snap.cover);
      window.history.replaceState(null, "", `${window.location.pathname}?${query}`);
    }
  });

  coverPanel.onEdit = (edit) => state.applyIntervalEdit(edit);
  coverPanel.onSelect = (intervalId) => state.select({ kind: "cover-element", intervalId });

  element<HTMLCanvasElement>("summary-canvas").addEventListener("click", (event) => {
    const rect = (event.target as HTMLCanvasElement).getBoundingClientRect();
    const hit = summaryView.pick(event.clientX - rect.left, event.clientY - rect.top);
    if (hit.node !== undefined) state.select({ kind: "summary-node", nodeId: hit.node });
    else if (hit.edge) state.select({ kind: "summary-edge", ...hit.edge });
    else state.select({ kind: "none" });
  });

  async function loadGraph(body: string): Promise<void> {
    status.textContent = "uploading…";
    const uploaded = await client.uploadGraph(body);
    state.setGraph(uploaded.id);
    graph = await client.getLayout(uploaded.id, 0, 150);
    await refreshLens();
    state.setCover(uniformCover(Number(nInput.value), Number(epsInput.value)));
    state.flush();
  }

  fileInput.addEventListener("change", async () => {
    const file = fileInput.files?.[0];
    if (file) await loadGraph(await file.text());
  });

  lensSelect.addEventListener("change", async () => {
    state.lens = { kind: lensSelect.value, params: {} };
    await refreshLens();
    state.scheduleRecompute();
    state.flush();
  });

  const rebuildCover = () => {
    state.setCover(uniformCover(Number(nInput.value), Number(epsInput.value)));
  };
  nInput.addEventListener("change", rebuildCover);
  epsInput.addEventListener("change", rebuildCover);

  const saved = decodeState(window.location.search);
  if (saved) {
    try {
      state.graphId = saved.graphId;
      state.lens = saved.lens;
      graph = await client.getLayout(saved.graphId, 0, 150);
      lensSelect.value = saved.lens.kind;
      await refreshLens();
      state.setCover(saved.cover);
      state.flush();
    } catch {
      status.textContent = "saved view no longer resolves; upload a graph";
    }
  }
}

void boot();
