/**
 * Board view model and renderer.
 *
 * Each network in the puzzle becomes its own section: an SVG with one
 * globe per definition slot (fill color by part of speech), typed edges
 * between them, and a bank of draggable term chips below.  Globe
 * positions come from the seeded force layout, so a given puzzle always
 * draws the same board.
 */

import { EDGE_COLOR, EDGE_READING, POS_FILL, RELATION_KINDS, posColor } from "./colors.js";
import { layoutNetwork } from "./layout.js";
import { deriveSeed } from "./rng.js";
import type { EdgeDoc, PlayerView, Pos, ScoreReportDoc, SessionStatus } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const GLOBE_RADIUS = 30;

export interface BoardNode {
  slotId: string;
  pos: Pos;
  gloss: string;
  examples: string[];
  placed: string | null;
  x: number;
  y: number;
}

export interface BoardNetworkVM {
  networkId: string;
  nodes: BoardNode[];
  edges: EdgeDoc[];
  bank: string[];
  width: number;
  height: number;
}

export interface BoardViewModel {
  sessionId: string;
  player: string;
  level: number;
  seed: string;
  status: SessionStatus;
  networks: BoardNetworkVM[];
  emptySlotCount: number;
  totalSlotCount: number;
}

export interface BoardHandlers {
  onDrop(slotId: string, term: string): void;
  onUnplace(slotId: string): void;
}

function canvasSize(slotCount: number): { width: number; height: number } {
  return {
    width: Math.min(380 + 46 * slotCount, 900),
    height: Math.min(300 + 26 * slotCount, 620),
  };
}

export function buildBoardViewModel(view: PlayerView): BoardViewModel {
  const seed = BigInt(view.puzzle.seed);
  const networks: BoardNetworkVM[] = view.puzzle.networks.map((network, i) => {
    const { width, height } = canvasSize(network.slots.length);
    const points = layoutNetwork(
      network.slots.map((s) => s.slot_id),
      network.edges,
      deriveSeed(seed, BigInt(i)),
      width,
      height,
    );
    const placedTerms = new Set(
      network.slots
        .map((s) => view.placements[s.slot_id])
        .filter((t): t is string => t !== undefined),
    );
    return {
      networkId: network.network_id,
      nodes: network.slots.map((slot) => ({
        slotId: slot.slot_id,
        pos: slot.pos,
        gloss: slot.gloss,
        examples: slot.examples,
        placed: view.placements[slot.slot_id] ?? null,
        x: points.get(slot.slot_id)!.x,
        y: points.get(slot.slot_id)!.y,
      })),
      edges: network.edges,
      bank: (view.puzzle.banks[network.network_id] ?? []).filter((t) => !placedTerms.has(t)),
      width,
      height,
    };
  });
  const totalSlotCount = networks.reduce((sum, n) => sum + n.nodes.length, 0);
  const placedCount = Object.keys(view.placements).length;
  return {
    sessionId: view.session_id,
    player: view.player,
    level: view.level,
    seed: view.puzzle.seed,
    status: view.status,
    networks,
    emptySlotCount: totalSlotCount - placedCount,
    totalSlotCount,
  };
}

// The chip being dragged right now; drop targets read it because
// dataTransfer contents are not readable during dragover.
let currentDragTerm: string | null = null;

function svgEl<K extends keyof SVGElementTagNameMap>(tag: K): SVGElementTagNameMap[K] {
  return document.createElementNS(SVG_NS, tag);
}

function renderDefs(): SVGSVGElement {
  const svg = svgEl("svg");
  svg.setAttribute("class", "globe-defs");
  svg.setAttribute("width", "0");
  svg.setAttribute("height", "0");
  svg.setAttribute("aria-hidden", "true");
  const defs = svgEl("defs");
  for (const [name, fill] of Object.entries(POS_FILL)) {
    const grad = svgEl("radialGradient");
    grad.setAttribute("id", `globe-${name}`);
    grad.setAttribute("cx", "0.35");
    grad.setAttribute("cy", "0.3");
    grad.setAttribute("r", "0.9");
    const hi = svgEl("stop");
    hi.setAttribute("offset", "0%");
    hi.setAttribute("stop-color", "#ffffff");
    hi.setAttribute("stop-opacity", "0.55");
    const lo = svgEl("stop");
    lo.setAttribute("offset", "100%");
    lo.setAttribute("stop-color", fill);
    grad.append(hi, lo);
    defs.append(grad);
  }
  svg.append(defs);
  return svg;
}

function renderLegend(): HTMLElement {
  const legend = document.createElement("div");
  legend.className = "legend";
  const title = document.createElement("span");
  title.className = "legend-title";
  title.textContent = "link colors";
  legend.append(title);
  for (const kind of RELATION_KINDS) {
    const entry = document.createElement("span");
    entry.className = "legend-entry";
    entry.setAttribute("data-kind", kind);
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.background = EDGE_COLOR[kind];
    const label = document.createElement("em");
    label.textContent = EDGE_READING[kind];
    entry.append(swatch, `${kind.replace("_", " ")} `, label);
    legend.append(entry);
  }
  return legend;
}

function renderNetwork(
  network: BoardNetworkVM,
  handlers: BoardHandlers,
  marks: Map<string, boolean> | null,
): HTMLElement {
  const section = document.createElement("section");
  section.className = "network";
  section.setAttribute("data-network-id", network.networkId);

  const svg = svgEl("svg");
  svg.setAttribute("width", String(network.width));
  svg.setAttribute("height", String(network.height));
  svg.setAttribute("viewBox", `0 0 ${network.width} ${network.height}`);
  svg.setAttribute("class", "network-canvas");

  const byId = new Map(network.nodes.map((node) => [node.slotId, node]));
  const edgeGroup = svgEl("g");
  edgeGroup.setAttribute("class", "edges");
  for (const edge of network.edges) {
    const a = byId.get(edge.source);
    const b = byId.get(edge.target);
    if (!a || !b) continue;
    const line = svgEl("line");
    line.setAttribute("class", "edge");
    line.setAttribute("data-kind", edge.kind);
    line.setAttribute("x1", String(a.x));
    line.setAttribute("y1", String(a.y));
    line.setAttribute("x2", String(b.x));
    line.setAttribute("y2", String(b.y));
    line.setAttribute("stroke", EDGE_COLOR[edge.kind]);
    line.setAttribute("stroke-width", "3");
    const title = svgEl("title");
    title.textContent = EDGE_READING[edge.kind];
    line.append(title);
    edgeGroup.append(line);
  }
  svg.append(edgeGroup);

  const slotGroup = svgEl("g");
  slotGroup.setAttribute("class", "slots");
  for (const node of network.nodes) {
    slotGroup.append(renderSlot(node, handlers, marks));
  }
  svg.append(slotGroup);
  section.append(svg);

  const bank = document.createElement("div");
  bank.className = "bank";
  for (const term of network.bank) {
    const chip = document.createElement("button");
    chip.type = "button";
    chip.className = "chip";
    chip.draggable = true;
    chip.setAttribute("data-term", term);
    chip.textContent = term;
    chip.addEventListener("dragstart", (event) => {
      currentDragTerm = term;
      chip.classList.add("dragging");
      (event as DragEvent).dataTransfer?.setData("text/plain", term);
    });
    chip.addEventListener("dragend", () => {
      currentDragTerm = null;
      chip.classList.remove("dragging");
    });
    bank.append(chip);
  }
  if (network.bank.length === 0) {
    const note = document.createElement("span");
    note.className = "bank-empty";
    note.textContent = "all terms placed";
    bank.append(note);
  }
  section.append(bank);
  return section;
}

function renderSlot(
  node: BoardNode,
  handlers: BoardHandlers,
  marks: Map<string, boolean> | null,
): SVGGElement {
  const g = svgEl("g");
  let cls = "slot";
  if (node.placed !== null) cls += " filled";
  const mark = marks?.get(node.slotId);
  if (mark !== undefined) cls += mark ? " correct" : " incorrect";
  g.setAttribute("class", cls);
  g.setAttribute("data-slot-id", node.slotId);
  g.setAttribute("data-pos-color", posColor(node.pos));

  const hover = svgEl("title");
  hover.textContent =
    node.examples.length > 0 ? node.examples.join("\n") : "no usage examples";
  g.append(hover);

  const globe = svgEl("circle");
  globe.setAttribute("class", "globe");
  globe.setAttribute("cx", String(node.x));
  globe.setAttribute("cy", String(node.y));
  globe.setAttribute("r", String(GLOBE_RADIUS));
  globe.setAttribute("fill", `url(#globe-${posColor(node.pos)})`);
  globe.setAttribute("stroke", POS_FILL[posColor(node.pos)]);
  globe.setAttribute("stroke-width", "2");
  g.append(globe);

  if (node.placed !== null) {
    const term = svgEl("text");
    term.setAttribute("class", "docked-term");
    term.setAttribute("x", String(node.x));
    term.setAttribute("y", String(node.y + 4));
    term.setAttribute("text-anchor", "middle");
    term.textContent = node.placed;
    term.addEventListener("click", () => handlers.onUnplace(node.slotId));
    g.append(term);
  }

  if (mark !== undefined) {
    const glyph = svgEl("text");
    glyph.setAttribute("class", "mark");
    glyph.setAttribute("x", String(node.x + GLOBE_RADIUS - 6));
    glyph.setAttribute("y", String(node.y - GLOBE_RADIUS + 8));
    glyph.textContent = mark ? "✓" : "✗";
    g.append(glyph);
  }

  const glossBox = svgEl("foreignObject");
  glossBox.setAttribute("class", "gloss-box");
  glossBox.setAttribute("x", String(node.x - 80));
  glossBox.setAttribute("y", String(node.y + GLOBE_RADIUS + 4));
  glossBox.setAttribute("width", "160");
  glossBox.setAttribute("height", "64");
  const gloss = document.createElement("div");
  gloss.className = "gloss";
  gloss.textContent = node.gloss;
  glossBox.append(gloss);
  g.append(glossBox);

  g.addEventListener("dragover", (event) => {
    if (currentDragTerm !== null) {
      event.preventDefault();
      g.classList.add("drop-ready");
    }
  });
  g.addEventListener("dragleave", () => g.classList.remove("drop-ready"));
  g.addEventListener("drop", (event) => {
    event.preventDefault();
    g.classList.remove("drop-ready");
    const term =
      currentDragTerm ?? (event as DragEvent).dataTransfer?.getData("text/plain") ?? null;
    currentDragTerm = null;
    if (term !== null && term !== "") handlers.onDrop(node.slotId, term);
  });
  return g;
}

export function renderBoard(
  container: HTMLElement,
  vm: BoardViewModel,
  handlers: BoardHandlers,
  report: ScoreReportDoc | null = null,
): void {
  container.textContent = "";
  container.setAttribute("data-level", String(vm.level));
  container.setAttribute("data-seed", vm.seed);
  container.setAttribute("data-session-id", vm.sessionId);

  container.append(renderDefs(), renderLegend());

  const marks = report
    ? new Map(report.verdicts.map((v) => [v.slot_id, v.correct]))
    : null;
  const networks = document.createElement("div");
  networks.className = `networks level-${vm.level}`;
  for (const network of vm.networks) {
    networks.append(renderNetwork(network, handlers, marks));
  }
  container.append(networks);
}
