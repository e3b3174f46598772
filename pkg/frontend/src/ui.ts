// DOM layer: renders the picker, the query form, result tables, the
// neighbor graph and the session log. All numbers shown here were
// received from the service and are traceable through session.log.

import {
  ApiClient,
  MatrixInfo,
  NeighborsResult,
  SimilarityResult,
  SkippedWord,
  VectorsResult,
} from "./api.js";
import { downloadResult } from "./exportText.js";
import { ForceLayout } from "./force.js";
import {
  NeighborGraph,
  buildNeighborGraph,
  mergeExpansion,
} from "./graphModel.js";
import { QueryOutcome, QuerySession, Task, parseWordList } from "./session.js";

const SVG_NS = "http://www.w3.org/2000/svg";

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

export class ExplorerApp {
  private session: QuerySession;
  private catalog: MatrixInfo[] = [];
  private graph: NeighborGraph | null = null;
  private layout: ForceLayout | null = null;
  private animating = false;

  private root: HTMLElement;
  private pickerBox!: HTMLElement;
  private statusBox!: HTMLElement;
  private resultsBox!: HTMLElement;
  private graphBox!: HTMLElement;
  private logBox!: HTMLElement;
  private wordsArea!: HTMLTextAreaElement;
  private targetsArea!: HTMLTextAreaElement;
  private targetsLabel!: HTMLElement;
  private kInput!: HTMLInputElement;
  private runButton!: HTMLButtonElement;

  constructor(
    private readonly api: ApiClient,
    root: HTMLElement,
  ) {
    this.session = new QuerySession(api);
    this.root = root;
  }

  async start(): Promise<void> {
    this.root.replaceChildren();
    const layout = el("div", "layout");
    const side = el("div", "sidebar");
    const mainCol = el("div", "main");
    layout.append(side, mainCol);
    this.root.append(layout);

    side.append(el("h2", undefined, "Matrices"));
    this.pickerBox = el("div", "picker");
    side.append(this.pickerBox);
    side.append(this.buildForm());

    this.statusBox = el("div", "status");
    this.resultsBox = el("div", "results");
    this.graphBox = el("div", "graph");
    this.logBox = el("div", "log");
    const logTitle = el("h2", undefined, "Session log");
    mainCol.append(
      this.statusBox,
      this.resultsBox,
      this.graphBox,
      logTitle,
      this.logBox,
    );

    await this.loadCatalog();
  }

  private async loadCatalog(): Promise<void> {
    this.pickerBox.replaceChildren(el("p", "muted", "loading catalog..."));
    try {
      const { matrices } = await this.api.listMatrices();
      this.catalog = matrices;
      this.renderPicker();
    } catch (err) {
      const banner = el("div", "error");
      banner.append(
        el("span", undefined, `catalog fetch failed: ${String(err)} `),
      );
      const retry = el("button", undefined, "retry");
      retry.onclick = () => void this.loadCatalog();
      banner.append(retry);
      this.pickerBox.replaceChildren(banner);
    }
  }

  private renderPicker(): void {
    this.pickerBox.replaceChildren();
    if (this.catalog.length === 0) {
      this.pickerBox.append(
        el("p", "muted", "the catalog is empty; build matrices first"),
      );
      return;
    }
    for (const m of this.catalog) {
      const label = el("label", "matrix-option");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.value = m.name;
      box.checked = this.session.state.matrices.includes(m.name);
      box.onchange = () => {
        const selected = new Set(this.session.state.matrices);
        if (box.checked) selected.add(m.name);
        else selected.delete(m.name);
        // selection order follows the catalog listing
        this.session.state.matrices = this.catalog
          .map((mm) => mm.name)
          .filter((name) => selected.has(name));
      };
      const details = [
        `${m.rows} rows x ${m.cols} cols`,
        `window ${m.window}`,
        m.weighting,
        m.reducedRank ? `reduced rank ${m.reducedRank}` : m.kind,
      ];
      label.title = details.join(" | ");
      label.append(box, el("span", undefined, ` ${m.name}`));
      this.pickerBox.append(label);
    }
  }

  private buildForm(): HTMLElement {
    const form = el("div", "form");
    form.append(el("h2", undefined, "Query"));

    const tabs = el("div", "tabs");
    for (const task of ["neighbors", "similarity", "vectors"] as Task[]) {
      const b = el("button", "tab", task);
      b.dataset.task = task;
      b.onclick = () => {
        this.session.setTask(task);
        this.refreshTaskControls(tabs);
      };
      tabs.append(b);
    }
    form.append(tabs);

    form.append(el("h3", undefined, "Word list"));
    this.wordsArea = document.createElement("textarea");
    this.wordsArea.rows = 4;
    this.wordsArea.placeholder = "one word per line";
    form.append(this.wordsArea);

    this.targetsLabel = el("h3", undefined, "Target words");
    this.targetsArea = document.createElement("textarea");
    this.targetsArea.rows = 3;
    this.targetsArea.placeholder = "targets for the similarity task";
    form.append(this.targetsLabel, this.targetsArea);

    const kRow = el("div", "krow");
    kRow.append(el("span", undefined, "k "));
    this.kInput = document.createElement("input");
    this.kInput.type = "number";
    this.kInput.value = "10";
    this.kInput.min = "1";
    kRow.append(this.kInput);
    const measure = document.createElement("select");
    for (const name of ["cosine", "dot"]) {
      const opt = document.createElement("option");
      opt.value = name;
      opt.textContent = name;
      measure.append(opt);
    }
    measure.onchange = () => {
      this.session.state.measure = measure.value;
    };
    kRow.append(el("span", undefined, " measure "), measure);
    form.append(kRow);

    this.runButton = el("button", "run", "Run query");
    this.runButton.onclick = () => void this.runQuery();
    form.append(this.runButton);
    this.refreshTaskControls(tabs);
    return form;
  }

  private refreshTaskControls(tabs: HTMLElement): void {
    const task = this.session.state.task;
    for (const child of Array.from(tabs.children)) {
      const b = child as HTMLButtonElement;
      b.classList.toggle("active", b.dataset.task === task);
    }
    const showTargets = task === "similarity";
    this.targetsLabel.style.display = showTargets ? "" : "none";
    this.targetsArea.style.display = showTargets ? "" : "none";
    this.kInput.disabled = task !== "neighbors";
  }

  private setStatus(text: string, kind: "info" | "error" = "info"): void {
    this.statusBox.replaceChildren(
      el("div", kind === "error" ? "error" : "info", text),
    );
  }

  private async runQuery(): Promise<void> {
    this.session.state.words = parseWordList(this.wordsArea.value);
    this.session.state.targets = parseWordList(this.targetsArea.value);
    this.session.state.k = Number(this.kInput.value);
    this.runButton.disabled = true;
    this.setStatus(this.session.busy ? "replacing in-flight query..." : "running...");
    try {
      const outcome = await this.session.run();
      if ("cancelled" in outcome) {
        return; // a newer submission took over
      }
      this.renderOutcome(outcome);
    } catch (err) {
      this.setStatus(String(err), "error");
    } finally {
      this.runButton.disabled = false;
      this.renderLog();
    }
  }

  private renderSkips(skipped: SkippedWord[]): void {
    if (skipped.length === 0) {
      this.setStatus("done");
      return;
    }
    const items = skipped
      .map((s) => `${s.word} (not in ${s.matrix})`)
      .join(", ");
    this.setStatus(`out of vocabulary, skipped: ${items}`);
  }

  private renderOutcome(outcome: QueryOutcome): void {
    if ("cancelled" in outcome) return;
    this.renderSkips(outcome.skipped);
    this.resultsBox.replaceChildren();
    this.graphBox.replaceChildren();
    if (outcome.task === "neighbors") {
      this.renderNeighborTables(outcome.results);
      this.graph = buildNeighborGraph(outcome.results);
      this.renderGraph();
    } else if (outcome.task === "similarity") {
      this.renderSimilarityTables(outcome.results);
    } else {
      this.renderVectorTables(outcome.results);
    }
  }

  private resultHeader(word: string, task: Task, result: { text: string }) {
    const head = el("div", "result-head");
    head.append(el("h3", undefined, word));
    const dl = el("button", undefined, "download");
    dl.onclick = () =>
      downloadResult({ word, text: result.text }, task);
    head.append(dl);
    return head;
  }

  private renderNeighborTables(results: NeighborsResult[]): void {
    for (const r of results) {
      const card = el("div", "card");
      card.append(this.resultHeader(r.word, "neighbors", r));
      const row = el("div", "columns");
      for (const [matrix, ranked] of Object.entries(r.neighbors)) {
        const table = el("table");
        const caption = table.createCaption();
        caption.textContent = matrix;
        for (const [neighbor, score] of ranked) {
          const tr = table.insertRow();
          tr.insertCell().textContent = neighbor;
          tr.insertCell().textContent = score.toFixed(6);
        }
        row.append(table);
      }
      card.append(row);
      this.resultsBox.append(card);
    }
  }

  private renderSimilarityTables(results: SimilarityResult[]): void {
    for (const r of results) {
      const card = el("div", "card");
      card.append(this.resultHeader(r.word, "similarity", r));
      const table = el("table");
      const head = table.insertRow();
      head.insertCell().textContent = "matrix";
      for (const t of r.targets) head.insertCell().textContent = t;
      for (const [matrix, values] of Object.entries(r.similarities)) {
        const tr = table.insertRow();
        tr.insertCell().textContent = matrix;
        for (const v of values) tr.insertCell().textContent = v.toFixed(6);
      }
      card.append(table);
      this.resultsBox.append(card);
    }
  }

  private renderVectorTables(results: VectorsResult[]): void {
    for (const r of results) {
      const card = el("div", "card");
      card.append(this.resultHeader(r.word, "vectors", r));
      for (const [matrix, values] of Object.entries(r.vectors)) {
        const preview = values
          .slice(0, 12)
          .map((v) => v.toFixed(3))
          .join("  ");
        const more = values.length > 12 ? `  ... (${values.length} dims)` : "";
        card.append(el("p", "vector", `${matrix}: ${preview}${more}`));
      }
      this.resultsBox.append(card);
    }
  }

  private renderGraph(): void {
    if (!this.graph) return;
    this.graphBox.replaceChildren();
    const head = el("div", "result-head");
    head.append(el("h3", undefined, "Neighbor graph"));
    const expand = el("button", undefined, "expand all (top 5)");
    expand.onclick = () => void this.expandAll();
    head.append(expand);
    this.graphBox.append(head);
    if (this.graph.truncated) {
      this.graphBox.append(
        el("div", "error", "graph truncated at 500 nodes"),
      );
    }
    const width = 860;
    const height = 520;
    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("width", String(width));
    svg.setAttribute("height", String(height));
    this.graphBox.append(svg);
    this.layout = new ForceLayout(width, height);
    this.layout.sync(this.graph);
    this.drawGraph(svg);
    if (!this.animating) {
      this.animating = true;
      const tick = () => {
        if (!this.layout) {
          this.animating = false;
          return;
        }
        this.layout.step();
        this.drawGraph(svg);
        if (this.graphBox.isConnected) requestAnimationFrame(tick);
        else this.animating = false;
      };
      requestAnimationFrame(tick);
    }
  }

  private drawGraph(svg: SVGSVGElement): void {
    if (!this.graph || !this.layout) return;
    svg.replaceChildren();
    for (const e of this.graph.edges.values()) {
      const a = this.layout.position(e.a);
      const b = this.layout.position(e.b);
      if (!a || !b) continue;
      const line = document.createElementNS(SVG_NS, "line");
      line.setAttribute("x1", a.x.toFixed(1));
      line.setAttribute("y1", a.y.toFixed(1));
      line.setAttribute("x2", b.x.toFixed(1));
      line.setAttribute("y2", b.y.toFixed(1));
      line.setAttribute("stroke", "#b8c4d0");
      line.setAttribute(
        "stroke-width",
        String(0.5 + 2.5 * Math.max(0, Math.min(1, e.weight))),
      );
      svg.append(line);
    }
    for (const node of this.graph.nodes.values()) {
      const p = this.layout.position(node.id);
      if (!p) continue;
      const g = document.createElementNS(SVG_NS, "g");
      g.setAttribute("class", "node");
      const circle = document.createElementNS(SVG_NS, "circle");
      circle.setAttribute("cx", p.x.toFixed(1));
      circle.setAttribute("cy", p.y.toFixed(1));
      circle.setAttribute("r", node.isQuery ? "7" : "5");
      circle.setAttribute("fill", node.isQuery ? "#c0392b" : "#2980b9");
      circle.addEventListener("click", () => void this.onNodeClick(node.id));
      const text = document.createElementNS(SVG_NS, "text");
      text.setAttribute("x", (p.x + 8).toFixed(1));
      text.setAttribute("y", (p.y + 3).toFixed(1));
      text.textContent = node.id;
      g.append(circle, text);
      svg.append(g);
    }
  }

  /** Clicking a node issues a fresh neighbors query for it and folds the
   *  answer into the view: the explore-refine loop. */
  async onNodeClick(word: string): Promise<void> {
    if (!this.graph) return;
    this.setStatus(`expanding ${word}...`);
    const r = await this.session.expandNode(word);
    if ("cancelled" in r) return;
    for (const result of r.results) {
      this.graph = mergeExpansion(this.graph, result);
    }
    this.renderSkips(r.skipped);
    this.renderGraph();
    this.renderLog();
  }

  private async expandAll(): Promise<void> {
    if (!this.graph) return;
    const plain = Array.from(this.graph.nodes.values())
      .filter((n) => !n.isQuery)
      .map((n) => n.id);
    const savedK = this.session.state.k;
    this.session.state.k = 5;
    try {
      for (const word of plain) {
        const r = await this.session.expandNode(word);
        if (!("cancelled" in r)) {
          for (const result of r.results) {
            this.graph = mergeExpansion(this.graph, result);
          }
        }
        if (this.graph.truncated) break;
      }
    } finally {
      this.session.state.k = savedK;
    }
    this.renderGraph();
    this.renderLog();
  }

  private renderLog(): void {
    this.logBox.replaceChildren();
    for (const entry of [...this.session.log].reverse().slice(0, 40)) {
      const line = el("details", "log-entry");
      const summary = el("summary");
      summary.textContent = `#${entry.seq} ${entry.at} ${entry.kind} ${
        entry.error ? `(${entry.error})` : ""
      }`;
      line.append(summary);
      line.append(el("pre", undefined, JSON.stringify(entry.request, null, 1)));
      if (entry.response !== undefined) {
        const r = el("pre", "muted");
        const body = JSON.stringify(entry.response);
        r.textContent = body.length > 600 ? body.slice(0, 600) + "..." : body;
        line.append(r);
      }
      this.logBox.append(line);
    }
  }
}
