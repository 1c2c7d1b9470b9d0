// Mind-map pane: the API's display graph, verbatim, plus level tabs
// that re-fetch through /zoom. Layout is local and seeded.

import { ApiClient } from "../api.js";
import { forceLayout } from "../layout.js";
import { Store } from "../state.js";
import type { MindMapJson, ZoomTriplesJson, ZoomUnitsJson } from "../types.js";
import { ZOOM_LEVELS as LEVELS } from "../types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export class MindMapPane {
  private gupri: string | null = null;

  constructor(
    private el: HTMLElement,
    private api: ApiClient,
    private store: Store,
    private onSelectResource: (resource: string) => void,
    private onSelectUnit: (gupri: string) => void,
  ) {
    this.el.classList.add("pane", "pane-mindmap");
    this.el.innerHTML = `
      <header>
        <h2>Mind-map</h2>
        <nav class="level-tabs"></nav>
      </header>
      <div class="map-body"><p class="placeholder">Select a unit.</p></div>
    `;
    const tabs = this.el.querySelector(".level-tabs")!;
    for (const level of LEVELS) {
      const tab = document.createElement("button");
      tab.type = "button";
      tab.className = "level-tab";
      tab.dataset.level = level;
      tab.textContent = level;
      tab.addEventListener("click", () => {
        this.store.update({ level });
        void this.refresh();
      });
      tabs.appendChild(tab);
    }
  }

  current(): string | null {
    return this.gupri;
  }

  async load(gupri: string): Promise<void> {
    this.gupri = gupri;
    await this.refresh();
  }

  async refresh(): Promise<void> {
    if (!this.gupri) return;
    const level = this.store.get().level;
    for (const tab of this.el.querySelectorAll<HTMLButtonElement>(".level-tab")) {
      tab.classList.toggle("active", tab.dataset.level === level);
    }
    const body = this.el.querySelector(".map-body")!;
    body.textContent = "";
    if (level === "statements") {
      try {
        const graph = await this.api.mindmap(this.gupri);
        body.appendChild(this.renderGraph(graph));
        return;
      } catch {
        // not a schema-backed statement unit: fall through to zoom listing
      }
    }
    const zoomed = await this.api.zoom(this.gupri, level);
    if ("triples" in zoomed) {
      body.appendChild(this.renderTriples(zoomed));
    } else {
      body.appendChild(await this.renderUnitChips(zoomed));
    }
  }

  private renderGraph(graph: MindMapJson): SVGSVGElement {
    const width = 640;
    const height = 420;
    const positions = forceLayout(graph, width, height, 7);
    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
    svg.classList.add("mindmap-svg");

    for (const edge of graph.edges) {
      const from = positions.get(edge.from)!;
      const to = positions.get(edge.to)!;
      const line = document.createElementNS(SVG_NS, "line");
      line.setAttribute("x1", String(from.x));
      line.setAttribute("y1", String(from.y));
      line.setAttribute("x2", String(to.x));
      line.setAttribute("y2", String(to.y));
      line.classList.add("map-edge");
      svg.appendChild(line);
      const text = document.createElementNS(SVG_NS, "text");
      text.setAttribute("x", String((from.x + to.x) / 2));
      text.setAttribute("y", String((from.y + to.y) / 2 - 4));
      text.classList.add("edge-label");
      text.textContent = edge.label;
      svg.appendChild(text);
    }
    for (const node of graph.nodes) {
      const p = positions.get(node.id)!;
      const group = document.createElementNS(SVG_NS, "g");
      group.classList.add("map-node");
      if (node.resource) {
        group.classList.add("clickable");
        group.addEventListener("click", () => this.onSelectResource(node.resource!));
      }
      group.setAttribute("data-resource", node.resource ?? "");
      const circle = document.createElementNS(SVG_NS, "ellipse");
      circle.setAttribute("cx", String(p.x));
      circle.setAttribute("cy", String(p.y));
      circle.setAttribute("rx", "56");
      circle.setAttribute("ry", "22");
      group.appendChild(circle);
      const text = document.createElementNS(SVG_NS, "text");
      text.setAttribute("x", String(p.x));
      text.setAttribute("y", String(p.y + 4));
      text.setAttribute("text-anchor", "middle");
      text.textContent = node.label;
      group.appendChild(text);
      svg.appendChild(group);
    }
    return svg;
  }

  private renderTriples(zoomed: ZoomTriplesJson): HTMLElement {
    const table = document.createElement("table");
    table.className = "triples-table";
    const head = document.createElement("tr");
    for (const title of ["subject", "predicate", "object"]) {
      const th = document.createElement("th");
      th.textContent = title;
      head.appendChild(th);
    }
    table.appendChild(head);
    for (const triple of zoomed.triples) {
      const tr = document.createElement("tr");
      for (const value of [
        triple.subject,
        triple.predicate,
        triple.object.resource ?? triple.object.literal ?? "",
      ]) {
        const td = document.createElement("td");
        td.textContent = value;
        tr.appendChild(td);
      }
      table.appendChild(tr);
    }
    return table;
  }

  private async renderUnitChips(zoomed: ZoomUnitsJson): Promise<HTMLElement> {
    const list = document.createElement("div");
    list.className = "unit-chips";
    for (const gupri of zoomed.units) {
      const chip = document.createElement("button");
      chip.type = "button";
      chip.className = "unit-chip";
      chip.dataset.gupri = gupri;
      try {
        const view = await this.api.unit(gupri);
        chip.textContent = view.label;
      } catch {
        chip.textContent = gupri;
      }
      chip.addEventListener("click", () => this.onSelectUnit(gupri));
      list.appendChild(chip);
    }
    if (!zoomed.units.length) {
      const empty = document.createElement("p");
      empty.className = "placeholder";
      empty.textContent = `nothing at the ${zoomed.level} level`;
      list.appendChild(empty);
    }
    return list;
  }
}
