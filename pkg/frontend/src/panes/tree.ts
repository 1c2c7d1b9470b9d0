// Navigation pane: folder-style expansion of an item group unit.

import { ApiClient } from "../api.js";
import { Store } from "../state.js";
import type { NavNodeJson, UnitClassInfo } from "../types.js";

export class NavTreePane {
  private root: NavNodeJson | null = null;
  private container: HTMLElement;
  private groupGupri: string | null = null;
  private statementLeaves = true;
  private classes: UnitClassInfo[] = [];

  constructor(
    private el: HTMLElement,
    private api: ApiClient,
    private store: Store,
    private onSelect: (gupri: string) => void,
  ) {
    this.el.classList.add("pane", "pane-tree");
    this.el.innerHTML = `
      <header>
        <h2>Navigation</h2>
        <div class="tree-controls">
          <select class="link-filter" title="filter linking statement classes">
            <option value="">all links</option>
          </select>
          <button class="collapse-all" type="button">collapse all</button>
        </div>
      </header>
      <div class="tree-body"></div>
    `;
    this.container = this.el.querySelector(".tree-body")!;
    this.el
      .querySelector<HTMLButtonElement>(".collapse-all")!
      .addEventListener("click", () => {
        this.store.update({ openNodes: new Set() });
        this.render();
      });
    this.el
      .querySelector<HTMLSelectElement>(".link-filter")!
      .addEventListener("change", (event) => {
        const value = (event.target as HTMLSelectElement).value;
        this.store.update({ linkFilter: value ? [value] : null });
        void this.refresh();
      });
  }

  async setClasses(classes: UnitClassInfo[]): Promise<void> {
    this.classes = classes.filter((c) => c.slots !== null);
    const select = this.el.querySelector<HTMLSelectElement>(".link-filter")!;
    for (const cls of this.classes) {
      const option = document.createElement("option");
      option.value = cls.iri;
      option.textContent = cls.iri.split("/").pop() ?? cls.iri;
      select.appendChild(option);
    }
  }

  async load(groupGupri: string): Promise<void> {
    this.groupGupri = groupGupri;
    await this.refresh();
  }

  async refresh(): Promise<void> {
    if (!this.groupGupri) return;
    this.root = await this.api.navtree(this.groupGupri, {
      linkFilter: this.store.get().linkFilter ?? undefined,
      statements: this.statementLeaves,
    });
    // the root group is always expanded on first load
    const open = new Set(this.store.get().openNodes);
    open.add(this.root.gupri);
    this.store.update({ openNodes: open });
    this.render();
  }

  highlight(): void {
    const selected = this.store.get().selected;
    if (selected && this.root) {
      const path = this.pathTo(this.root, selected, []);
      if (path && path.length > 1) {
        const open = new Set(this.store.get().openNodes);
        let grew = false;
        for (const ancestor of path.slice(0, -1)) {
          if (!open.has(ancestor)) {
            open.add(ancestor);
            grew = true;
          }
        }
        if (grew) {
          this.store.update({ openNodes: open });
          this.render();
          return;
        }
      }
    }
    for (const button of this.container.querySelectorAll<HTMLButtonElement>(".node-label")) {
      button.classList.toggle("selected", button.dataset.gupri === selected);
    }
  }

  /** GUPRIs from the root down to the target, when the tree contains it. */
  private pathTo(node: NavNodeJson, target: string, trail: string[]): string[] | null {
    const here = [...trail, node.gupri];
    if (node.gupri === target) return here;
    for (const child of node.children) {
      const found = this.pathTo(child, target, here);
      if (found) return found;
    }
    return null;
  }

  render(): void {
    this.container.textContent = "";
    if (!this.root) return;
    this.container.appendChild(this.renderNode(this.root, 0));
    this.highlight();
  }

  private renderNode(node: NavNodeJson, depth: number): HTMLElement {
    const open = this.store.get().openNodes.has(node.gupri) || depth === 0;
    const li = document.createElement("div");
    li.className = `nav-node kind-${node.kind}${node.revisit ? " revisit" : ""}`;
    li.dataset.gupri = node.gupri;

    const row = document.createElement("div");
    row.className = "node-row";
    row.style.paddingLeft = `${depth * 14}px`;

    if (node.children.length) {
      const toggle = document.createElement("button");
      toggle.type = "button";
      toggle.className = "toggle";
      toggle.textContent = open ? "▾" : "▸";
      toggle.addEventListener("click", () => {
        this.store.toggleNode(node.gupri);
        this.render();
      });
      row.appendChild(toggle);
    } else {
      const spacer = document.createElement("span");
      spacer.className = "toggle spacer";
      row.appendChild(spacer);
    }

    const label = document.createElement("button");
    label.type = "button";
    label.className = "node-label";
    label.dataset.gupri = node.gupri;
    label.textContent = node.revisit ? `${node.label} (revisit)` : node.label;
    label.addEventListener("click", () => this.onSelect(node.gupri));
    row.appendChild(label);
    li.appendChild(row);

    if (open && node.children.length) {
      const children = document.createElement("div");
      children.className = "node-children";
      for (const child of node.children) {
        children.appendChild(this.renderNode(child, depth + 1));
      }
      li.appendChild(children);
    }
    return li;
  }
}
