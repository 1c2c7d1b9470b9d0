// Wires the four panes to one shared selection over the HTTP API.

import { ApiClient, STORE_IRI } from "./api.js";
import { Store } from "./state.js";
import { ItemFormPane } from "./panes/form.js";
import { MindMapPane } from "./panes/mindmap.js";
import { NavTreePane } from "./panes/tree.js";
import { QuestionBuilderPane } from "./panes/question.js";

export class ExplorerApp {
  readonly store = new Store();
  readonly tree: NavTreePane;
  readonly form: ItemFormPane;
  readonly mindmap: MindMapPane;
  readonly question: QuestionBuilderPane;

  constructor(root: HTMLElement, private api: ApiClient) {
    root.classList.add("explorer");
    root.innerHTML = `
      <div class="column column-tree"></div>
      <div class="column column-form"></div>
      <div class="column column-map"></div>
      <div class="column column-ask"></div>
    `;
    this.tree = new NavTreePane(
      root.querySelector(".column-tree")!,
      api,
      this.store,
      (gupri) => void this.select(gupri),
    );
    this.form = new ItemFormPane(
      root.querySelector(".column-form")!,
      api,
      () => void this.refreshAfterWrite(),
    );
    this.mindmap = new MindMapPane(
      root.querySelector(".column-map")!,
      api,
      this.store,
      (resource) => void this.selectResource(resource),
      (gupri) => void this.select(gupri),
    );
    this.question = new QuestionBuilderPane(
      root.querySelector(".column-ask")!,
      api,
      (gupri) => void this.select(gupri),
    );
  }

  async init(rootGroup?: string): Promise<void> {
    const classes = await this.api.unitClasses();
    await this.tree.setClasses(classes.items);
    this.form.setClasses(classes.items);
    this.question.setClasses(classes.items);
    const candidates: string[] = [];
    if (rootGroup) {
      candidates.push(rootGroup);
    } else {
      const top = await this.api.zoom(STORE_IRI, "item-groups");
      if ("units" in top) {
        candidates.push(...top.units);
      }
    }
    for (const candidate of candidates) {
      try {
        await this.tree.load(candidate);
        return;
      } catch {
        // not a navigable group (a context or dataset unit); try the next
      }
    }
  }

  /** One selection event updates every pane (or its container). */
  async select(gupri: string): Promise<void> {
    this.store.update({ selected: gupri });
    this.tree.highlight();
    await this.form.load(gupri);
    await this.mindmap.load(gupri);
  }

  /** Mind-map nodes carry domain resources; resolve to their item unit. */
  async selectResource(resource: string): Promise<void> {
    const containing = await this.api.containing(resource);
    const items = containing["item"] ?? [];
    if (items.length) {
      await this.select(items[0]);
      return;
    }
    const statements = containing["statement"] ?? [];
    if (statements.length) {
      await this.select(statements[0]);
    }
  }

  private async refreshAfterWrite(): Promise<void> {
    await this.tree.refresh();
    const selected = this.store.get().selected;
    if (selected) {
      await this.form.load(selected);
      await this.mindmap.refresh();
    }
  }
}

export function mount(root: HTMLElement, baseUrl = ""): ExplorerApp {
  const api = new ApiClient(baseUrl);
  const app = new ExplorerApp(root, api);
  void app.init();
  return app;
}
