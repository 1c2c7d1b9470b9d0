// Question builder: the statement form reused for searching, no query
// text required. Slot modes: fixed value, variable (with optional class
// constraint), numeric range, or left unbound.

import { ApiClient, ApiError } from "../api.js";
import type { QuestionCreated, ResultRow, SlotInfo, UnitClassInfo } from "../types.js";

interface SlotWidgets {
  slot: SlotInfo;
  mode: HTMLSelectElement;
  value: HTMLInputElement;
  varName: HTMLInputElement;
  classConstraint: HTMLInputElement;
  low: HTMLInputElement;
  high: HTMLInputElement;
  error: HTMLElement;
}

const NUMERIC_DATATYPES = new Set([
  "http://www.w3.org/2001/XMLSchema#decimal",
  "http://www.w3.org/2001/XMLSchema#integer",
  "http://www.w3.org/2001/XMLSchema#double",
  "http://www.w3.org/2001/XMLSchema#float",
]);

export class QuestionBuilderPane {
  private classes: UnitClassInfo[] = [];
  private widgets: SlotWidgets[] = [];
  private subjectMode!: HTMLSelectElement;
  private subjectValue!: HTMLInputElement;
  private subjectVar!: HTMLInputElement;
  private subjectClass!: HTMLInputElement;
  private lastCreated: QuestionCreated | null = null;

  constructor(
    private el: HTMLElement,
    private api: ApiClient,
    private onSelectUnit: (gupri: string) => void,
  ) {
    this.el.classList.add("pane", "pane-question");
    this.el.innerHTML = `
      <header><h2>Ask</h2></header>
      <form class="question-form">
        <select class="schema-select"></select>
        <div class="subject-widget"></div>
        <div class="slot-widgets"></div>
        <button type="submit" class="run">ask</button>
        <p class="form-error"></p>
      </form>
      <div class="results"></div>
      <aside class="facet-sidebar"></aside>
      <details class="sparql-view">
        <summary>show SPARQL</summary>
        <pre class="sparql-text" readonly></pre>
      </details>
    `;
    this.el
      .querySelector<HTMLFormElement>(".question-form")!
      .addEventListener("submit", (event) => {
        event.preventDefault();
        void this.submit();
      });
  }

  setClasses(classes: UnitClassInfo[]): void {
    this.classes = classes.filter((c) => c.slots !== null);
    const select = this.el.querySelector<HTMLSelectElement>(".schema-select")!;
    select.textContent = "";
    for (const cls of this.classes) {
      const option = document.createElement("option");
      option.value = cls.iri;
      option.textContent = cls.iri.split("/").pop() ?? cls.iri;
      select.appendChild(option);
    }
    select.addEventListener("change", () => this.renderWidgets());
    this.renderWidgets();
  }

  selectSchema(iri: string): void {
    const select = this.el.querySelector<HTMLSelectElement>(".schema-select")!;
    select.value = iri;
    this.renderWidgets();
  }

  private schema(): UnitClassInfo | undefined {
    const select = this.el.querySelector<HTMLSelectElement>(".schema-select")!;
    return this.classes.find((c) => c.iri === select.value);
  }

  private renderWidgets(): void {
    const subjectHost = this.el.querySelector<HTMLElement>(".subject-widget")!;
    subjectHost.textContent = "";
    const subjectRow = document.createElement("div");
    subjectRow.className = "slot-row subject-row";
    const caption = document.createElement("span");
    caption.className = "slot-name";
    caption.textContent = "subject";
    subjectRow.appendChild(caption);
    this.subjectMode = document.createElement("select");
    this.subjectMode.className = "mode";
    for (const mode of ["variable", "fixed", "unbound"]) {
      const option = document.createElement("option");
      option.value = mode;
      option.textContent = mode;
      this.subjectMode.appendChild(option);
    }
    subjectRow.appendChild(this.subjectMode);
    this.subjectVar = document.createElement("input");
    this.subjectVar.placeholder = "variable name";
    this.subjectVar.className = "var-name";
    subjectRow.appendChild(this.subjectVar);
    this.subjectClass = document.createElement("input");
    this.subjectClass.placeholder = "class constraint IRI";
    this.subjectClass.className = "class-constraint";
    subjectRow.appendChild(this.subjectClass);
    this.subjectValue = document.createElement("input");
    this.subjectValue.placeholder = "fixed IRI";
    this.subjectValue.className = "fixed-value hidden";
    subjectRow.appendChild(this.subjectValue);
    this.subjectMode.addEventListener("change", () => {
      const mode = this.subjectMode.value;
      this.subjectVar.classList.toggle("hidden", mode !== "variable");
      this.subjectClass.classList.toggle("hidden", mode !== "variable");
      this.subjectValue.classList.toggle("hidden", mode !== "fixed");
    });
    subjectHost.appendChild(subjectRow);

    const host = this.el.querySelector<HTMLElement>(".slot-widgets")!;
    host.textContent = "";
    this.widgets = [];
    for (const slot of this.schema()?.slots ?? []) {
      const row = document.createElement("div");
      row.className = "slot-row";
      row.dataset.slot = slot.name;
      const name = document.createElement("span");
      name.className = "slot-name";
      name.textContent = slot.name;
      row.appendChild(name);

      const mode = document.createElement("select");
      mode.className = "mode";
      const modes = ["unbound", "fixed", "variable"];
      if (slot.kind === "literal" && slot.datatype && NUMERIC_DATATYPES.has(slot.datatype)) {
        modes.push("range");
      }
      for (const m of modes) {
        const option = document.createElement("option");
        option.value = m;
        option.textContent = m;
        mode.appendChild(option);
      }
      row.appendChild(mode);

      const value = document.createElement("input");
      value.className = "fixed-value hidden";
      value.placeholder = slot.kind === "resource" ? "IRI" : "value";
      row.appendChild(value);
      const varName = document.createElement("input");
      varName.className = "var-name hidden";
      varName.placeholder = "variable name";
      row.appendChild(varName);
      const classConstraint = document.createElement("input");
      classConstraint.className = "class-constraint hidden";
      classConstraint.placeholder = "class constraint IRI";
      row.appendChild(classConstraint);
      const low = document.createElement("input");
      low.className = "range-low hidden";
      low.placeholder = "min";
      row.appendChild(low);
      const high = document.createElement("input");
      high.className = "range-high hidden";
      high.placeholder = "max";
      row.appendChild(high);
      const error = document.createElement("span");
      error.className = "field-error";
      row.appendChild(error);

      mode.addEventListener("change", () => {
        value.classList.toggle("hidden", mode.value !== "fixed");
        varName.classList.toggle("hidden", !["variable", "range"].includes(mode.value));
        classConstraint.classList.toggle(
          "hidden",
          mode.value !== "variable" || slot.kind !== "resource",
        );
        low.classList.toggle("hidden", mode.value !== "range");
        high.classList.toggle("hidden", mode.value !== "range");
      });
      host.appendChild(row);
      this.widgets.push({ slot, mode, value, varName, classConstraint, low, high, error });
    }
  }

  /** The documented POST /questions payload, straight from the form. */
  buildPayload(): unknown {
    const schema = this.schema();
    if (!schema) throw new Error("no schema selected");
    const subject: Record<string, unknown> = {};
    if (this.subjectMode.value === "fixed") {
      subject["fixed"] = this.subjectValue.value.trim();
    } else if (this.subjectMode.value === "variable") {
      if (this.subjectVar.value.trim()) subject["var"] = this.subjectVar.value.trim();
      if (this.subjectClass.value.trim()) {
        subject["class"] = this.subjectClass.value.trim();
      }
    }
    const slots: Record<string, unknown> = {};
    for (const widget of this.widgets) {
      if (widget.mode.value === "fixed") {
        slots[widget.slot.name] = { fixed: widget.value.value.trim() };
      } else if (widget.mode.value === "variable") {
        const binding: Record<string, unknown> = {};
        if (widget.varName.value.trim()) binding["var"] = widget.varName.value.trim();
        if (widget.classConstraint.value.trim()) {
          binding["class"] = widget.classConstraint.value.trim();
        }
        slots[widget.slot.name] = binding;
      } else if (widget.mode.value === "range") {
        const binding: Record<string, unknown> = {};
        if (widget.varName.value.trim()) binding["var"] = widget.varName.value.trim();
        binding["range"] = [Number(widget.low.value), Number(widget.high.value)];
        slots[widget.slot.name] = binding;
      }
    }
    const source: Record<string, unknown> = { schema: schema.iri };
    if (Object.keys(subject).length) source["subject"] = subject;
    source["slots"] = slots;
    return { sources: [source] };
  }

  async submit(): Promise<void> {
    const formError = this.el.querySelector<HTMLElement>(".form-error")!;
    formError.textContent = "";
    for (const widget of this.widgets) widget.error.textContent = "";
    let created: QuestionCreated;
    try {
      created = await this.api.createQuestion(this.buildPayload());
    } catch (err) {
      this.placeCompileError(err, formError);
      return;
    }
    this.lastCreated = created;
    const result = await this.api.executeQuestion(created.gupri);
    const sparql = await this.api.sparql(created.gupri);
    this.el.querySelector(".sparql-text")!.textContent = sparql;
    const results = this.el.querySelector<HTMLElement>(".results")!;
    results.textContent = "";
    if ("boolean" in result) {
      const badge = document.createElement("span");
      badge.className = `boolean-badge ${result.boolean}`;
      badge.textContent = result.boolean ? "true" : "false";
      results.appendChild(badge);
      return;
    }
    results.appendChild(await this.resultsTable(created, result.items));
    await this.renderFacets(result.items);
  }

  private async resultsTable(
    created: QuestionCreated,
    rows: ResultRow[],
  ): Promise<HTMLElement> {
    const table = document.createElement("table");
    table.className = "results-table";
    const head = document.createElement("tr");
    for (const column of [...created.select_vars, "statement"]) {
      const th = document.createElement("th");
      th.textContent = column;
      head.appendChild(th);
    }
    table.appendChild(head);
    for (const row of rows) {
      const tr = document.createElement("tr");
      for (const name of created.select_vars) {
        const td = document.createElement("td");
        const term = row.bindings[name];
        td.textContent = term?.resource ?? term?.literal ?? "";
        tr.appendChild(td);
      }
      const td = document.createElement("td");
      for (const gupri of row.units) {
        const link = document.createElement("button");
        link.type = "button";
        link.className = "unit-link";
        link.dataset.gupri = gupri;
        try {
          const view = await this.api.unit(gupri);
          link.textContent = view.label;
        } catch {
          link.textContent = gupri;
        }
        link.addEventListener("click", () => this.onSelectUnit(gupri));
        td.appendChild(link);
      }
      tr.appendChild(td);
      table.appendChild(tr);
    }
    if (!rows.length) {
      const empty = document.createElement("tr");
      const td = document.createElement("td");
      td.colSpan = created.select_vars.length + 1;
      td.textContent = "no matches";
      empty.appendChild(td);
      table.appendChild(empty);
    }
    return table;
  }

  private async renderFacets(rows: ResultRow[]): Promise<void> {
    const sidebar = this.el.querySelector<HTMLElement>(".facet-sidebar")!;
    sidebar.textContent = "";
    const units = rows.flatMap((row) => row.units);
    if (!units.length) return;
    const { facets } = await this.api.facets(units);
    const heading = document.createElement("h3");
    heading.textContent = "facets";
    sidebar.appendChild(heading);
    const ranges = document.createElement("ul");
    for (const [key, range] of Object.entries(facets.slot_ranges)) {
      const li = document.createElement("li");
      li.className = "facet-range";
      li.textContent = `${key.split("::").pop()}: ${range.min} to ${range.max}`;
      ranges.appendChild(li);
    }
    for (const [cls, count] of Object.entries(facets.unit_classes)) {
      const li = document.createElement("li");
      li.className = "facet-class";
      li.textContent = `${cls.split("/").pop()}: ${count}`;
      ranges.appendChild(li);
    }
    sidebar.appendChild(ranges);
  }

  private placeCompileError(err: unknown, general: HTMLElement): void {
    if (!(err instanceof ApiError)) {
      general.textContent = String(err);
      return;
    }
    const texts = err.details.length ? err.details : [err.message];
    const leftovers: string[] = [];
    for (const text of texts) {
      const widget = this.widgets.find((w) => text.includes(`'${w.slot.name}'`));
      if (widget) {
        widget.error.textContent = text;
      } else {
        leftovers.push(text);
      }
    }
    general.textContent = leftovers.join("; ");
  }
}
