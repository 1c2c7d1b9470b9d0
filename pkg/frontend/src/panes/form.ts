// Item form pane: one row per statement unit, with editing and adding.

import { ApiClient, ApiError } from "../api.js";
import type { TermJson, UnitClassInfo, UnitView } from "../types.js";

function termInputValue(term: TermJson): string {
  return term.resource ?? term.literal ?? "";
}

export class ItemFormPane {
  private item: UnitView | null = null;
  private classes: UnitClassInfo[] = [];

  constructor(
    private el: HTMLElement,
    private api: ApiClient,
    private onMutated: () => void,
  ) {
    this.el.classList.add("pane", "pane-form");
    this.el.innerHTML = `
      <header><h2>Item</h2></header>
      <div class="form-body"><p class="placeholder">Select a unit.</p></div>
    `;
  }

  setClasses(classes: UnitClassInfo[]): void {
    this.classes = classes.filter((c) => c.slots !== null);
  }

  current(): UnitView | null {
    return this.item;
  }

  /** Show the item unit for a selection; statements resolve to their item. */
  async load(gupri: string): Promise<void> {
    let view = await this.api.unit(gupri);
    if (view.kind !== "item") {
      const item = view.containers.find((c) => c.kind === "item");
      if (item) {
        view = await this.api.unit(item.gupri);
      }
    }
    this.item = view;
    await this.render();
  }

  private async render(): Promise<void> {
    const body = this.el.querySelector(".form-body")!;
    body.textContent = "";
    if (!this.item) return;
    const heading = document.createElement("h3");
    heading.textContent = this.item.label;
    heading.className = "item-heading";
    body.appendChild(heading);

    if (this.item.kind === "item") {
      for (const member of this.item.members) {
        body.appendChild(await this.statementRow(member));
      }
      body.appendChild(this.addSection());
    } else {
      const note = document.createElement("p");
      note.className = "placeholder";
      note.textContent = `${this.item.kind} unit with ${this.item.members.length} member(s)`;
      body.appendChild(note);
    }
  }

  private async statementRow(gupri: string): Promise<HTMLElement> {
    const view = await this.api.unit(gupri);
    const row = document.createElement("div");
    row.className = "statement-row" + (view.negated ? " negated" : "");
    row.dataset.gupri = gupri;

    const label = document.createElement("span");
    label.className = "statement-label";
    label.textContent = view.label;
    row.appendChild(label);

    if (view.slot_values && view.schema_ref) {
      const editButton = document.createElement("button");
      editButton.type = "button";
      editButton.className = "edit";
      editButton.textContent = "edit";
      editButton.addEventListener("click", () => {
        editor.classList.toggle("hidden");
      });
      row.appendChild(editButton);

      const editor = this.editor(view);
      editor.classList.add("hidden");
      row.appendChild(editor);
    }
    return row;
  }

  /** Edit form: posts a revision of the statement with changed slots. */
  private editor(view: UnitView): HTMLElement {
    const form = document.createElement("form");
    form.className = "statement-editor";
    const inputs = new Map<string, HTMLInputElement>();
    for (const [slot, values] of Object.entries(view.slot_values ?? {})) {
      const field = document.createElement("label");
      field.className = "field";
      field.textContent = slot;
      const input = document.createElement("input");
      input.name = slot;
      input.value = values.map(termInputValue).join(", ");
      field.appendChild(input);
      const error = document.createElement("span");
      error.className = "field-error";
      field.appendChild(error);
      form.appendChild(field);
      inputs.set(slot, input);
    }
    const save = document.createElement("button");
    save.type = "submit";
    save.textContent = "save revision";
    form.appendChild(save);
    const formError = document.createElement("p");
    formError.className = "form-error";
    form.appendChild(formError);

    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void (async () => {
        const slots: Record<string, string | string[]> = {};
        for (const [slot, input] of inputs) {
          const parts = input.value
            .split(",")
            .map((v) => v.trim())
            .filter(Boolean);
          slots[slot] = parts.length === 1 ? parts[0] : parts;
        }
        try {
          await this.api.createStatement({
            schema: view.unit_class,
            subject: view.subject!,
            slots,
            negated: view.negated,
            revises: view.gupri,
          });
          this.onMutated();
        } catch (err) {
          this.showErrors(err, form, inputs, formError);
        }
      })();
    });
    return form;
  }

  /** Add form: mints a fresh statement about this item's subject. */
  private addSection(): HTMLElement {
    const section = document.createElement("form");
    section.className = "add-statement";
    const heading = document.createElement("h4");
    heading.textContent = "add statement";
    section.appendChild(heading);

    const classSelect = document.createElement("select");
    classSelect.className = "class-select";
    for (const cls of this.classes) {
      const option = document.createElement("option");
      option.value = cls.iri;
      option.textContent = cls.iri.split("/").pop() ?? cls.iri;
      classSelect.appendChild(option);
    }
    section.appendChild(classSelect);

    const fields = document.createElement("div");
    fields.className = "add-fields";
    section.appendChild(fields);

    const negatedLabel = document.createElement("label");
    negatedLabel.className = "negated-toggle hidden";
    const negatedBox = document.createElement("input");
    negatedBox.type = "checkbox";
    negatedLabel.appendChild(negatedBox);
    negatedLabel.appendChild(document.createTextNode(" negated"));
    section.appendChild(negatedLabel);

    const submit = document.createElement("button");
    submit.type = "submit";
    submit.textContent = "add";
    section.appendChild(submit);
    const formError = document.createElement("p");
    formError.className = "form-error";
    section.appendChild(formError);

    const inputs = new Map<string, HTMLInputElement>();
    const renderFields = () => {
      fields.textContent = "";
      inputs.clear();
      const cls = this.classes.find((c) => c.iri === classSelect.value);
      negatedLabel.classList.toggle("hidden", !cls?.negatable);
      for (const slot of cls?.slots ?? []) {
        const field = document.createElement("label");
        field.className = "field";
        field.textContent = slot.name;
        const input = document.createElement("input");
        input.name = slot.name;
        input.placeholder = slot.kind === "resource" ? "IRI" : "value";
        field.appendChild(input);
        const error = document.createElement("span");
        error.className = "field-error";
        field.appendChild(error);
        fields.appendChild(field);
        inputs.set(slot.name, input);
      }
    };
    classSelect.addEventListener("change", renderFields);
    renderFields();

    section.addEventListener("submit", (event) => {
      event.preventDefault();
      void (async () => {
        const slots: Record<string, string> = {};
        for (const [slot, input] of inputs) {
          if (input.value.trim()) {
            slots[slot] = input.value.trim();
          }
        }
        try {
          await this.api.createStatement({
            schema: classSelect.value,
            subject: this.item!.subject!,
            slots,
            negated: negatedBox.checked,
          });
          this.onMutated();
        } catch (err) {
          this.showErrors(err, section, inputs, formError);
        }
      })();
    });
    return section;
  }

  private showErrors(
    err: unknown,
    form: HTMLElement,
    inputs: Map<string, HTMLInputElement>,
    general: HTMLElement,
  ): void {
    for (const span of form.querySelectorAll(".field-error")) {
      span.textContent = "";
    }
    general.textContent = "";
    if (!(err instanceof ApiError)) {
      general.textContent = String(err);
      return;
    }
    const leftovers: string[] = [];
    for (const detail of err.details.length ? err.details : [err.message]) {
      let placed = false;
      for (const [slot, input] of inputs) {
        if (detail.includes(`'${slot}'`)) {
          const span = input.parentElement?.querySelector(".field-error");
          if (span) {
            span.textContent = detail;
            placed = true;
          }
          break;
        }
      }
      if (!placed) leftovers.push(detail);
    }
    general.textContent = leftovers.join("; ");
  }
}
