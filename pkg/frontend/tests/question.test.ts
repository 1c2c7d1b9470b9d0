// Question builder: the form must emit exactly the documented POST
// payload and render the matching apple from the replayed responses.

import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { QuestionBuilderPane } from "../src/panes/question.js";
import type { Page, UnitClassInfo } from "../src/types.js";
import { CapturedRequest, makeMockFetch, meta } from "./mock.js";

const WEIGHT = "https://w3id.org/semunit/class/weight-statement";

interface Fig6Meta {
  question_body: unknown;
  created: { gupri: string; boolean_mode: boolean };
  facets_body: { units: string[] };
}

describe("question builder", () => {
  let pane: QuestionBuilderPane;
  let host: HTMLElement;
  let captured: CapturedRequest[];
  let api: ApiClient;

  beforeEach(async () => {
    document.body.innerHTML = '<main id="ask"></main>';
    host = document.getElementById("ask")!;
    captured = [];
    api = new ApiClient("", makeMockFetch(captured));
    pane = new QuestionBuilderPane(host, api, () => undefined);
    const classes = (await api.unitClasses()) as Page<UnitClassInfo>;
    pane.setClasses(classes.items);
    pane.selectSchema(WEIGHT);
  });

  function fillFig6Form(): void {
    const subjectRow = host.querySelector<HTMLElement>(".subject-row")!;
    const subjectMode = subjectRow.querySelector<HTMLSelectElement>(".mode")!;
    subjectMode.value = "variable";
    subjectMode.dispatchEvent(new Event("change"));
    subjectRow.querySelector<HTMLInputElement>(".var-name")!.value = "apple";
    subjectRow.querySelector<HTMLInputElement>(".class-constraint")!.value =
      "http://example.org/orchard#Apple";

    const valueRow = host.querySelector<HTMLElement>('.slot-row[data-slot="value"]')!;
    const valueMode = valueRow.querySelector<HTMLSelectElement>(".mode")!;
    valueMode.value = "range";
    valueMode.dispatchEvent(new Event("change"));
    valueRow.querySelector<HTMLInputElement>(".var-name")!.value = "value";
    valueRow.querySelector<HTMLInputElement>(".range-low")!.value = "200";
    valueRow.querySelector<HTMLInputElement>(".range-high")!.value = "300";

    const unitRow = host.querySelector<HTMLElement>('.slot-row[data-slot="unit"]')!;
    const unitMode = unitRow.querySelector<HTMLSelectElement>(".mode")!;
    unitMode.value = "fixed";
    unitMode.dispatchEvent(new Event("change"));
    unitRow.querySelector<HTMLInputElement>(".fixed-value")!.value =
      "http://example.org/orchard#gram";
    // quantity_kind stays unbound: the machine slot is not part of the question
  }

  it("issues exactly the documented POST payload", async () => {
    fillFig6Form();
    const fig6 = meta<Fig6Meta>("fig6");
    expect(pane.buildPayload()).toEqual(fig6.question_body);

    await pane.submit();
    const post = captured.find((r) => r.method === "POST" && r.path === "/questions");
    expect(post).toBeDefined();
    expect(post!.body).toEqual(fig6.question_body);

    const execute = captured.find(
      (r) => r.method === "POST" && r.path.endsWith("/execute"),
    );
    expect(execute).toBeDefined();
    expect(decodeURIComponent(execute!.path)).toContain(fig6.created.gupri);
  });

  it("renders apple X in the results table", async () => {
    fillFig6Form();
    await pane.submit();
    const cells = [...host.querySelectorAll(".results-table td")].map(
      (td) => td.textContent ?? "",
    );
    expect(cells).toContain("http://example.org/orchard#appleX");
    const links = [...host.querySelectorAll(".unit-link")].map(
      (el) => el.textContent ?? "",
    );
    expect(links).toContain("Apple X has a weight of 204.56 grams");
  });

  it("shows the emitted SPARQL read-only", async () => {
    fillFig6Form();
    await pane.submit();
    const text = host.querySelector(".sparql-text")!.textContent ?? "";
    expect(text.startsWith("SELECT DISTINCT")).toBe(true);
    expect(text).toContain("FILTER(?value >= 200 && ?value <= 300)");
  });

  it("fills the facet sidebar from the facets response", async () => {
    fillFig6Form();
    await pane.submit();
    const facetTexts = [...host.querySelectorAll(".facet-range")].map(
      (el) => el.textContent ?? "",
    );
    expect(facetTexts.some((t) => t.includes("value") && t.includes("204.56"))).toBe(
      true,
    );
    const facetsPost = captured.find(
      (r) => r.method === "POST" && r.path === "/facets",
    );
    const fig6 = meta<Fig6Meta>("fig6");
    expect(facetsPost!.body).toEqual({ units: fig6.facets_body.units, filters: [] });
  });
});
