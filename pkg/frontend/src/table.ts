/** The ranked interaction table.  Cell values come verbatim from the API
 * document; sorting is delegated to the server through the query. */

import { measureText, endpointText } from "./format";
import type { InteractionsDoc } from "./types";
import { MEASURES, type Measure } from "./viewstate";

export interface TableCallbacks {
  onSort(measure: Measure): void;
  onRowClick(index: number): void;
}

export interface TableUiState {
  sortBy: Measure;
  descending: boolean;
  selectedRow: number | null;
}

export function renderInteractionsTable(
  doc: InteractionsDoc,
  ui: TableUiState,
  on: TableCallbacks,
): HTMLTableElement {
  const table = document.createElement("table");
  table.className = "interactions";

  const head = table.createTHead();
  const headRow = head.insertRow();
  for (const title of ["Kind", "Condition", "Consequence"]) {
    const th = document.createElement("th");
    th.textContent = title;
    headRow.appendChild(th);
  }
  for (const measure of MEASURES) {
    const th = document.createElement("th");
    th.className = "measure sortable";
    th.dataset.measure = measure;
    const active = measure === ui.sortBy;
    th.textContent = active ? `${measure} ${ui.descending ? "▼" : "▲"}` : measure;
    if (active) th.classList.add("sorted");
    th.addEventListener("click", () => on.onSort(measure));
    headRow.appendChild(th);
  }

  const body = table.createTBody();
  doc.records.forEach((record, index) => {
    const row = body.insertRow();
    row.dataset.index = String(index);
    if (index === ui.selectedRow) row.classList.add("selected");
    row.addEventListener("click", () => on.onRowClick(index));

    row.insertCell().textContent = record.kind;
    const condition = row.insertCell();
    condition.className = "endpoint";
    condition.textContent = endpointText(record.condition);
    const consequence = row.insertCell();
    consequence.className = "endpoint";
    consequence.textContent = endpointText(record.consequence);
    for (const measure of MEASURES) {
      const cell = row.insertCell();
      cell.className = "value";
      cell.dataset.measure = measure;
      cell.textContent = measureText(record.measures[measure] ?? null);
    }
  });
  return table;
}
