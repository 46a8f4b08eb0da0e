/** Wires panels, table, controls and URL state together.
 *
 * Every number on screen comes from an API response; the client decides
 * layout and color only.  Fetches may overlap, and each display region
 * keeps a sequence gate so an overtaken response is dropped instead of
 * clobbering a newer one.
 */

import { api, ApiError, LatestGate } from "./api";
import { legendColor, tint } from "./color";
import { renderModelPanel, type PanelHandle } from "./graph";
import { renderInteractionsTable } from "./table";
import type {
  EndpointDoc,
  HighlightDoc,
  InteractionRecordDoc,
  InteractionsDoc,
  ModelDoc,
} from "./types";
import {
  KINDS,
  MEASURES,
  decodeViewState,
  encodeViewState,
  type Anchor,
  type Measure,
  type ViewState,
} from "./viewstate";

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
  readonly root: HTMLElement;
  private vs: ViewState;
  private model: ModelDoc | null = null;
  private records: InteractionRecordDoc[] = [];
  private panels = new Map<string, PanelHandle>();

  private controlsHost: HTMLElement;
  private errorBanner: HTMLElement;
  private compositeHost: HTMLElement;
  private artifactHosts: HTMLElement;
  private interpretationBox: HTMLElement;
  private tableHost: HTMLElement;

  private compositeGate = new LatestGate();
  private interactionsGate = new LatestGate();
  private highlightGate = new LatestGate();
  private pending = new Set<Promise<void>>();

  constructor(root: HTMLElement, search: string) {
    this.root = root;
    this.vs = decodeViewState(search);

    this.controlsHost = el("div", "controls");
    this.errorBanner = el("div", "error-banner");
    this.errorBanner.hidden = true;
    this.compositeHost = el("div", "composite-host");
    this.artifactHosts = el("div", "artifact-hosts");
    const panelsRow = el("div", "panels");
    panelsRow.appendChild(this.compositeHost);
    panelsRow.appendChild(this.artifactHosts);
    this.interpretationBox = el("div", "interpretation");
    this.interpretationBox.hidden = true;
    this.tableHost = el("div", "table-host");

    root.appendChild(this.errorBanner);
    root.appendChild(this.controlsHost);
    root.appendChild(panelsRow);
    root.appendChild(this.buildLegend());
    root.appendChild(this.interpretationBox);
    root.appendChild(this.tableHost);
  }

  /** Initial load; resolves when every startup fetch has settled. */
  start(): Promise<void> {
    return this.track(this.initialize());
  }

  /** Resolves once no tracked fetch is in flight. */
  async idle(): Promise<void> {
    while (this.pending.size > 0) {
      await Promise.allSettled([...this.pending]);
    }
  }

  /** The URL search string the current view state encodes to. */
  currentSearch(): string {
    return encodeViewState(this.vs);
  }

  private track(work: Promise<void>): Promise<void> {
    this.pending.add(work);
    void work.finally(() => this.pending.delete(work));
    return work;
  }

  private async initialize(): Promise<void> {
    let model: ModelDoc;
    try {
      model = await api.model();
    } catch (err) {
      this.showError(err);
      return;
    }
    this.model = model;
    this.renderControls(model);

    const loads: Promise<void>[] = [this.refreshInteractions()];
    if (model.artifacts.length === 1) {
      // the composite machine is the artifact machine; one panel suffices
      const name = model.artifacts[0]!.name;
      this.mountArtifactPanel(name, model, this.artifactHosts);
    } else {
      loads.push(this.refreshComposite());
      for (const artifact of model.artifacts) {
        loads.push(this.loadArtifactPanel(artifact.name));
      }
    }
    await Promise.all(loads);
    if (this.vs.anchor) await this.refreshHighlight();
    if (this.vs.selectedRow !== null) this.applyRowSelection();
  }

  // -- panels ---------------------------------------------------------

  private async refreshComposite(): Promise<void> {
    if (!this.model) return;
    const token = this.compositeGate.next();
    const names = this.vs.projection;
    let doc = this.model;
    let title = "composite";
    if (names && names.length < this.model.artifacts.length) {
      try {
        doc = await api.projection(names);
      } catch (err) {
        if (this.compositeGate.isCurrent(token)) this.showError(err);
        return;
      }
      title = `projection: ${names.join(", ")}`;
    }
    if (!this.compositeGate.isCurrent(token)) return;
    this.compositeHost.replaceChildren(
      renderModelPanel(doc, {
        title,
        onBackgroundClick: () => this.setAnchor(null),
      }).root,
    );
  }

  private async loadArtifactPanel(name: string): Promise<void> {
    let doc: ModelDoc;
    try {
      doc = await api.projection([name]);
    } catch (err) {
      this.showError(err);
      return;
    }
    this.mountArtifactPanel(name, doc, this.artifactHosts);
  }

  private mountArtifactPanel(name: string, doc: ModelDoc, host: HTMLElement): void {
    const panel = renderModelPanel(doc, {
      title: name,
      artifact: name,
      onStateClick: (artifact, state) => this.setAnchor({ artifact, state }),
      onTransitionClick: (artifact, from, to) =>
        this.setAnchor({ artifact, from, to }),
      onBackgroundClick: () => this.setAnchor(null),
    });
    const previous = this.panels.get(name);
    if (previous) previous.root.replaceWith(panel.root);
    else host.appendChild(panel.root);
    this.panels.set(name, panel);
  }

  // -- anchor and highlight -------------------------------------------

  private setAnchor(anchor: Anchor | null): void {
    this.vs.anchor = anchor;
    this.syncUrl();
    this.clearTints();
    this.clearMarks();
    if (anchor) void this.track(this.refreshHighlight());
  }

  private async refreshHighlight(): Promise<void> {
    const anchor = this.vs.anchor;
    if (!anchor) return;
    const token = this.highlightGate.next();
    let doc: HighlightDoc;
    try {
      doc = await api.highlight(anchor);
    } catch (err) {
      if (this.highlightGate.isCurrent(token)) this.showError(err);
      return;
    }
    if (!this.highlightGate.isCurrent(token)) return;
    this.clearError();
    this.clearTints();
    this.clearMarks();
    const own = this.panels.get(anchor.artifact);
    if (own) {
      if (anchor.state !== undefined) own.markState(anchor.state);
      else if (anchor.from !== undefined && anchor.to !== undefined) {
        own.markTransition(anchor.from, anchor.to);
      }
    }
    for (const element of doc.related) {
      const panel = this.panels.get(element.artifact);
      if (!panel) continue;
      const color = tint(element.confidence, element.via);
      if (color === null) continue;
      if (element.state !== undefined) {
        panel.tintState(element.state, color);
      } else if (element.from !== undefined && element.to !== undefined) {
        panel.tintTransition(element.from, element.to, color);
      }
    }
  }

  private clearTints(): void {
    for (const panel of this.panels.values()) panel.clearTints();
  }

  private clearMarks(): void {
    for (const panel of this.panels.values()) panel.clearMarks();
  }

  // -- interactions table -----------------------------------------------

  private async refreshInteractions(): Promise<void> {
    const token = this.interactionsGate.next();
    let doc: InteractionsDoc;
    try {
      doc = await api.interactions(this.vs.query);
    } catch (err) {
      if (this.interactionsGate.isCurrent(token)) this.showError(err);
      return;
    }
    if (!this.interactionsGate.isCurrent(token)) return;
    this.clearError();
    this.records = doc.records;
    this.renderTable();
  }

  private renderTable(): void {
    const table = renderInteractionsTable(
      { records: this.records },
      {
        sortBy: this.vs.query.sortBy,
        descending: this.vs.query.descending,
        selectedRow: this.vs.selectedRow,
      },
      {
        onSort: (measure) => this.changeSort(measure),
        onRowClick: (index) => this.selectRow(index),
      },
    );
    this.tableHost.replaceChildren(table);
  }

  private changeSort(measure: Measure): void {
    if (this.vs.query.sortBy === measure) {
      this.vs.query.descending = !this.vs.query.descending;
    } else {
      this.vs.query.sortBy = measure;
      this.vs.query.descending = true;
    }
    this.vs.selectedRow = null;
    this.hideInterpretation();
    this.syncUrl();
    void this.track(this.refreshInteractions());
  }

  private selectRow(index: number): void {
    this.vs.selectedRow = index;
    this.syncUrl();
    this.renderTable();
    this.applyRowSelection();
  }

  private applyRowSelection(): void {
    const index = this.vs.selectedRow;
    const record = index === null ? undefined : this.records[index];
    if (!record) {
      this.hideInterpretation();
      return;
    }
    this.interpretationBox.hidden = false;
    this.interpretationBox.textContent = record.interpretation;
    this.clearMarks();
    this.markEndpoint(record.condition);
    this.markEndpoint(record.consequence);
  }

  private markEndpoint(ep: EndpointDoc): void {
    const panel = this.panels.get(ep.artifact);
    if (panel) {
      if (ep.from != null && ep.to != null) panel.markTransition(ep.from, ep.to);
      else if (ep.state != null) panel.markState(ep.state);
    }
    if (ep.and_artifact !== undefined && ep.and_state != null) {
      this.panels.get(ep.and_artifact)?.markState(ep.and_state);
    }
  }

  private hideInterpretation(): void {
    this.interpretationBox.hidden = true;
    this.interpretationBox.textContent = "";
  }

  // -- controls ---------------------------------------------------------

  private renderControls(model: ModelDoc): void {
    const host = this.controlsHost;
    host.replaceChildren();

    const kinds = el("fieldset", "kind-filter");
    kinds.appendChild(el("legend", undefined, "kinds"));
    for (const kind of KINDS) {
      const label = el("label", undefined, kind);
      const box = el("input") as HTMLInputElement;
      box.type = "checkbox";
      box.checked = this.vs.query.kinds.includes(kind);
      box.addEventListener("change", () => {
        const active = KINDS.filter((k) =>
          k === kind ? box.checked : this.vs.query.kinds.includes(k),
        );
        if (active.length === 0) {
          box.checked = true; // the server rejects an empty kind list
          return;
        }
        this.vs.query.kinds = active;
        this.queryChanged();
      });
      label.prepend(box);
      kinds.appendChild(label);
    }
    host.appendChild(kinds);

    const floors = el("fieldset", "floors");
    floors.appendChild(el("legend", undefined, "minimum values"));
    for (const measure of MEASURES) {
      const label = el("label", undefined, measure);
      const input = el("input") as HTMLInputElement;
      input.type = "number";
      input.step = "any";
      input.dataset.measure = measure;
      if (measure === "support") input.placeholder = "0.001";
      const current = this.vs.query.minValues[measure];
      if (current !== undefined) input.value = String(current);
      input.addEventListener("change", () => {
        const value = Number(input.value);
        if (input.value === "" || !Number.isFinite(value)) {
          delete this.vs.query.minValues[measure];
        } else {
          this.vs.query.minValues[measure] = value;
        }
        this.queryChanged();
      });
      label.prepend(input);
      floors.appendChild(label);
    }
    host.appendChild(floors);

    const flags = el("fieldset", "flags");
    flags.appendChild(el("legend", undefined, "options"));
    const boundary = this.flagBox(flags, "boundary moves", this.vs.query.includeBoundary, (on) => {
      this.vs.query.includeBoundary = on;
    });
    const undef = this.flagBox(flags, "undefined rules", this.vs.query.includeUndefined, (on) => {
      this.vs.query.includeUndefined = on;
    });
    void boundary;
    void undef;
    const limitLabel = el("label", undefined, "limit");
    const limit = el("input") as HTMLInputElement;
    limit.type = "number";
    limit.min = "0";
    limit.step = "1";
    limit.value = String(this.vs.query.limit);
    limit.className = "limit";
    limit.addEventListener("change", () => {
      const value = Number(limit.value);
      if (Number.isInteger(value) && value >= 0) {
        this.vs.query.limit = value;
        this.queryChanged();
      } else {
        limit.value = String(this.vs.query.limit);
      }
    });
    limitLabel.prepend(limit);
    flags.appendChild(limitLabel);
    host.appendChild(flags);

    if (model.artifacts.length > 2) {
      const pairBox = el("fieldset", "pair-filter");
      pairBox.appendChild(el("legend", undefined, "artifact pair"));
      const select = el("select") as HTMLSelectElement;
      const any = el("option", undefined, "all pairs") as HTMLOptionElement;
      any.value = "";
      select.appendChild(any);
      const names = model.artifacts.map((a) => a.name);
      for (let i = 0; i < names.length; i++) {
        for (let j = i + 1; j < names.length; j++) {
          const option = el("option", undefined, `${names[i]} & ${names[j]}`) as HTMLOptionElement;
          option.value = `${names[i]},${names[j]}`;
          select.appendChild(option);
        }
      }
      if (this.vs.query.pair) select.value = this.vs.query.pair.join(",");
      select.addEventListener("change", () => {
        const parts = select.value === "" ? null : select.value.split(",");
        this.vs.query.pair = parts === null ? null : [parts[0]!, parts[1]!];
        this.queryChanged();
      });
      pairBox.appendChild(select);
      host.appendChild(pairBox);
    }

    if (model.artifacts.length >= 2) {
      const proj = el("fieldset", "projection-choice");
      proj.appendChild(el("legend", undefined, "composite projection"));
      const chosen = new Set(this.vs.projection ?? model.artifacts.map((a) => a.name));
      for (const artifact of model.artifacts) {
        const label = el("label", undefined, artifact.name);
        const box = el("input") as HTMLInputElement;
        box.type = "checkbox";
        box.checked = chosen.has(artifact.name);
        box.addEventListener("change", () => {
          if (box.checked) chosen.add(artifact.name);
          else if (chosen.size > 1) chosen.delete(artifact.name);
          else {
            box.checked = true; // a projection needs at least one artifact
            return;
          }
          const names = model.artifacts
            .map((a) => a.name)
            .filter((n) => chosen.has(n));
          this.vs.projection = names.length === model.artifacts.length ? null : names;
          this.syncUrl();
          void this.track(this.refreshComposite());
        });
        label.prepend(box);
        proj.appendChild(label);
      }
      host.appendChild(proj);
    }
  }

  private flagBox(
    host: HTMLElement,
    text: string,
    initial: boolean,
    apply: (on: boolean) => void,
  ): HTMLInputElement {
    const label = el("label", undefined, text);
    const box = el("input") as HTMLInputElement;
    box.type = "checkbox";
    box.checked = initial;
    box.addEventListener("change", () => {
      apply(box.checked);
      this.queryChanged();
    });
    label.prepend(box);
    host.appendChild(label);
    return box;
  }

  private queryChanged(): void {
    this.vs.selectedRow = null;
    this.hideInterpretation();
    this.syncUrl();
    void this.track(this.refreshInteractions());
  }

  // -- chrome -----------------------------------------------------------

  private buildLegend(): HTMLElement {
    const legend = el("div", "legend");
    legend.appendChild(el("span", "legend-title", "highlight kinds:"));
    for (const kind of KINDS) {
      const item = el("span", "legend-item", kind);
      const swatch = el("span", "swatch");
      swatch.style.background = legendColor(kind);
      item.prepend(swatch);
      legend.appendChild(item);
    }
    return legend;
  }

  private syncUrl(): void {
    history.replaceState(null, "", `?${encodeViewState(this.vs)}`);
  }

  private showError(err: unknown): void {
    const text =
      err instanceof ApiError
        ? err.status === 0
          ? err.message
          : `API error ${err.status}: ${err.message}`
        : String(err);
    this.errorBanner.textContent = text;
    this.errorBanner.hidden = false;
  }

  private clearError(): void {
    this.errorBanner.hidden = true;
    this.errorBanner.textContent = "";
  }
}

export function createApp(root: HTMLElement, search: string): ExplorerApp {
  return new ExplorerApp(root, search);
}
