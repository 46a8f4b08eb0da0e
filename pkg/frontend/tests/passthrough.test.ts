/** The two load-bearing UI properties: numbers pass through from the API
 * untouched, and clicking an element tints its counterparts by the
 * confidence the API reported. */

import { afterEach, describe, expect, it, vi } from "vitest";

import { createApp } from "../src/app";
import { lightnessOf } from "../src/color";
import { MEASURES } from "../src/viewstate";
import {
  click,
  highlightLabC,
  installMockApi,
  interactionsAll,
  mount,
} from "./helpers";

afterEach(() => {
  vi.unstubAllGlobals();
  document.body.innerHTML = "";
  history.replaceState(null, "", "/");
});

describe("interaction table pass-through", () => {
  it("renders every measure cell exactly as the API sent it", async () => {
    installMockApi();
    const root = mount();
    await createApp(root, "").start();

    const rows = [...root.querySelectorAll("table.interactions tbody tr")];
    expect(rows.length).toBe(interactionsAll.records.length);

    rows.forEach((row, index) => {
      const record = interactionsAll.records[index]!;
      const measures = record.measures as Record<string, number | string | null>;
      for (const measure of MEASURES) {
        const cell = row.querySelector(`td.value[data-measure="${measure}"]`);
        expect(cell, `row ${index} has a ${measure} cell`).not.toBeNull();
        const sent = measures[measure];
        const expected =
          sent === null ? "n/a" : sent === "inf" ? "inf" : String(sent);
        expect(cell!.textContent).toBe(expected);
      }
    });
  });

  it("round-trips every numeric cell back to the mocked number", async () => {
    installMockApi();
    const root = mount();
    await createApp(root, "").start();

    const rows = [...root.querySelectorAll("table.interactions tbody tr")];
    rows.forEach((row, index) => {
      const measures = interactionsAll.records[index]!.measures as Record<
        string,
        number | string | null
      >;
      for (const cell of row.querySelectorAll("td.value")) {
        const text = cell.textContent ?? "";
        if (text === "n/a" || text === "inf") continue;
        const measure = (cell as HTMLElement).dataset.measure!;
        expect(Number(text)).toBe(measures[measure]);
      }
    });
  });

  it("shows the clicked row's interpretation verbatim", async () => {
    installMockApi();
    const root = mount();
    const app = createApp(root, "");
    await app.start();

    const row = root.querySelector("table.interactions tbody tr")!;
    click(row);
    await app.idle();

    const box = root.querySelector(".interpretation") as HTMLElement;
    expect(box.hidden).toBe(false);
    expect(box.textContent).toBe(interactionsAll.records[0]!.interpretation);
  });
});

describe("click-to-highlight", () => {
  it("clicking C tints exactly W and Y, with W darker", async () => {
    installMockApi();
    const root = mount();
    const app = createApp(root, "");
    await app.start();

    const anchor = root.querySelector('g.node[data-artifact="lab"][data-state="C"]');
    expect(anchor).not.toBeNull();
    click(anchor!.querySelector("rect")!);
    await app.idle();

    const fills = new Map<string, string>();
    for (const node of root.querySelectorAll('g.node[data-artifact="patient"]')) {
      const state = (node as SVGGElement).dataset.state!;
      fills.set(state, node.querySelector("rect")!.getAttribute("fill")!);
    }
    const tinted = [...fills.entries()].filter(([, fill]) => fill !== "#ffffff");
    expect(new Set(tinted.map(([state]) => state))).toEqual(new Set(["W", "Y"]));
    expect(lightnessOf(fills.get("W")!)).toBeLessThan(lightnessOf(fills.get("Y")!));

    // the reported confidences drive the tint, nothing else does
    const related = highlightLabC.related;
    expect(related.map((r) => [r.state, r.confidence])).toEqual([
      ["W", 4 / 6],
      ["Y", 2 / 6],
    ]);
  });

  it("clicking empty panel space clears the tint", async () => {
    installMockApi();
    const root = mount();
    const app = createApp(root, "");
    await app.start();

    click(root.querySelector('g.node[data-artifact="lab"][data-state="C"] rect')!);
    await app.idle();
    const w = () =>
      root
        .querySelector('g.node[data-artifact="patient"][data-state="W"] rect')!
        .getAttribute("fill");
    expect(w()).not.toBe("#ffffff");

    click(root.querySelector('g.node[data-artifact="patient"]')!.closest("svg")!);
    await app.idle();
    expect(w()).toBe("#ffffff");
  });

  it("an anchor with no relations tints nothing", async () => {
    installMockApi({
      "/api/highlight": () => ({
        anchor: { artifact: "lab", state: "A" },
        related: [],
      }),
    });
    const root = mount();
    const app = createApp(root, "");
    await app.start();

    click(root.querySelector('g.node[data-artifact="lab"][data-state="A"] rect')!);
    await app.idle();

    for (const rect of root.querySelectorAll("g.node rect")) {
      expect(rect.getAttribute("fill")).toBe("#ffffff");
    }
  });

  it("a transition anchor tints the related transition and state", async () => {
    installMockApi();
    const root = mount();
    const app = createApp(root, "");
    await app.start();

    const edge = root.querySelector(
      'g.edge[data-artifact="lab"][data-from="C"][data-to="D"]',
    );
    expect(edge).not.toBeNull();
    click(edge!.querySelector("path")!);
    await app.idle();

    // fixture: patient state W via transition conf 0.5, move Y->Z conf 0.5
    const w = root.querySelector(
      'g.node[data-artifact="patient"][data-state="W"] rect',
    )!;
    expect(w.getAttribute("fill")).not.toBe("#ffffff");
    const move = root.querySelector(
      'g.edge[data-artifact="patient"][data-from="Y"][data-to="Z"] path',
    )!;
    expect(move.getAttribute("stroke")).not.toBe("#555");
  });
});
