/** App wiring: URL round-trips, panel layout, stale-response handling,
 * and the error banner. */

import { afterEach, describe, expect, it, vi } from "vitest";

import { createApp } from "../src/app";
import {
  click,
  installMockApi,
  interactionsAll,
  lastCallTo,
  mount,
  projectionPatient,
} from "./helpers";

afterEach(() => {
  vi.unstubAllGlobals();
  document.body.innerHTML = "";
  history.replaceState(null, "", "/");
});

describe("view state URL round-trip", () => {
  it("reissues the identical interactions query after a reload", async () => {
    const mock = installMockApi();
    const app1 = createApp(mount(), "");
    await app1.start();

    // sort by support, then set a support floor
    click(document.querySelector('th[data-measure="support"]')!);
    await app1.idle();
    const floor = document.querySelector(
      'input[data-measure="support"]',
    ) as HTMLInputElement;
    floor.value = "0.05";
    floor.dispatchEvent(new Event("change", { bubbles: true }));
    await app1.idle();

    const issued = lastCallTo(mock.calls, "/api/interactions");
    const saved = app1.currentSearch();
    expect(window.location.search).toBe(`?${saved}`);

    document.body.innerHTML = "";
    const app2 = createApp(mount(), saved);
    await app2.start();
    expect(lastCallTo(mock.calls, "/api/interactions")).toBe(issued);
  });

  it("restores an anchor from the URL and applies its highlight", async () => {
    installMockApi();
    const root = mount();
    const app = createApp(root, "?anchor=lab%3A%3AC");
    await app.start();
    await app.idle();

    const w = root.querySelector(
      'g.node[data-artifact="patient"][data-state="W"] rect',
    )!;
    expect(w.getAttribute("fill")).not.toBe("#ffffff");
  });

  it("encodes option toggles into both the URL and the issued query", async () => {
    const mock = installMockApi();
    const root = mount();
    const app = createApp(root, "");
    await app.start();

    const boxes = [...root.querySelectorAll('.flags input[type="checkbox"]')];
    const undefinedBox = boxes[1] as HTMLInputElement; // boundary, undefined
    undefinedBox.checked = true;
    undefinedBox.dispatchEvent(new Event("change", { bubbles: true }));
    await app.idle();

    expect(app.currentSearch()).toContain("include_undefined=true");
    expect(lastCallTo(mock.calls, "/api/interactions")).toContain(
      "include_undefined=true",
    );
  });
});

describe("model panels", () => {
  it("renders the composite plus one panel per artifact", async () => {
    installMockApi();
    const root = mount();
    await createApp(root, "").start();

    const titles = [...root.querySelectorAll("section.panel h3")].map(
      (h) => h.textContent,
    );
    expect(titles).toEqual(["composite", "patient", "lab"]);
  });

  it("renders a single panel for a one-artifact model", async () => {
    installMockApi({
      "/api/model": () => projectionPatient,
      "/api/interactions": () => ({ records: [] }),
    });
    const root = mount();
    await createApp(root, "").start();

    const panels = root.querySelectorAll("section.panel");
    expect(panels.length).toBe(1);
    expect(panels[0]!.querySelector("h3")!.textContent).toBe("patient");
  });

  it("fetches the chosen projection for the composite panel", async () => {
    const mock = installMockApi();
    const root = mount();
    const app = createApp(root, "?proj=lab");
    await app.start();

    const calls = mock.calls.filter((c) => c.includes("/api/model/projection"));
    expect(calls.some((c) => c.endsWith("artifacts=lab"))).toBe(true);
    const title = root.querySelector(".composite-host h3")!.textContent;
    expect(title).toBe("projection: lab");
  });
});

describe("fetch lifecycle", () => {
  it("drops an interactions response that was overtaken", async () => {
    let release!: (doc: unknown) => void;
    const slow = new Promise((resolve) => {
      release = resolve;
    });
    const small = { records: interactionsAll.records.slice(0, 2) };
    let call = 0;
    installMockApi({
      "/api/interactions": () => {
        call += 1;
        if (call === 2) return slow;
        if (call === 3) return small;
        return interactionsAll;
      },
    });

    const root = mount();
    const app = createApp(root, "");
    await app.start();

    // two quick sort changes: the first answer is slow and must lose
    click(root.querySelector('th[data-measure="support"]')!);
    click(root.querySelector('th[data-measure="cosine"]')!);
    release(interactionsAll);
    await app.idle();

    const rows = root.querySelectorAll("table.interactions tbody tr");
    expect(rows.length).toBe(small.records.length);
  });

  it("shows an error banner when the model fetch fails", async () => {
    installMockApi({
      "/api/model": () => ({
        ok: false,
        status: 500,
        statusText: "Internal Server Error",
        json: async () => ({ error: "boom" }),
      }),
    });
    const root = mount();
    await createApp(root, "").start();

    const banner = root.querySelector(".error-banner") as HTMLElement;
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain("500");
    expect(banner.textContent).toContain("boom");
  });
});
