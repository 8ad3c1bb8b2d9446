// The interactive evaluation loop, end to end against the stateful fake:
// weight slider to zero blanks the matrix row, a radar ribbon click
// highlights the matrix column, exclusion hides the row, and stale reads
// recover silently.

import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { App } from "../src/app.js";
import { FakeServer } from "./fake_server.js";

describe("App", () => {
    let server: FakeServer;
    let app: App;
    let root: HTMLElement;

    beforeEach(async () => {
        document.body.innerHTML = "";
        root = document.createElement("div");
        document.body.appendChild(root);
        server = new FakeServer();
        app = new App(root, new ApiClient("", server.fetch));
        await app.start();
        await app.idle();
    });

    function matrixCells(categoryId: string): SVGRectElement[] {
        return [...root.querySelectorAll<SVGRectElement>(`rect.cell[data-category="${categoryId}"]`)];
    }

    it("starts with a rendered matrix, glyphs, and projection", () => {
        expect(matrixCells("alpha").length).toBe(2);
        expect(root.querySelectorAll(".glyph").length).toBe(1);
        expect(root.querySelectorAll(".ribbon").length).toBe(2);
        expect(root.querySelectorAll(".proj-dot").length).toBe(2);
        expect(root.querySelector(".version-label")!.textContent).toBe("v1");
    });

    it("dragging a weight slider to zero blanks that matrix row", async () => {
        expect(matrixCells("alpha").some((c) => c.classList.contains("blank"))).toBe(false);

        const slider = root.querySelector<HTMLInputElement>(
            'input.weight-slider[data-category="alpha"]')!;
        slider.value = "0";
        slider.dispatchEvent(new Event("change"));
        await app.idle();

        const cells = matrixCells("alpha");
        expect(cells.length).toBe(2);
        expect(cells.every((c) => c.classList.contains("blank"))).toBe(true);
        // the other row is untouched and the whole UI moved to the new version
        expect(matrixCells("beta").every((c) => c.classList.contains("blank"))).toBe(false);
        expect(root.querySelector(".version-label")!.textContent).toBe("v2");
        expect(server.entries.alpha.weight).toBe(0);
    });

    it("clicking a radar ribbon highlights the matching matrix column", () => {
        root.querySelector<SVGPolygonElement>('.ribbon[data-member="e2"]')!
            .dispatchEvent(new MouseEvent("click"));

        const lit = [...root.querySelectorAll('rect.cell.highlight')];
        expect(lit.length).toBe(2);
        expect(lit.every((c) => c.getAttribute("data-employee") === "e2")).toBe(true);
        // linking is bijective: the projection dot for e2 lights up, e1 does not
        expect(root.querySelector('.proj-dot[data-employee="e2"]')!.classList.contains("highlight")).toBe(true);
        expect(root.querySelector('.proj-dot[data-employee="e1"]')!.classList.contains("highlight")).toBe(false);
    });

    it("excluding a category removes its row on refresh", async () => {
        const toggle = root.querySelector<HTMLInputElement>(
            '.priority-row[data-category="beta"] .included-toggle')!;
        toggle.checked = false;
        toggle.dispatchEvent(new Event("change"));
        await app.idle();

        expect(matrixCells("beta")).toHaveLength(0);
        expect(matrixCells("alpha")).toHaveLength(2);
    });

    it("sort clicks request a server-side re-sort", async () => {
        root.querySelector<SVGRectElement>('.col-header[data-employee="e2"] .header-hit')!
            .dispatchEvent(new MouseEvent("click"));
        await app.idle();
        const sorted = server.requests.filter((r) =>
            r.includes("sort_axis=categories") && r.includes("sort_key=e2"));
        expect(sorted.length).toBe(1);
    });

    it("meta-click pins an employee and sends the pins parameter", async () => {
        root.querySelector<SVGRectElement>('.col-header[data-employee="e2"] .header-hit')!
            .dispatchEvent(new MouseEvent("click", { metaKey: true }));
        await app.idle();
        expect(server.requests.some((r) => r.includes("pins=e2"))).toBe(true);
        const labels = [...root.querySelectorAll(".col-header .header-label")];
        expect(labels[0].textContent).toBe("e2");
        expect(labels[0].classList.contains("pinned")).toBe(true);
    });

    it("recovers silently when a read hits a stale version", async () => {
        server.bump(); // a writer elsewhere moved the session forward
        root.querySelector<SVGRectElement>('.col-header[data-employee="e1"] .header-hit')!
            .dispatchEvent(new MouseEvent("click"));
        await app.idle();

        expect(document.querySelectorAll(".toast")).toHaveLength(0);
        expect(root.querySelector(".version-label")!.textContent).toBe("v2");
        expect(app.state.version).toBe(2);
    });

    it("surfaces API errors as toasts without breaking the queue", async () => {
        // out-of-range weight: server rejects, UI toasts, next action still works
        app.bus.emit("set-weight", "alpha", 101);
        await app.idle();
        expect(document.querySelectorAll(".toast").length).toBe(1);
        expect(server.entries.alpha.weight).toBe(50);

        root.querySelector<SVGRectElement>('.col-header[data-employee="e1"] .header-hit')!
            .dispatchEvent(new MouseEvent("click"));
        await app.idle();
        expect(server.requests.some((r) => r.includes("sort_key=e1"))).toBe(true);
        expect(root.querySelector(".version-label")!.textContent).toBe("v1");
    });
});
