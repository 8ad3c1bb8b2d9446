import { beforeEach, describe, expect, it } from "vitest";

import { PriorityView } from "../src/priority.js";
import { Bus } from "../src/state.js";
import type { HistogramPayload, WeightsPayload } from "../src/types.js";

const WEIGHTS: WeightsPayload = {
    source: "officers",
    profile_version: 1,
    version: 1,
    entries: {
        alpha: { weight: 64, included: true, rating_count: 4, rating_mean: 64 },
        beta: { weight: 30, included: false, rating_count: 0, rating_mean: null },
    },
};

function histogram(cid: string, pairs: [number, number][], mean: number | null): HistogramPayload {
    const counts = new Array(101).fill(0);
    for (const [rating, n] of pairs) counts[rating] = n;
    return { category_id: cid, counts, mean, version: 1 };
}

const HISTOGRAMS = {
    alpha: histogram("alpha", [[60, 2], [68, 2]], 64),
    beta: histogram("beta", [], null),
};

describe("PriorityView", () => {
    let bus: Bus;
    let container: HTMLElement;
    let view: PriorityView;

    beforeEach(() => {
        document.body.innerHTML = "";
        container = document.createElement("div");
        document.body.appendChild(container);
        bus = new Bus();
        view = new PriorityView(container, bus);
        view.render(WEIGHTS, HISTOGRAMS);
    });

    it("renders one row per category with the server weight", () => {
        expect(container.querySelectorAll(".priority-row")).toHaveLength(2);
        expect(view.slider("alpha")!.value).toBe("64");
        expect(view.slider("beta")!.value).toBe("30");
    });

    it("marks excluded categories and reflects the toggle state", () => {
        const beta = container.querySelector('.priority-row[data-category="beta"]')!;
        expect(beta.classList.contains("excluded")).toBe(true);
        expect(beta.querySelector<HTMLInputElement>(".included-toggle")!.checked).toBe(false);
    });

    it("histogram bars recount to the rating total and carry a red mean marker", () => {
        const row = container.querySelector('.priority-row[data-category="alpha"]')!;
        const bars = [...row.querySelectorAll<SVGRectElement>(".hist-bar")];
        // two rating values, so two 1px columns; the payload count is 4
        expect(bars).toHaveLength(2);
        const marker = row.querySelector<SVGLineElement>(".mean-marker")!;
        expect(marker.getAttribute("x1")).toBe("64");
    });

    it("omits the mean marker when there are no ratings", () => {
        const row = container.querySelector('.priority-row[data-category="beta"]')!;
        expect(row.querySelector(".mean-marker")).toBeNull();
    });

    it("slider change commits the new weight through the bus", () => {
        const seen: unknown[][] = [];
        bus.on("set-weight", (...args) => seen.push(args));
        const slider = view.slider("alpha")!;
        slider.value = "0";
        slider.dispatchEvent(new Event("change"));
        expect(seen).toEqual([["alpha", 0]]);
    });

    it("inclusion toggle commits through the bus", () => {
        const seen: unknown[][] = [];
        bus.on("set-included", (...args) => seen.push(args));
        const toggle = container.querySelector<HTMLInputElement>(
            '.priority-row[data-category="beta"] .included-toggle')!;
        toggle.checked = true;
        toggle.dispatchEvent(new Event("change"));
        expect(seen).toEqual([["beta", true]]);
    });
});
