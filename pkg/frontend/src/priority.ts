// Priority adjustment panel: one row per category with an inclusion toggle,
// a 0-100 weight slider, and the survey-rating histogram with its mean
// marked in red. Slider commits go through the app so views refresh together.

import { clear, el, svg } from "./render.js";
import type { Bus } from "./state.js";
import type { HistogramPayload, WeightsPayload } from "./types.js";

const HIST_W = 101; // one pixel column per rating value
const HIST_H = 28;

export class PriorityView {
    private root: HTMLElement;

    constructor(container: HTMLElement, private bus: Bus) {
        this.root = el("div", { class: "priority" });
        container.appendChild(this.root);
    }

    render(weights: WeightsPayload, histograms: Record<string, HistogramPayload>): void {
        clear(this.root);
        for (const cid of Object.keys(weights.entries).sort()) {
            const entry = weights.entries[cid];
            const row = el("div", { class: "priority-row", "data-category": cid });

            const toggle = el("input", { type: "checkbox", class: "included-toggle" }) as HTMLInputElement;
            toggle.checked = entry.included;
            toggle.addEventListener("change", () => {
                this.bus.emit("set-included", cid, toggle.checked);
            });

            const name = el("span", { class: "category-name" }, cid);
            name.addEventListener("click", () => {
                this.bus.emit("highlight", { kind: "category", id: cid });
            });

            const slider = el("input", {
                type: "range", min: 0, max: 100, step: 0.5,
                class: "weight-slider", "data-category": cid,
            }) as HTMLInputElement;
            slider.value = String(entry.weight);
            const readout = el("span", { class: "weight-readout" }, String(entry.weight));
            slider.addEventListener("input", () => {
                readout.textContent = slider.value;
            });
            slider.addEventListener("change", () => {
                this.bus.emit("set-weight", cid, Number(slider.value));
            });

            row.append(toggle, name, this.histogram(histograms[cid]), slider, readout);
            if (!entry.included) row.classList.add("excluded");
            this.root.appendChild(row);
        }
    }

    private histogram(payload: HistogramPayload | undefined): SVGSVGElement {
        const node = svg("svg", { width: HIST_W, height: HIST_H, class: "histogram" });
        if (!payload) return node;
        const max = Math.max(...payload.counts, 1);
        payload.counts.forEach((count, rating) => {
            if (count === 0) return;
            const h = (count / max) * (HIST_H - 2);
            node.appendChild(svg("rect", {
                x: rating, y: HIST_H - h, width: 1, height: h, class: "hist-bar",
            }));
        });
        if (payload.mean !== null) {
            node.appendChild(svg("line", {
                x1: payload.mean, x2: payload.mean, y1: 0, y2: HIST_H,
                class: "mean-marker",
            }));
        }
        return node;
    }

    slider(categoryId: string): HTMLInputElement | null {
        return this.root.querySelector(`input.weight-slider[data-category="${categoryId}"]`);
    }
}
