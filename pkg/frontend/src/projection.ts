// 2D projection scatter. Dots are employees at server-provided coordinates,
// colored by their cluster label with the same palette the group glyphs use.

import { clear, el, groupColor, svg } from "./render.js";
import type { Bus, Highlight } from "./state.js";
import type { ClustersPayload, ProjectionPayload } from "./types.js";

const W = 260;
const H = 260;
const PAD = 14;

export class ProjectionView {
    private root: HTMLElement;

    constructor(container: HTMLElement, private bus: Bus) {
        this.root = el("div", { class: "projection" });
        container.appendChild(this.root);
        bus.on("highlight", (h) => this.applyHighlight(h as Highlight | null));
    }

    render(projection: ProjectionPayload, clusters: ClustersPayload): void {
        clear(this.root);
        const ids = Object.keys(projection.coordinates);
        if (ids.length === 0) return;
        const xs = ids.map((e) => projection.coordinates[e][0]);
        const ys = ids.map((e) => projection.coordinates[e][1]);
        const xmin = Math.min(...xs), xmax = Math.max(...xs);
        const ymin = Math.min(...ys), ymax = Math.max(...ys);
        const sx = (x: number) => xmax > xmin ? PAD + ((x - xmin) / (xmax - xmin)) * (W - 2 * PAD) : W / 2;
        const sy = (y: number) => ymax > ymin ? PAD + ((y - ymin) / (ymax - ymin)) * (H - 2 * PAD) : H / 2;

        const node = svg("svg", { width: W, height: H, class: "projection-svg" });
        for (const eid of ids) {
            const [x, y] = projection.coordinates[eid];
            const dot = svg("circle", {
                cx: sx(x), cy: sy(y), r: 4,
                fill: groupColor(clusters.assignments[eid] ?? 0),
                class: "proj-dot", "data-employee": eid,
            });
            dot.appendChild(svg("title", {}, eid));
            dot.addEventListener("click", () => {
                this.bus.emit("highlight", { kind: "employee", id: eid });
            });
            node.appendChild(dot);
        }
        this.root.appendChild(node);
    }

    private applyHighlight(h: Highlight | null): void {
        for (const node of this.root.querySelectorAll(".highlight")) node.classList.remove("highlight");
        if (!h || h.kind !== "employee") return;
        for (const node of this.root.querySelectorAll(`[data-employee="${h.id}"]`)) {
            node.classList.add("highlight");
        }
    }
}
