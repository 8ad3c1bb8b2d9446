// Wires the four views to the session API.
//
// All event work funnels through one promise chain, so at most one mutation
// is in flight and every read that follows it sees the bumped version. A
// 409 from a racing read resolves by adopting the server's version and
// refetching once.

import { ApiClient, ApiError, StaleVersionError } from "./api.js";
import { DandelionView, RadarView } from "./glyphs.js";
import { HeatmapView } from "./heatmap.js";
import { PriorityView } from "./priority.js";
import { ProjectionView } from "./projection.js";
import { clear, el } from "./render.js";
import { Bus, ViewState } from "./state.js";
import { toast } from "./toast.js";
import type {
    DandelionPayload,
    GroupBy,
    HistogramPayload,
    MatrixQuery,
    SortAxis,
} from "./types.js";

export class App {
    readonly state = new ViewState();
    readonly bus = new Bus();

    private priority: PriorityView;
    private heatmap: HeatmapView;
    private dandelion: DandelionView;
    private radar: RadarView;
    private projection: ProjectionView;
    private versionLabel: HTMLElement;
    private histograms: Record<string, HistogramPayload> = {};
    private work: Promise<unknown> = Promise.resolve();

    constructor(root: HTMLElement, private api: ApiClient) {
        clear(root);
        const toolbar = el("div", { class: "toolbar" });
        const groupSelect = el("select", { id: "group-by" }) as HTMLSelectElement;
        for (const by of ["shift", "district", "cluster"]) {
            groupSelect.appendChild(el("option", { value: by }, `group by ${by}`));
        }
        groupSelect.addEventListener("change", () => {
            this.enqueue(() => this.setGroupBy(groupSelect.value as GroupBy));
        });
        const kInput = el("input", { type: "number", min: 1, max: 12, value: 6, id: "cluster-k" }) as HTMLInputElement;
        kInput.addEventListener("change", () => {
            this.enqueue(() => this.setClusterK(Number(kInput.value)));
        });
        this.versionLabel = el("span", { class: "version-label" }, "");
        toolbar.append(groupSelect, el("label", { for: "cluster-k" }, "clusters"), kInput, this.versionLabel);

        const panels = el("div", { class: "panels" });
        const priorityPanel = el("section", { id: "priority-panel" });
        priorityPanel.appendChild(el("h2", {}, "Priorities"));
        const matrixPanel = el("section", { id: "matrix-panel" });
        matrixPanel.appendChild(el("h2", {}, "Performance matrix"));
        const groupPanel = el("section", { id: "group-panel" });
        groupPanel.appendChild(el("h2", {}, "Groups"));
        const projectionPanel = el("section", { id: "projection-panel" });
        projectionPanel.appendChild(el("h2", {}, "Projection"));
        panels.append(priorityPanel, matrixPanel, groupPanel, projectionPanel);
        root.append(toolbar, panels);

        this.priority = new PriorityView(priorityPanel, this.bus);
        this.heatmap = new HeatmapView(matrixPanel, this.bus);
        this.dandelion = new DandelionView(groupPanel, this.bus);
        this.radar = new RadarView(groupPanel, this.bus);
        this.projection = new ProjectionView(projectionPanel, this.bus);

        this.bus.on("set-weight", (cid, value) => {
            this.enqueue(() => this.commitWeight(cid as string, value as number));
        });
        this.bus.on("set-included", (cid, included) => {
            this.enqueue(() => this.commitIncluded(cid as string, included as boolean));
        });
        this.bus.on("sort-by-employee", (eid) => {
            this.enqueue(() => this.sortBy("categories", eid as string));
        });
        this.bus.on("sort-by-category", (cid) => {
            this.enqueue(() => this.sortBy("employees", cid as string));
        });
        this.bus.on("toggle-pin", (eid) => {
            this.enqueue(() => this.togglePin(eid as string));
        });
        this.bus.on("select-group", (gid) => {
            this.state.selectedGroup = gid as string;
            this.enqueue(() => this.refreshGroups());
        });
        this.bus.on("cell-hover", (info) => {
            const { category_id, employee_id, x, y } = info as {
                category_id: string; employee_id: string; x: number; y: number;
            };
            this.enqueue(async () => {
                const detail = await this.api.getCell(this.state.sessionId, category_id, employee_id);
                this.heatmap.showTooltip(detail, x, y);
            });
        });
        this.bus.on("highlight", (h) => {
            this.state.highlight = h as ViewState["highlight"];
        });
    }

    async start(datasetId?: string): Promise<void> {
        const session = await this.api.createSession(datasetId);
        this.state.sessionId = session.session_id;
        this.state.version = session.version;
        // ratings never change within a session; fetch their histograms once
        const weights = await this.api.getWeights(this.state.sessionId);
        const pairs = await Promise.all(
            Object.keys(weights.entries).map(async (cid) =>
                [cid, await this.api.getHistogram(this.state.sessionId, cid)] as const),
        );
        this.histograms = Object.fromEntries(pairs);
        await this.refreshAll();
    }

    // Tests and callers can await quiescence of the event-driven work queue.
    async idle(): Promise<void> {
        let snapshot;
        do {
            snapshot = this.work;
            await snapshot.catch(() => undefined);
        } while (snapshot !== this.work);
    }

    private enqueue(task: () => Promise<void>): void {
        this.work = this.work.then(task).catch((err) => {
            toast(err instanceof Error ? err.message : String(err));
        });
    }

    private async guarded<T>(read: (version: number) => Promise<T>): Promise<T> {
        try {
            return await read(this.state.version);
        } catch (err) {
            if (err instanceof StaleVersionError) {
                // a mutation landed elsewhere: adopt its version and retry
                this.state.version = err.currentVersion;
                return await read(this.state.version);
            }
            throw err;
        }
    }

    private matrixQuery(): MatrixQuery {
        return {
            sort_axis: this.state.sort.axis,
            sort_key: this.state.sort.key,
            direction: this.state.sort.direction,
            pins: this.state.pinned,
        };
    }

    private async refreshMatrix(): Promise<void> {
        const sid = this.state.sessionId;
        const [weights, matrix] = await Promise.all([
            this.guarded((v) => this.api.getWeights(sid, v)),
            this.guarded((v) => this.api.getMatrix(sid, this.matrixQuery(), v)),
        ]);
        this.priority.render(weights, this.histograms);
        this.heatmap.render(matrix, weights);
        this.versionLabel.textContent = `v${matrix.version}`;
    }

    private async refreshGroups(): Promise<void> {
        const sid = this.state.sessionId;
        const by = this.state.groupBy;
        const k = this.state.clusterK;
        const [groups, dandelion] = await Promise.all([
            this.guarded((v) => this.api.getGroups(sid, by, k, v)),
            this.guarded((v) => this.api.getDandelion(sid, by, undefined, k, v)),
        ]);
        if (!this.state.selectedGroup || !groups.groups.some((g) => g.group_id === this.state.selectedGroup)) {
            this.state.selectedGroup = groups.groups[0]?.group_id ?? null;
        }
        this.dandelion.render(dandelion);
        if (this.state.selectedGroup) {
            const radar = await this.guarded((v) =>
                this.api.getRadar(sid, this.state.selectedGroup as string, by, k, v));
            const lengths = dandelion.groups[radar.group_id].lengths;
            const maxLength = Math.max(
                ...Object.values(dandelion.groups).flatMap((g) => Object.values(g.lengths)),
                0,
            );
            this.radar.render(radar, lengths, maxLength);
        }
    }

    private async refreshProjection(): Promise<void> {
        const sid = this.state.sessionId;
        const [projection, clusters] = await Promise.all([
            this.guarded((v) => this.api.getProjection(sid, {}, v)),
            this.guarded((v) => this.api.getClusters(sid, this.state.clusterK, undefined, v)),
        ]);
        this.projection.render(projection, clusters);
    }

    private async refreshAll(): Promise<void> {
        await this.refreshMatrix();
        await this.refreshGroups();
        await this.refreshProjection();
        this.bus.emit("highlight", this.state.highlight);
    }

    private async commitWeight(categoryId: string, weight: number): Promise<void> {
        this.state.sliderPositions[categoryId] = weight;
        const resp = await this.api.putWeight(this.state.sessionId, categoryId, weight);
        this.state.version = resp.version;
        await this.refreshAll();
    }

    private async commitIncluded(categoryId: string, included: boolean): Promise<void> {
        const resp = await this.api.putIncluded(this.state.sessionId, categoryId, included);
        this.state.version = resp.version;
        await this.refreshAll();
    }

    private async sortBy(axis: SortAxis, key: string): Promise<void> {
        const sort = this.state.sort;
        if (sort.axis === axis && sort.key === key) {
            sort.direction = sort.direction === "descending" ? "ascending" : "descending";
        } else {
            this.state.sort = { axis, key, direction: "descending" };
        }
        await this.refreshMatrix();
    }

    private async togglePin(employeeId: string): Promise<void> {
        const at = this.state.pinned.indexOf(employeeId);
        if (at >= 0) this.state.pinned.splice(at, 1);
        else this.state.pinned.push(employeeId);
        await this.refreshMatrix();
    }

    private async setGroupBy(by: GroupBy): Promise<void> {
        this.state.groupBy = by;
        this.state.selectedGroup = null;
        await this.refreshGroups();
    }

    private async setClusterK(k: number): Promise<void> {
        this.state.clusterK = k;
        await this.refreshProjection();
        if (this.state.groupBy === "cluster") await this.refreshGroups();
    }
}

export { ApiClient, ApiError, StaleVersionError };
