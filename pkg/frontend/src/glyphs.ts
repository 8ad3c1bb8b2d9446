// Radial group views: small-multiple dandelion glyphs (one per group,
// shared axes) and the per-member stacked radar for the selected group.
//
// Geometry only: axis lengths, fractions, counts, rotation all come from
// the server. Ribbon bands map member fractions linearly along the
// log-scaled axis length; that mixes scales on purpose and is flagged in a
// help tooltip.

import { clear, el, groupColor, svg } from "./render.js";
import type { Bus, Highlight } from "./state.js";
import type { DandelionPayload, RadarPayload } from "./types.js";

const R = 92; // glyph radius in px

function axisAngle(index: number, count: number, rotation: number): number {
    return rotation + (index * 2 * Math.PI) / count - Math.PI / 2;
}

function colorIndex(groupId: string, fallback: number): number {
    const m = /^cluster_(\d+)$/.exec(groupId);
    return m ? Number(m[1]) : fallback;
}

export class DandelionView {
    private root: HTMLElement;
    private payload: DandelionPayload | null = null;

    constructor(container: HTMLElement, private bus: Bus) {
        this.root = el("div", { class: "dandelions" });
        container.appendChild(this.root);
        bus.on("highlight", (h) => this.applyHighlight(h as Highlight | null));
    }

    render(payload: DandelionPayload): void {
        this.payload = payload;
        clear(this.root);
        const axes = payload.axes;
        const groupIds = Object.keys(payload.groups).sort();
        const maxLength = Math.max(
            ...groupIds.flatMap((g) => axes.map((a) => payload.groups[g].lengths[a])),
            0,
        );

        groupIds.forEach((gid, gi) => {
            const box = el("figure", { class: "glyph", "data-group": gid });
            const node = svg("svg", { width: 2 * R, height: 2 * R, viewBox: `0 0 ${2 * R} ${2 * R}` });
            const color = groupColor(colorIndex(gid, gi));

            axes.forEach((axis, i) => {
                const angle = axisAngle(i, axes.length, payload.rotation_offset);
                const len = maxLength > 0 ? (payload.groups[gid].lengths[axis] / maxLength) * (R - 14) : 0;
                const x2 = R + len * Math.cos(angle);
                const y2 = R + len * Math.sin(angle);
                const line = svg("line", {
                    x1: R, y1: R, x2, y2,
                    class: "dandelion-axis", "data-axis": axis, stroke: color,
                });
                const tip = svg("circle", {
                    cx: x2, cy: y2, r: 3,
                    class: "dandelion-tip", "data-axis": axis, fill: color,
                });
                const count = svg("text", {
                    x: x2, y: y2 - 6, class: "axis-count", "data-axis": axis,
                    "text-anchor": "middle", hidden: "hidden",
                }, String(payload.groups[gid].counts[axis]));
                for (const target of [line, tip]) {
                    target.addEventListener("click", () => {
                        this.bus.emit("highlight", { kind: "axis", id: axis });
                    });
                }
                node.append(line, tip, count);
            });

            const caption = el("figcaption", {}, gid);
            caption.style.color = color;
            caption.addEventListener("click", () => this.bus.emit("select-group", gid));
            box.append(node, caption);
            this.root.appendChild(box);
        });
    }

    // An axis highlight reveals each glyph's exact count on that axis.
    private applyHighlight(h: Highlight | null): void {
        for (const node of this.root.querySelectorAll(".highlight")) node.classList.remove("highlight");
        for (const node of this.root.querySelectorAll("text.axis-count")) node.setAttribute("hidden", "hidden");
        if (!h || h.kind !== "axis" || !this.payload) return;
        for (const node of this.root.querySelectorAll(`[data-axis="${h.id}"]`)) {
            node.classList.add("highlight");
            if (node.tagName === "text") node.removeAttribute("hidden");
        }
    }
}

export class RadarView {
    private root: HTMLElement;

    constructor(container: HTMLElement, private bus: Bus) {
        this.root = el("div", {
            class: "radar",
            title: "Band thickness is the member's fraction of the group total on each axis, "
                + "drawn along a log-scaled axis; thickness is comparable within an axis, not across axes.",
        });
        container.appendChild(this.root);
        bus.on("highlight", (h) => this.applyHighlight(h as Highlight | null));
    }

    render(radar: RadarPayload, axisLengths: Record<string, number>, maxLength: number): void {
        clear(this.root);
        const axes = radar.axes;
        if (axes.length === 0) return;
        const node = svg("svg", { width: 2 * R, height: 2 * R, viewBox: `0 0 ${2 * R} ${2 * R}` });
        const inner = radar.inner_radius_fraction * (R - 14);

        const axisLen = (a: string): number =>
            maxLength > 0 ? Math.max((axisLengths[a] / maxLength) * (R - 14), inner) : inner;

        node.appendChild(svg("circle", { cx: R, cy: R, r: inner, class: "radar-inner" }));
        axes.forEach((axis, i) => {
            const angle = axisAngle(i, axes.length, radar.rotation_offset);
            const len = axisLen(axis);
            node.appendChild(svg("line", {
                x1: R, y1: R,
                x2: R + len * Math.cos(angle), y2: R + len * Math.sin(angle),
                class: "radar-axis", "data-axis": axis,
            }));
        });

        // stack members outward from the inner circle in member_order
        const cumulative: Record<string, number> = {};
        for (const axis of axes) cumulative[axis] = 0;
        for (const member of radar.member_order) {
            const innerPts: string[] = [];
            const outerPts: string[] = [];
            axes.forEach((axis, i) => {
                const angle = axisAngle(i, axes.length, radar.rotation_offset);
                const span = axisLen(axis) - inner;
                const r0 = inner + cumulative[axis] * span;
                const r1 = inner + (cumulative[axis] + radar.fractions[member][axis]) * span;
                cumulative[axis] += radar.fractions[member][axis];
                innerPts.push(`${R + r0 * Math.cos(angle)},${R + r0 * Math.sin(angle)}`);
                outerPts.push(`${R + r1 * Math.cos(angle)},${R + r1 * Math.sin(angle)}`);
            });
            const band = svg("polygon", {
                points: [...outerPts, ...innerPts.reverse()].join(" "),
                class: "ribbon",
                "data-member": member,
            });
            band.addEventListener("click", () => {
                this.bus.emit("highlight", { kind: "employee", id: member });
            });
            node.appendChild(band);
        }

        const caption = el("div", { class: "radar-caption" }, `${radar.group_id} members, outer = larger share`);
        this.root.append(node, caption);
    }

    private applyHighlight(h: Highlight | null): void {
        for (const node of this.root.querySelectorAll(".highlight")) node.classList.remove("highlight");
        if (!h) return;
        const attr = h.kind === "employee" ? "data-member" : h.kind === "axis" ? "data-axis" : null;
        if (!attr) return;
        for (const node of this.root.querySelectorAll(`[${attr}="${h.id}"]`)) {
            node.classList.add("highlight");
        }
    }
}
