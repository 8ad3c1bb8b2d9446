// Shared view state plus a tiny event bus for cross-view linking.
// Highlights are bijective on ids: one selected entity per kind at a time.

import type { Direction, GroupBy, SortAxis } from "./types.js";

export type HighlightKind = "employee" | "category" | "axis" | "group";

export interface Highlight {
    kind: HighlightKind;
    id: string;
}

export interface SortState {
    axis?: SortAxis;
    key?: string;
    direction: Direction;
}

export class ViewState {
    sessionId = "";
    version = 0;
    groupBy: GroupBy = "shift";
    selectedGroup: string | null = null;
    pinned: string[] = [];
    sort: SortState = { direction: "descending" };
    highlight: Highlight | null = null;
    sliderPositions: Record<string, number> = {};
    clusterK = 6;
}

type Handler = (...args: unknown[]) => void;

export class Bus {
    private handlers: Record<string, Handler[]> = {};

    on(event: string, handler: Handler): void {
        (this.handlers[event] ??= []).push(handler);
    }

    emit(event: string, ...args: unknown[]): void {
        for (const h of this.handlers[event] ?? []) h(...args);
    }
}
