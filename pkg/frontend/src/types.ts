// Server payload shapes. The UI renders these verbatim: every number shown
// on screen comes from one of these fields, never from client-side math.

export interface SessionInfo {
    session_id: string;
    dataset_id: string;
    version: number;
    profile_version: number;
    context: ContextView;
    employees: number;
    records: number;
}

export interface ContextView {
    time_range: [string, string];
    behaviors: string[];
    record_types: string[];
}

export interface MatrixCell {
    category_id: string;
    employee_id: string;
    count: number;
    score: number;
    bin: number;
}

export interface ColorInfo {
    boundaries: number[];
    palette: string[];
    degenerate: boolean;
    blank_bin: number;
}

export interface MatrixPayload {
    employees: string[];
    categories: string[];
    pinned: string[];
    employee_totals: Record<string, number>;
    category_totals: Record<string, number>;
    grand_total: number;
    cells: MatrixCell[];
    color: ColorInfo | null;
    profile_version: number;
    version: number;
}

export interface CellDetail {
    score: number;
    count: number;
    weight: number;
    version: number;
}

export interface WeightEntryView {
    weight: number;
    included: boolean;
    rating_count: number;
    rating_mean: number | null;
}

export interface WeightsPayload {
    source: string;
    profile_version: number;
    entries: Record<string, WeightEntryView>;
    version: number;
}

export interface HistogramPayload {
    category_id: string;
    counts: number[];
    mean: number | null;
    version: number;
}

export interface GroupSummaryView {
    group_id: string;
    member_ids: string[];
    category_counts: Record<string, number>;
    top_categories: string[];
    total: number;
}

export interface GroupsPayload {
    by: string;
    version: number;
    groups: GroupSummaryView[];
}

export interface DandelionPayload {
    axes: string[];
    rotation_offset: number;
    transform: string;
    groups: Record<string, { lengths: Record<string, number>; counts: Record<string, number> }>;
    by: string;
    version: number;
}

export interface RadarPayload {
    group_id: string;
    axes: string[];
    member_order: string[];
    fractions: Record<string, Record<string, number>>;
    counts: Record<string, Record<string, number>>;
    axis_totals: Record<string, number>;
    inner_radius_fraction: number;
    rotation_offset: number;
    by: string;
    version: number;
}

export interface ClustersPayload {
    k: number;
    seed: number;
    assignments: Record<string, number>;
    centroids: number[][];
    inertia: number;
    iterations: number;
    version: number;
}

export interface ProjectionPayload {
    coordinates: Record<string, [number, number]>;
    seed: number;
    parameters: { perplexity: number; iterations: number; learning_rate: number };
    version: number;
}

export type GroupBy = "shift" | "district" | "cluster";
export type SortAxis = "employees" | "categories";
export type Direction = "ascending" | "descending";

export interface MatrixQuery {
    sort_axis?: SortAxis;
    sort_key?: string;
    direction?: Direction;
    pins?: string[];
}
