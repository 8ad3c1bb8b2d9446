// Thin typed client over the session API. Injected fetch keeps tests offline.

import type {
    CellDetail,
    ClustersPayload,
    ContextView,
    DandelionPayload,
    GroupBy,
    GroupsPayload,
    HistogramPayload,
    MatrixPayload,
    MatrixQuery,
    ProjectionPayload,
    RadarPayload,
    SessionInfo,
    WeightsPayload,
} from "./types.js";

export class ApiError extends Error {
    constructor(public status: number, message: string) {
        super(message);
    }
}

export class StaleVersionError extends ApiError {
    constructor(public suppliedVersion: number, public currentVersion: number) {
        super(409, `version ${suppliedVersion} is stale, server is at ${currentVersion}`);
    }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
    constructor(
        private baseUrl: string = "",
        private fetchFn: FetchLike = (url, init) => globalThis.fetch(url, init),
    ) {}

    private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
        const init: RequestInit = { method };
        if (body !== undefined) {
            init.headers = { "content-type": "application/json" };
            init.body = JSON.stringify(body);
        }
        const resp = await this.fetchFn(this.baseUrl + path, init);
        const payload = await resp.json();
        if (resp.status === 409) {
            const detail = payload.detail ?? {};
            throw new StaleVersionError(detail.supplied_version, detail.current_version);
        }
        if (!resp.ok) {
            const detail = payload.detail;
            throw new ApiError(resp.status, typeof detail === "string" ? detail : JSON.stringify(detail));
        }
        return payload as T;
    }

    private query(params: Record<string, string | number | undefined>): string {
        const pairs = Object.entries(params).filter(([, v]) => v !== undefined);
        if (pairs.length === 0) return "";
        const search = new URLSearchParams();
        for (const [k, v] of pairs) search.set(k, String(v));
        return "?" + search.toString();
    }

    createSession(datasetId?: string): Promise<SessionInfo> {
        return this.request("POST", "/sessions", datasetId ? { dataset_id: datasetId } : {});
    }

    getMatrix(sessionId: string, q: MatrixQuery = {}, version?: number): Promise<MatrixPayload> {
        return this.request("GET", `/sessions/${sessionId}/matrix` + this.query({
            sort_axis: q.sort_axis,
            sort_key: q.sort_key,
            direction: q.direction,
            pins: q.pins && q.pins.length ? q.pins.join(",") : undefined,
            version,
        }));
    }

    getCell(sessionId: string, categoryId: string, employeeId: string): Promise<CellDetail> {
        return this.request("GET", `/sessions/${sessionId}/matrix/cell` + this.query({
            category_id: categoryId,
            employee_id: employeeId,
        }));
    }

    getWeights(sessionId: string, version?: number): Promise<WeightsPayload> {
        return this.request("GET", `/sessions/${sessionId}/weights` + this.query({ version }));
    }

    putWeight(sessionId: string, categoryId: string, weight: number): Promise<{ version: number }> {
        return this.request("PUT", `/sessions/${sessionId}/weights/${categoryId}`, { weight });
    }

    putIncluded(sessionId: string, categoryId: string, included: boolean): Promise<{ version: number }> {
        return this.request("PUT", `/sessions/${sessionId}/weights/${categoryId}/included`, { included });
    }

    getHistogram(sessionId: string, categoryId: string): Promise<HistogramPayload> {
        return this.request("GET", `/sessions/${sessionId}/weights/${categoryId}/histogram`);
    }

    putContext(sessionId: string, body: {
        time_range?: [string, string];
        behaviors?: string[];
        record_types?: string[];
    }): Promise<{ context: ContextView; version: number }> {
        return this.request("PUT", `/sessions/${sessionId}/context`, body);
    }

    getGroups(sessionId: string, by: GroupBy, k?: number, version?: number): Promise<GroupsPayload> {
        return this.request("GET", `/sessions/${sessionId}/groups` + this.query({ by, k, version }));
    }

    getDandelion(sessionId: string, by: GroupBy, kTop?: number, k?: number, version?: number): Promise<DandelionPayload> {
        return this.request("GET", `/sessions/${sessionId}/dandelion` + this.query({
            by, k_top: kTop, k, version,
        }));
    }

    getRadar(sessionId: string, groupId: string, by: GroupBy, k?: number, version?: number): Promise<RadarPayload> {
        return this.request("GET", `/sessions/${sessionId}/radar/${groupId}` + this.query({ by, k, version }));
    }

    getClusters(sessionId: string, k?: number, seed?: number, version?: number): Promise<ClustersPayload> {
        return this.request("GET", `/sessions/${sessionId}/clusters` + this.query({ k, seed, version }));
    }

    getProjection(sessionId: string, opts: {
        perplexity?: number;
        iterations?: number;
        seed?: number;
    } = {}, version?: number): Promise<ProjectionPayload> {
        return this.request("GET", `/sessions/${sessionId}/projection` + this.query({
            perplexity: opts.perplexity,
            iterations: opts.iterations,
            seed: opts.seed,
            version,
        }));
    }
}
