import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, StaleVersionError } from "../src/api.js";

function recordingClient(status = 200, payload: unknown = {}) {
    const calls: { url: string; init?: RequestInit }[] = [];
    const client = new ApiClient("", async (url, init) => {
        calls.push({ url, init });
        return new Response(JSON.stringify(payload), { status });
    });
    return { client, calls };
}

describe("ApiClient", () => {
    it("posts session creation with a json body", async () => {
        const { client, calls } = recordingClient(200, { session_id: "s1" });
        await client.createSession("d1");
        expect(calls[0].url).toBe("/sessions");
        expect(calls[0].init?.method).toBe("POST");
        expect(JSON.parse(String(calls[0].init?.body))).toEqual({ dataset_id: "d1" });
    });

    it("builds matrix queries from sort state and pins", async () => {
        const { client, calls } = recordingClient();
        await client.getMatrix("s1", {
            sort_axis: "employees", sort_key: "burglary", direction: "ascending",
            pins: ["e2", "e1"],
        }, 3);
        const url = new URL(calls[0].url, "http://x");
        expect(url.pathname).toBe("/sessions/s1/matrix");
        expect(url.searchParams.get("sort_axis")).toBe("employees");
        expect(url.searchParams.get("sort_key")).toBe("burglary");
        expect(url.searchParams.get("direction")).toBe("ascending");
        expect(url.searchParams.get("pins")).toBe("e2,e1");
        expect(url.searchParams.get("version")).toBe("3");
    });

    it("omits empty query parameters", async () => {
        const { client, calls } = recordingClient();
        await client.getMatrix("s1");
        expect(calls[0].url).toBe("/sessions/s1/matrix");
    });

    it("puts weight updates to the category path", async () => {
        const { client, calls } = recordingClient(200, { version: 2 });
        await client.putWeight("s1", "theft", 12.5);
        expect(calls[0].url).toBe("/sessions/s1/weights/theft");
        expect(calls[0].init?.method).toBe("PUT");
        expect(JSON.parse(String(calls[0].init?.body))).toEqual({ weight: 12.5 });
    });

    it("maps 409 to StaleVersionError with both versions", async () => {
        const { client } = recordingClient(409, {
            detail: { message: "stale version", supplied_version: 1, current_version: 5 },
        });
        const err = await client.getWeights("s1", 1).catch((e) => e);
        expect(err).toBeInstanceOf(StaleVersionError);
        expect(err.suppliedVersion).toBe(1);
        expect(err.currentVersion).toBe(5);
    });

    it("maps other failures to ApiError with the detail text", async () => {
        const { client } = recordingClient(404, { detail: "unknown category 'x'" });
        const err = await client.getHistogram("s1", "x").catch((e) => e);
        expect(err).toBeInstanceOf(ApiError);
        expect(err.status).toBe(404);
        expect(err.message).toContain("unknown category");
    });
});
