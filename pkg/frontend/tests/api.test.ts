import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, FetchLike } from "../src/api.js";

function respond(status: number, body: string, statusText = ""): FetchLike {
    return async () => new Response(body, {
        status,
        statusText,
        headers: { "content-type": "application/json" },
    });
}

describe("ApiClient", () => {
    it("parses a successful response", async () => {
        const client = new ApiClient(respond(200, '{"version": 4}'));
        expect(await client.getVersion()).toEqual({ version: 4 });
    });

    it("surfaces service error codes", async () => {
        const client = new ApiClient(
            respond(409, '{"code": "StaleVersion", "message": "KB is at 3"}'));
        const err = await client.getKb().catch(e => e);
        expect(err).toBeInstanceOf(ApiError);
        expect(err.status).toBe(409);
        expect(err.code).toBe("StaleVersion");
        expect(err.message).toBe("KB is at 3");
    });

    it("falls back to the HTTP status on a non-JSON error body", async () => {
        const client = new ApiClient(
            respond(500, "<html>broken</html>", "Internal Server Error"));
        const err = await client.getKb().catch(e => e);
        expect(err.status).toBe(500);
        expect(err.code).toBe("Http500");
        expect(err.message).toBe("Internal Server Error");
    });

    it("maps a fetch-level failure to status 0", async () => {
        const client = new ApiClient(async () => {
            throw new TypeError("fetch failed");
        });
        const err = await client.getVersion().catch(e => e);
        expect(err).toBeInstanceOf(ApiError);
        expect(err.status).toBe(0);
        expect(err.code).toBe("Network");
    });

    it("escapes graph ids in the path", async () => {
        let seen = "";
        const client = new ApiClient(async input => {
            seen = String(input);
            return new Response("{}", { status: 200 });
        });
        await client.getGraph("f 7/é");
        expect(seen).toBe("/api/graphs/f%207%2F%C3%A9");
    });

    it("posts the match request as JSON", async () => {
        let body = "";
        const client = new ApiClient(async (_input, init) => {
            body = String(init?.body);
            return new Response('{"results": []}', { status: 200 });
        });
        await client.match("f7", 3);
        expect(JSON.parse(body)).toEqual({ target_graph_id: "f7", k: 3 });
    });
});
