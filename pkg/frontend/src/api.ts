/** Typed client for the review service's JSON API.
 *
 * The fetch function is injected so tests can drive the client with
 * canned responses; the browser entry point passes the real fetch.
 */

import {
    GraphResponse,
    KbIndex,
    MatchReport,
    ReviewRequest,
    ReviewResponse,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
    /** HTTP status; 0 means the request never reached the service. */
    readonly status: number;
    /** Service error code ("StaleVersion", "UnknownGraph", ...). */
    readonly code: string;

    constructor(status: number, code: string, message: string) {
        super(message);
        this.status = status;
        this.code = code;
    }
}

export class ApiClient {
    private readonly fetchFn: FetchLike;
    private readonly base: string;

    constructor(fetchFn?: FetchLike, base = "") {
        this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
        this.base = base;
    }

    private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
        let res: Response;
        try {
            res = await this.fetchFn(this.base + path, {
                method,
                headers: body === undefined
                    ? undefined
                    : { "content-type": "application/json" },
                body: body === undefined ? undefined : JSON.stringify(body),
            });
        } catch (err) {
            throw new ApiError(0, "Network", String(err));
        }
        if (!res.ok) {
            let code = `Http${res.status}`;
            let message = res.statusText;
            try {
                const doc = await res.json();
                if (typeof doc?.code === "string") {
                    code = doc.code;
                }
                if (typeof doc?.message === "string") {
                    message = doc.message;
                }
            } catch {
                // Non-JSON error body; the status code has to do.
            }
            throw new ApiError(res.status, code, message);
        }
        return res.json() as Promise<T>;
    }

    getVersion(): Promise<{ version: number }> {
        return this.request("GET", "/api/version");
    }

    getKb(): Promise<KbIndex> {
        return this.request("GET", "/api/kb");
    }

    getGraph(graphId: string): Promise<GraphResponse> {
        return this.request("GET", `/api/graphs/${encodeURIComponent(graphId)}`);
    }

    match(targetGraphId: string, k = 5): Promise<MatchReport> {
        return this.request("POST", "/api/match", { target_graph_id: targetGraphId, k });
    }

    submitReview(req: ReviewRequest): Promise<ReviewResponse> {
        return this.request("POST", "/api/reviews", req);
    }
}
