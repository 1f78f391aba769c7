/** The review loop: API calls in, state transitions out.
 *
 * Holds the single mutable reference to the view state and pushes every
 * new state through `present`; the browser entry point renders there,
 * tests capture it.  Failure handling follows two rules: a network
 * failure changes nothing except an offer to retry, and a stale-version
 * refusal refreshes the queue without discarding the reviewer's text.
 */

import { ApiClient, ApiError } from "./api.js";
import { Handlers } from "./render.js";
import {
    activeMatch,
    afterVerdict,
    canSubmit,
    gotoMatch,
    initialState,
    isStale,
    noteServerVersion,
    ViewState,
    withBanner,
    withBusy,
    withDraft,
    withGraphCached,
    withKb,
    withNote,
    withQueue,
    withTarget,
} from "./state.js";
import { ReviewRequest } from "./types.js";

export class ReviewController {
    private api: ApiClient;
    private present: (state: ViewState) => void;
    private _state: ViewState = initialState();
    private lastFailed: (() => void) | null = null;

    constructor(api: ApiClient, present: (state: ViewState) => void) {
        this.api = api;
        this.present = present;
    }

    get state(): ViewState {
        return this._state;
    }

    private set(next: ViewState): void {
        this._state = next;
        this.present(next);
    }

    readonly handlers: Handlers = {
        selectTarget: id => void this.selectTarget(id),
        showMatch: index => this.set(gotoMatch(this._state, index)),
        editDraft: text => this.set(withDraft(this._state, text)),
        editNote: text => this.set(withNote(this._state, text)),
        accept: () => void this.submitVerdict("accept"),
        reject: () => void this.submitVerdict("reject"),
        refresh: () => void this.refreshQueue(),
        retry: () => this.retryLast(),
    };

    async start(): Promise<void> {
        try {
            this.set(withKb(this._state, await this.api.getKb()));
        } catch (err) {
            this.offerRetry(err, () => void this.start());
        }
    }

    /** Record the version the service is at now; stale mode follows. */
    async checkVersion(): Promise<void> {
        try {
            const { version } = await this.api.getVersion();
            this.set(noteServerVersion(this._state, version));
        } catch {
            // A missed poll is not an event; the next one will tell.
        }
    }

    async selectTarget(graphId: string): Promise<void> {
        if (graphId === "") {
            return;
        }
        this.set(withBusy(this._state, true));
        try {
            const response = await this.api.getGraph(graphId);
            this.set(withTarget(this._state, graphId, response.graph));
            const report = await this.api.match(graphId);
            this.set(withQueue(this._state, report));
            await this.fetchSourceGraphs();
        } catch (err) {
            this.offerRetry(err, () => void this.selectTarget(graphId));
        } finally {
            this.set(withBusy(this._state, false));
        }
    }

    /** Load source graphs the queue refers to but the cache lacks. */
    private async fetchSourceGraphs(): Promise<void> {
        const wanted = new Set(this._state.queue.map(row => row.graph_id));
        for (const graphId of [...wanted].sort()) {
            if (graphId in this._state.graphCache) {
                continue;
            }
            try {
                const response = await this.api.getGraph(graphId);
                this.set(withGraphCached(this._state, response.graph));
            } catch {
                // Panel shows its loading placeholder; matching is unaffected.
            }
        }
    }

    async refreshQueue(options: { keepDraft?: boolean } = { keepDraft: true }):
            Promise<void> {
        const graphId = this._state.targetGraphId;
        if (graphId === null) {
            return;
        }
        this.set(withBusy(this._state, true));
        try {
            const report = await this.api.match(graphId);
            this.set(withQueue(this._state, report, options));
            await this.fetchSourceGraphs();
        } catch (err) {
            this.offerRetry(err, () => void this.refreshQueue(options));
        } finally {
            this.set(withBusy(this._state, false));
        }
    }

    async submitVerdict(decision: "accept" | "reject"): Promise<void> {
        const state = this._state;
        const row = activeMatch(state);
        if (row === null || !canSubmit(state)) {
            return;
        }
        const request: ReviewRequest = {
            match: {
                case_id: row.case_id,
                target_graph_id: state.targetGraphId ?? row.graph_id,
                mapping: row.mapping,
            },
            decision,
            note: state.noteDraft,
            expected_version: state.heldVersion,
        };
        if (decision === "accept") {
            request.edited_text = state.draft;
        }
        this.set(withBusy(state, true));
        try {
            const response = await this.api.submitReview(request);
            const message = decision === "accept"
                ? `accepted: case ${response.new_case_id} recorded on the target`
                : `rejected: note kept on case ${response.source_case_id}`;
            this.set(withBanner(afterVerdict(this._state, response.version),
                                { kind: "info", message }));
        } catch (err) {
            if (err instanceof ApiError && err.status === 409) {
                // Someone moved the KB first: requeue, keep the text box.
                await this.refreshQueue({ keepDraft: true });
                this.set(withBanner(this._state, {
                    kind: "info",
                    message: "the knowledge base changed; matches were " +
                        "recomputed and your text was kept",
                }));
            } else {
                this.offerRetry(err, () => void this.submitVerdict(decision));
            }
        } finally {
            this.set(withBusy(this._state, false));
        }
    }

    private offerRetry(err: unknown, action: () => void): void {
        const message = err instanceof ApiError
            ? (err.status === 0 ? `network: ${err.message}`
                                : `${err.code}: ${err.message}`)
            : String(err);
        this.lastFailed = action;
        this.set(withBanner(this._state, { kind: "retry", message }));
    }

    private retryLast(): void {
        const action = this.lastFailed;
        this.lastFailed = null;
        this.set(withBanner(this._state, { kind: "none" }));
        if (action !== null) {
            action();
        }
    }

    staleNow(): boolean {
        return isStale(this._state);
    }
}
