/** View state and its transitions, all pure.
 *
 * One invariant drives the review flow: verdict actions are enabled
 * only while the version the match queue was computed against equals
 * the latest version seen from the service.  Anything that learns a
 * newer server version flips the screen into its stale mode until the
 * queue is refreshed.
 */

import { GraphDoc, KbIndex, MatchReport, MatchRow } from "./types.js";

export type Banner =
    | { kind: "none" }
    | { kind: "retry"; message: string }
    | { kind: "info"; message: string };

export interface ViewState {
    kb: KbIndex | null;
    targetGraphId: string | null;
    targetGraph: GraphDoc | null;
    /** Graph documents fetched so far, by id; source panels read these. */
    graphCache: Record<string, GraphDoc>;
    queue: MatchRow[];
    activeIndex: number;
    draft: string;
    /** Free-text reason attached to the next verdict. */
    noteDraft: string;
    /** KB version the current queue was computed against. */
    heldVersion: number;
    /** Latest KB version any response has reported. */
    serverVersion: number;
    banner: Banner;
    busy: boolean;
}

export function initialState(): ViewState {
    return {
        kb: null,
        targetGraphId: null,
        targetGraph: null,
        graphCache: {},
        queue: [],
        activeIndex: 0,
        draft: "",
        noteDraft: "",
        heldVersion: 0,
        serverVersion: 0,
        banner: { kind: "none" },
        busy: false,
    };
}

export function withKb(state: ViewState, kb: KbIndex): ViewState {
    return { ...state, kb, serverVersion: kb.version };
}

export function withTarget(state: ViewState, graphId: string, doc: GraphDoc): ViewState {
    return {
        ...state,
        targetGraphId: graphId,
        targetGraph: doc,
        graphCache: { ...state.graphCache, [graphId]: doc },
        queue: [],
        activeIndex: 0,
        draft: "",
        noteDraft: "",
        banner: { kind: "none" },
    };
}

export function withGraphCached(state: ViewState, doc: GraphDoc): ViewState {
    return { ...state, graphCache: { ...state.graphCache, [doc.id]: doc } };
}

/** Install a fresh match queue; its version becomes the held version.
 *
 * `keepDraft` is the 409 path: the queue is replaced but the verdict
 * text the reviewer already wrote stays in the box.
 */
export function withQueue(state: ViewState, report: MatchReport,
                          opts: { keepDraft?: boolean } = {}): ViewState {
    const first = report.results[0];
    return {
        ...state,
        queue: report.results,
        activeIndex: 0,
        draft: opts.keepDraft ? state.draft : first?.adapted_text ?? "",
        noteDraft: opts.keepDraft ? state.noteDraft : "",
        heldVersion: report.kb_version,
        serverVersion: report.kb_version,
        banner: { kind: "none" },
    };
}

export function activeMatch(state: ViewState): MatchRow | null {
    return state.queue[state.activeIndex] ?? null;
}

export function gotoMatch(state: ViewState, index: number): ViewState {
    if (index < 0 || index >= state.queue.length) {
        return state;
    }
    const row = state.queue[index]!;
    return { ...state, activeIndex: index, draft: row.adapted_text, noteDraft: "" };
}

export function withDraft(state: ViewState, text: string): ViewState {
    return { ...state, draft: text };
}

export function withNote(state: ViewState, text: string): ViewState {
    return { ...state, noteDraft: text };
}

export function withBanner(state: ViewState, banner: Banner): ViewState {
    return { ...state, banner };
}

export function withBusy(state: ViewState, busy: boolean): ViewState {
    return { ...state, busy };
}

/** Record a version some response reported, without touching the queue. */
export function noteServerVersion(state: ViewState, version: number): ViewState {
    return { ...state, serverVersion: Math.max(state.serverVersion, version) };
}

export function isStale(state: ViewState): boolean {
    return state.queue.length > 0 && state.heldVersion !== state.serverVersion;
}

export function canSubmit(state: ViewState): boolean {
    return activeMatch(state) !== null && !isStale(state) && !state.busy;
}

/** Drop the decided match and adopt the version its verdict produced. */
export function afterVerdict(state: ViewState, newVersion: number): ViewState {
    const queue = state.queue.filter((_, i) => i !== state.activeIndex);
    const index = Math.min(state.activeIndex, Math.max(queue.length - 1, 0));
    return {
        ...state,
        queue,
        activeIndex: index,
        draft: queue[index]?.adapted_text ?? "",
        noteDraft: "",
        heldVersion: newVersion,
        serverVersion: newVersion,
        banner: { kind: "none" },
    };
}
