/** Shared test scaffolding: fixture loading and a no-op handler set. */

import { readFileSync } from "node:fs";

import { Handlers } from "../src/render.js";
import {
    initialState,
    ViewState,
    withGraphCached,
    withKb,
    withQueue,
    withTarget,
} from "../src/state.js";
import { GraphResponse, KbIndex, MatchReport } from "../src/types.js";

export function fixture<T>(name: string): T {
    const url = new URL(`./fixtures/${name}`, import.meta.url);
    return JSON.parse(readFileSync(url, "utf-8")) as T;
}

export const KB = fixture<KbIndex>("kb.json");
export const GRAPH_F7 = fixture<GraphResponse>("graph_f7.json");
export const GRAPH_F1 = fixture<GraphResponse>("graph_f1.json");
export const GRAPH_F5 = fixture<GraphResponse>("graph_f5.json");
export const REPORT = fixture<MatchReport>("match_f7.json");

/** Fixture state right after a match run on f7, source graphs cached. */
export function reviewState(): ViewState {
    let state = withKb(initialState(), KB);
    state = withTarget(state, "f7", GRAPH_F7.graph);
    state = withQueue(state, REPORT);
    state = withGraphCached(state, GRAPH_F1.graph);
    state = withGraphCached(state, GRAPH_F5.graph);
    return state;
}

export const noopHandlers: Handlers = {
    selectTarget: () => {},
    showMatch: () => {},
    editDraft: () => {},
    editNote: () => {},
    accept: () => {},
    reject: () => {},
    refresh: () => {},
    retry: () => {},
};
