import { describe, expect, it } from "vitest";

import {
    activeMatch,
    afterVerdict,
    canSubmit,
    gotoMatch,
    initialState,
    isStale,
    noteServerVersion,
    withDraft,
    withKb,
    withNote,
    withQueue,
} from "../src/state.js";
import { KB, REPORT, reviewState } from "./helpers.js";

describe("queue install", () => {
    it("adopts the report version and the first adapted text", () => {
        const state = reviewState();
        expect(state.heldVersion).toBe(REPORT.kb_version);
        expect(state.serverVersion).toBe(REPORT.kb_version);
        expect(state.activeIndex).toBe(0);
        expect(state.draft).toBe(REPORT.results[0]!.adapted_text);
        expect(activeMatch(state)?.case_id).toBe("c_fig2");
    });

    it("keepDraft preserves the text box across a requeue", () => {
        let state = withNote(withDraft(reviewState(), "my verdict"), "because");
        state = withQueue(state, REPORT, { keepDraft: true });
        expect(state.draft).toBe("my verdict");
        expect(state.noteDraft).toBe("because");
        expect(state.activeIndex).toBe(0);
    });

    it("without keepDraft the draft follows the new first row", () => {
        let state = withDraft(reviewState(), "typed something");
        state = withQueue(state, REPORT);
        expect(state.draft).toBe(REPORT.results[0]!.adapted_text);
        expect(state.noteDraft).toBe("");
    });
});

describe("navigation", () => {
    it("switching match resets draft to that row's adapted text", () => {
        const state = gotoMatch(reviewState(), 1);
        expect(state.activeIndex).toBe(1);
        expect(state.draft).toBe(REPORT.results[1]!.adapted_text);
        expect(state.noteDraft).toBe("");
    });

    it("out-of-range indices are ignored", () => {
        const state = reviewState();
        expect(gotoMatch(state, -1)).toBe(state);
        expect(gotoMatch(state, state.queue.length)).toBe(state);
    });
});

describe("version gate", () => {
    it("fresh queue is current and submittable", () => {
        const state = reviewState();
        expect(isStale(state)).toBe(false);
        expect(canSubmit(state)).toBe(true);
    });

    it("a newer server version disables verdicts until refresh", () => {
        const state = noteServerVersion(reviewState(), 9);
        expect(isStale(state)).toBe(true);
        expect(canSubmit(state)).toBe(false);
    });

    it("server version never goes backwards", () => {
        const state = noteServerVersion(noteServerVersion(reviewState(), 9), 3);
        expect(state.serverVersion).toBe(9);
    });

    it("an empty screen is never stale", () => {
        const state = withKb(initialState(), KB);
        expect(isStale(state)).toBe(false);
        expect(canSubmit(state)).toBe(false);
    });
});

describe("afterVerdict", () => {
    it("drops the decided row and adopts the new version", () => {
        const state = afterVerdict(reviewState(), 1);
        expect(state.queue.map(r => r.case_id)).toEqual(["c_isole_parcours"]);
        expect(state.heldVersion).toBe(1);
        expect(state.serverVersion).toBe(1);
        expect(state.draft).toBe(REPORT.results[1]!.adapted_text);
        expect(canSubmit(state)).toBe(true);
    });

    it("emptying the queue leaves a clean end state", () => {
        const state = afterVerdict(afterVerdict(reviewState(), 1), 2);
        expect(state.queue).toEqual([]);
        expect(activeMatch(state)).toBeNull();
        expect(state.draft).toBe("");
        expect(canSubmit(state)).toBe(false);
    });
});
