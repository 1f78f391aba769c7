/** Screen construction: pure functions from view state to a VNode tree.
 *
 * Every number and sentence on screen is copied from an API payload;
 * nothing here computes similarities.  The layout function is a
 * parameter so its failure path (degrade to a textual mapping table)
 * stays reachable from tests.
 */

import { forceLayout, LayoutBox, Point } from "./layout.js";
import {
    activeMatch,
    canSubmit,
    isStale,
    ViewState,
} from "./state.js";
import { GraphDoc, MatchRow } from "./types.js";
import { Attrs, Child, h, VNode } from "./vdom.js";

export interface Handlers {
    selectTarget(graphId: string): void;
    showMatch(index: number): void;
    editDraft(text: string): void;
    editNote(text: string): void;
    accept(): void;
    reject(): void;
    /** Re-run the match against the current server version. */
    refresh(): void;
    /** Retry the action that failed on the network. */
    retry(): void;
}

export type LayoutFn = (doc: GraphDoc, box: LayoutBox) => Map<string, Point>;

const PANEL: LayoutBox = { width: 460, height: 340 };

/** Stable highlight color for the i-th mapped pair (golden-angle hues). */
export function pairColor(i: number): string {
    const hue = Math.round(i * 137.508) % 360;
    return `hsl(${hue} 70% 45%)`;
}

/** One color per mapping pair, keyed by both endpoints of the pair. */
export function colorLinks(row: MatchRow): Map<string, string> {
    const colors = new Map<string, string>();
    Object.keys(row.mapping).sort().forEach((caseVertex, i) => {
        const color = pairColor(i);
        colors.set(caseVertex, color);
        colors.set(row.mapping[caseVertex]!, color);
    });
    return colors;
}

function vertexKinds(doc: GraphDoc): Map<string, "entity" | "relation"> {
    const kinds = new Map<string, "entity" | "relation">();
    for (const e of doc.entities) {
        kinds.set(e.id, "entity");
    }
    for (const r of doc.relations) {
        kinds.set(r.id, "relation");
    }
    return kinds;
}

function vertexLabels(doc: GraphDoc): Map<string, string> {
    const labels = new Map<string, string>();
    for (const e of doc.entities) {
        labels.set(e.id, e.label);
    }
    for (const r of doc.relations) {
        labels.set(r.id, r.label);
    }
    return labels;
}

function renderGraphSvg(doc: GraphDoc, colors: Map<string, string>,
                        layout: LayoutFn): VNode {
    const points = layout(doc, PANEL);
    const kinds = vertexKinds(doc);
    const labels = vertexLabels(doc);

    const edges: Child[] = [];
    for (const edge of doc.edges) {
        const a = points.get(edge.relation);
        const b = points.get(edge.entity);
        if (!a || !b) {
            continue;
        }
        edges.push(h("line", {
            class: "edge",
            x1: String(a.x), y1: String(a.y),
            x2: String(b.x), y2: String(b.y),
        }));
        edges.push(h("text", {
            class: "edge-role",
            x: String((a.x + b.x) / 2),
            y: String((a.y + b.y) / 2 - 3),
        }, edge.role));
    }

    const nodes: Child[] = [];
    for (const [id, p] of points) {
        const kind = kinds.get(id) ?? "entity";
        const color = colors.get(id);
        const shape = kind === "entity"
            ? h("circle", {
                class: "vertex entity" + (color ? " mapped" : ""),
                cx: String(p.x), cy: String(p.y), r: "13",
                fill: color ?? "#d8d4cc",
                "data-vertex": id,
            })
            : h("rect", {
                class: "vertex relation" + (color ? " mapped" : ""),
                x: String(p.x - 17), y: String(p.y - 10),
                width: "34", height: "20", rx: "4",
                fill: color ?? "#eceae5",
                "data-vertex": id,
            });
        nodes.push(h("g", {},
            shape,
            h("title", {}, id),
            h("text", {
                class: "vertex-label",
                x: String(p.x), y: String(p.y + 27),
                "text-anchor": "middle",
            }, labels.get(id) ?? id),
        ));
    }

    return h("svg", {
        class: "graph-panel",
        viewBox: `0 0 ${PANEL.width} ${PANEL.height}`,
        role: "img",
    }, ...edges, ...nodes);
}

/** Plain-text stand-in for the panels when layout cannot run. */
function renderMappingTable(row: MatchRow, target: GraphDoc | null,
                            source: GraphDoc | null): VNode {
    const targetLabels = target ? vertexLabels(target) : new Map<string, string>();
    const sourceLabels = source ? vertexLabels(source) : new Map<string, string>();
    const rows = Object.keys(row.mapping).sort().map(caseVertex => {
        const targetVertex = row.mapping[caseVertex]!;
        return h("tr", {},
            h("td", {}, caseVertex),
            h("td", {}, sourceLabels.get(caseVertex) ?? ""),
            h("td", {}, "→"),
            h("td", {}, targetVertex),
            h("td", {}, targetLabels.get(targetVertex) ?? ""),
        );
    });
    return h("div", { class: "mapping-fallback" },
        h("p", { class: "fallback-notice" },
            "Graph drawing unavailable; showing the mapping as a table."),
        h("table", { class: "mapping-table" },
            h("thead", {}, h("tr", {},
                h("th", {}, "case vertex"), h("th", {}, "label"),
                h("th", {}, ""),
                h("th", {}, "target vertex"), h("th", {}, "label"))),
            h("tbody", {}, ...rows)),
    );
}

function renderScoreBadge(row: MatchRow): VNode {
    return h("span", { class: "score-badge", title: `exact ${row.score_exact}` },
        h("span", { class: "score-value" }, row.score.toFixed(2)),
        h("span", { class: "score-exact" }, row.score_exact),
    );
}

function renderPerVertexTable(row: MatchRow): VNode {
    const body = Object.keys(row.per_vertex).sort().map(vid =>
        h("tr", {},
            h("td", {}, vid),
            h("td", {}, row.mapping[vid] ?? ""),
            h("td", { class: "num per-vertex-value" }, String(row.per_vertex[vid])),
            h("td", { class: "num per-vertex-exact" }, row.per_vertex_exact[vid] ?? ""),
        ));
    return h("table", { class: "per-vertex" },
        h("thead", {}, h("tr", {},
            h("th", {}, "case vertex"), h("th", {}, "target vertex"),
            h("th", {}, "similarity"), h("th", {}, "exact"))),
        h("tbody", {}, ...body));
}

function renderQueueStrip(state: ViewState, handlers: Handlers): VNode {
    const tabs = state.queue.map((row, i) =>
        h("button", {
            class: "queue-tab" + (i === state.activeIndex ? " active" : ""),
            onclick: () => handlers.showMatch(i),
        }, `${row.case_id} (${row.score.toFixed(2)})`));
    return h("nav", { class: "queue-strip" }, ...tabs);
}

function renderVerdictBar(state: ViewState, handlers: Handlers): VNode {
    const disabled: Attrs = canSubmit(state) ? {} : { disabled: "disabled" };
    return h("div", { class: "verdict-bar" },
        h("input", {
            class: "note-input",
            type: "text",
            placeholder: "reason (kept with the verdict)",
            value: state.noteDraft,
            oninput: (ev: Event) =>
                handlers.editNote((ev.target as HTMLInputElement).value),
        }),
        h("button", {
            class: "accept", ...disabled,
            onclick: () => handlers.accept(),
        }, "Accept"),
        h("button", {
            class: "reject", ...disabled,
            onclick: () => handlers.reject(),
        }, "Reject"),
    );
}

function renderStaleBanner(state: ViewState, handlers: Handlers): VNode {
    return h("div", { class: "banner stale" },
        h("span", {},
            `The knowledge base moved to version ${state.serverVersion} while ` +
            `this queue was computed against version ${state.heldVersion}. `),
        h("button", { class: "refresh", onclick: () => handlers.refresh() },
            "Refresh matches"),
    );
}

export function renderMatchView(state: ViewState, handlers: Handlers,
                                layout: LayoutFn = forceLayout): VNode {
    const row = activeMatch(state);
    if (row === null) {
        return h("div", {});
    }
    const target = state.targetGraph;
    const source = state.graphCache[row.graph_id] ?? null;

    let panels: VNode;
    try {
        const colors = colorLinks(row);
        const sourcePanel = source === null
            ? h("div", { class: "panel-loading" }, "loading source graph…")
            : renderGraphSvg(source, colors, layout);
        if (target === null) {
            throw new Error("target graph not loaded");
        }
        panels = h("div", { class: "panels" },
            h("figure", { class: "panel" },
                h("figcaption", {}, `target ${state.targetGraphId ?? ""}`),
                renderGraphSvg(target, colors, layout)),
            h("figure", { class: "panel" },
                h("figcaption", {}, `source ${row.graph_id} · case ${row.case_id}`),
                sourcePanel),
        );
    } catch {
        panels = renderMappingTable(row, target, source);
    }

    const unresolved = row.unresolved.length === 0 ? h("span", {}) :
        h("p", { class: "unresolved" },
            `unresolved references: ${row.unresolved.join(", ")}`);

    return h("section", { class: "match-view" },
        isStale(state) ? renderStaleBanner(state, handlers) : h("span", {}),
        h("header", { class: "match-head" },
            h("h2", {}, `case ${row.case_id}`),
            h("span", { class: "case-status" }, row.status),
            renderScoreBadge(row),
            row.truncated
                ? h("span", { class: "truncated-flag" }, "mapping list truncated")
                : h("span", {})),
        panels,
        renderPerVertexTable(row),
        h("div", { class: "explanations" },
            h("div", { class: "source-text-block" },
                h("h3", {}, "source explanation"),
                h("p", { class: "source-text" }, row.source_text)),
            h("div", { class: "adapted-block" },
                h("h3", {}, "adapted explanation (editable)"),
                h("textarea", {
                    class: "adapted-text",
                    rows: "3",
                    value: state.draft,
                    oninput: (ev: Event) =>
                        handlers.editDraft((ev.target as HTMLTextAreaElement).value),
                }),
                unresolved)),
        renderVerdictBar(state, handlers),
    );
}

function renderTargetPicker(state: ViewState, handlers: Handlers): VNode {
    const options = (state.kb?.graphs ?? []).map(g =>
        h("option", {
            value: g.id,
            ...(g.id === state.targetGraphId ? { selected: "selected" } : {}),
        }, `${g.id} - ${g.farm_name} (${g.zone})`));
    return h("label", { class: "target-picker" },
        "target graph ",
        h("select", {
            onchange: (ev: Event) =>
                handlers.selectTarget((ev.target as HTMLSelectElement).value),
        }, h("option", { value: "" }, "choose…"), ...options));
}

function renderBanner(state: ViewState, handlers: Handlers): VNode {
    const banner = state.banner;
    if (banner.kind === "retry") {
        return h("div", { class: "banner retry" },
            h("span", {}, `Request failed: ${banner.message}. Nothing was changed. `),
            h("button", { class: "retry", onclick: () => handlers.retry() }, "Retry"));
    }
    if (banner.kind === "info") {
        return h("div", { class: "banner info" }, banner.message);
    }
    return h("span", {});
}

function renderEmptyQueue(state: ViewState): VNode {
    if (state.busy) {
        return h("p", { class: "loading" }, "retrieving matches…");
    }
    const threshold = state.kb?.policy.threshold;
    return h("div", { class: "no-matches" },
        h("p", {}, "No matches for this target."),
        h("p", { class: "policy-hint" },
            "The compatibility policy may be too strict: lower the threshold" +
            (threshold !== undefined ? ` (currently ${threshold})` : "") +
            " or add allowed pairs, then refresh."));
}

export function renderApp(state: ViewState, handlers: Handlers,
                          layout: LayoutFn = forceLayout): VNode {
    const body = state.targetGraphId === null
        ? h("p", { class: "pick-hint" },
            "Pick a target graph to retrieve matching cases.")
        : state.queue.length === 0
            ? renderEmptyQueue(state)
            : h("div", {},
                renderQueueStrip(state, handlers),
                renderMatchView(state, handlers, layout));

    return h("main", { class: "app" },
        h("header", { class: "app-head" },
            h("h1", {}, "rosa review"),
            h("span", { class: "kb-version" }, `kb v${state.serverVersion}`),
            renderTargetPicker(state, handlers)),
        renderBanner(state, handlers),
        body,
    );
}
