/** Payload shapes of the review service's JSON API, verbatim. */

export interface RoleDoc {
    name: string;
    repeatable: boolean;
}

export interface ConceptDoc {
    id: string;
    label: string;
    kind: "entity" | "relation";
    parents: string[];
    attributes: string[];
}

export interface PolicyDoc {
    threshold: number;
    allowed_pairs: string[][];
    forbidden_pairs: string[][];
}

export interface GraphSummary {
    id: string;
    farm_name: string;
    zone: string;
    entities: number;
    relations: number;
    cases: string[];
}

export interface CaseSummary {
    id: string;
    graph_id: string;
    status: "draft" | "validated" | "rejected";
}

export interface KbIndex {
    version: number;
    roles: RoleDoc[];
    concepts: ConceptDoc[];
    policy: PolicyDoc;
    graphs: GraphSummary[];
    cases: CaseSummary[];
}

export interface EntityDoc {
    id: string;
    concept: string;
    label: string;
    attributes: Record<string, string>;
}

export interface RelationDoc {
    id: string;
    concept: string;
    label: string;
}

export interface EdgeDoc {
    relation: string;
    role: string;
    entity: string;
}

export interface GraphDoc {
    id: string;
    metadata: { farm_name: string; zone: string; choreme_image: string | null };
    entities: EntityDoc[];
    relations: RelationDoc[];
    edges: EdgeDoc[];
}

export interface GraphResponse {
    version: number;
    graph: GraphDoc;
    cases: string[];
}

/** One ranked match as served by POST /api/match. */
export interface MatchRow {
    case_id: string;
    graph_id: string;
    status: string;
    score: number;
    score_exact: string;
    case_vertices: number;
    mapping: Record<string, string>;
    per_vertex: Record<string, number>;
    per_vertex_exact: Record<string, string>;
    source_text: string;
    adapted_text: string;
    unresolved: string[];
    truncated: boolean;
}

export interface MatchReport {
    target_graph_id: string;
    k: number;
    kb_version: number;
    results: MatchRow[];
}

export interface CaseDoc {
    id: string;
    graph_id: string;
    status: string;
    vertices: string[];
    explanation: string;
    rendered: string;
    notes: string[];
}

export interface ReviewRequest {
    match: {
        case_id: string;
        target_graph_id: string;
        mapping: Record<string, string>;
    };
    decision: "accept" | "reject";
    edited_text?: string;
    reviewer?: string;
    note?: string;
    expected_version: number;
}

export interface ReviewResponse {
    version: number;
    decision: "accept" | "reject";
    source_case_id: string;
    new_case_id: string | null;
}
