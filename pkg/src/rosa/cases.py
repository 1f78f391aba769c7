"""Cases and the knowledge base that holds them.

A case pins a vertex set inside one stored graph and carries the
explanation the farmer gave for that arrangement, with ``{v:vertex-id}``
placeholders standing for the vertices so the text can be re-voiced on a
matched graph.  The knowledge base is an immutable value: every mutation
returns a new one with the version counter bumped.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Iterable

from .errors import (
    DuplicateIdError,
    IllegalTransitionError,
    UnknownCaseError,
    UnknownGraphError,
    UnresolvedPlaceholderError,
)
from .graph import FarmGraph, RoleVocabulary, Violation, validate_graph
from .matching import CompatibilityPolicy, Mapping
from .taxonomy import Taxonomy

PLACEHOLDER_RE = re.compile(r"\{v:([^{}]+)\}")


class CaseStatus(str, Enum):
    DRAFT = "draft"
    VALIDATED = "validated"
    REJECTED = "rejected"


# the only status moves a review may make
LEGAL_TRANSITIONS = frozenset({
    (CaseStatus.DRAFT, CaseStatus.VALIDATED),
    (CaseStatus.DRAFT, CaseStatus.REJECTED),
    (CaseStatus.REJECTED, CaseStatus.DRAFT),
})


@dataclass(frozen=True)
class Case:
    id: str
    graph_id: str
    vertex_set: frozenset[str]
    explanation: str
    status: CaseStatus = CaseStatus.DRAFT
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertex_set", frozenset(self.vertex_set))
        object.__setattr__(self, "status", CaseStatus(self.status))
        object.__setattr__(self, "notes", tuple(self.notes))

    def placeholder_ids(self) -> list[str]:
        """Vertex ids referenced from the explanation, in text order."""
        return PLACEHOLDER_RE.findall(self.explanation)


def substitute(text: str, resolver: Callable[[str], str | None]) -> tuple[str, list[str]]:
    """Replace each ``{v:id}`` with ``resolver(id)``; collect unresolved ids."""
    unresolved: list[str] = []

    def repl(m: re.Match) -> str:
        vid = m.group(1)
        out = resolver(vid)
        if out is None:
            unresolved.append(vid)
            return m.group(0)
        return out

    return PLACEHOLDER_RE.sub(repl, text), unresolved


@dataclass(frozen=True)
class KnowledgeBase:
    """One farm-survey knowledge base: taxonomy, graphs, cases, policy."""

    taxonomy: Taxonomy
    roles: RoleVocabulary
    graphs: dict[str, FarmGraph] = field(default_factory=dict)
    cases: dict[str, Case] = field(default_factory=dict)
    policy: CompatibilityPolicy = CompatibilityPolicy()
    version: int = 0

    def graph(self, graph_id: str) -> FarmGraph:
        g = self.graphs.get(graph_id)
        if g is None:
            raise UnknownGraphError(f"no graph {graph_id!r}")
        return g

    def case(self, case_id: str) -> Case:
        c = self.cases.get(case_id)
        if c is None:
            raise UnknownCaseError(f"no case {case_id!r}")
        return c

    def case_fragment(self, case_id: str) -> FarmGraph:
        c = self.case(case_id)
        return self.graph(c.graph_id).induced_fragment(c.vertex_set)

    def next_case_id(self) -> str:
        n = 1
        while f"case-{n:03d}" in self.cases:
            n += 1
        return f"case-{n:03d}"

    def _bump(self, **changes) -> "KnowledgeBase":
        return replace(self, version=self.version + 1, **changes)

    def add_graph(self, g: FarmGraph) -> "KnowledgeBase":
        if g.id in self.graphs:
            raise DuplicateIdError(f"graph id {g.id!r} already stored")
        violations = validate_graph(self.taxonomy, self.roles, g)
        if violations:
            from .errors import InvalidGraphError
            raise InvalidGraphError(
                f"graph {g.id!r} does not validate: {violations[0]}", violations)
        return self._bump(graphs={**self.graphs, g.id: g})

    def add_case(self, graph_id: str, seeds: Iterable[str], explanation: str,
                 case_id: str | None = None,
                 status: CaseStatus = CaseStatus.DRAFT,
                 notes: Iterable[str] = ()) -> tuple["KnowledgeBase", Case]:
        """Store a new case over the closure of ``seeds`` in ``graph_id``.

        Placeholders in the explanation must all land inside that closure.
        """
        g = self.graph(graph_id)
        vertex_set = g.closure(seeds)
        cid = self.next_case_id() if case_id is None else case_id
        if cid in self.cases:
            raise DuplicateIdError(f"case id {cid!r} already stored")
        case = Case(cid, graph_id, vertex_set, explanation, status, tuple(notes))
        bad = [vid for vid in case.placeholder_ids() if vid not in vertex_set]
        if bad:
            raise UnresolvedPlaceholderError(
                f"explanation of {cid!r} references vertices outside the case: "
                f"{sorted(set(bad))}")
        kb = self._bump(cases={**self.cases, cid: case})
        return kb, case

    def set_status(self, case_id: str, status: CaseStatus,
                   note: str | None = None) -> "KnowledgeBase":
        c = self.case(case_id)
        status = CaseStatus(status)
        if (c.status, status) not in LEGAL_TRANSITIONS:
            raise IllegalTransitionError(
                f"case {case_id!r}: {c.status.value} -> {status.value} "
                f"is not allowed")
        notes = c.notes + (note,) if note is not None else c.notes
        return self._bump(cases={**self.cases,
                                 case_id: replace(c, status=status,
                                                  notes=notes)})

    def update_explanation(self, case_id: str, explanation: str) -> "KnowledgeBase":
        c = self.case(case_id)
        bad = [vid for vid in PLACEHOLDER_RE.findall(explanation)
               if vid not in c.vertex_set]
        if bad:
            raise UnresolvedPlaceholderError(
                f"explanation of {case_id!r} references vertices outside the "
                f"case: {sorted(set(bad))}")
        return self._bump(cases={**self.cases,
                                 case_id: replace(c, explanation=explanation)})

    def append_note(self, case_id: str, note: str) -> "KnowledgeBase":
        c = self.case(case_id)
        return self._bump(cases={**self.cases,
                                 case_id: replace(c, notes=c.notes + (note,))})


def render_explanation(kb: KnowledgeBase, case: Case,
                       mapping: Mapping | None = None,
                       target: FarmGraph | None = None) -> str:
    """Voice the case's explanation, on its own graph or through a mapping.

    Without a mapping the placeholders resolve to labels in the case's own
    graph; with one they resolve to the mapped vertices' labels in the
    target graph.  Any placeholder that cannot be resolved raises.
    """
    if mapping is None:
        g = kb.graph(case.graph_id)

        def resolver(vid: str) -> str | None:
            if vid not in case.vertex_set or vid not in g.vertex_ids:
                return None
            return g.vertex_label(vid)
    else:
        if target is None:
            raise UnknownGraphError("a mapping needs its target graph to render")
        m = mapping.as_dict()

        def resolver(vid: str) -> str | None:
            tid = m.get(vid)
            if tid is None or tid not in target.vertex_ids:
                return None
            return target.vertex_label(tid)

    text, unresolved = substitute(case.explanation, resolver)
    if unresolved:
        raise UnresolvedPlaceholderError(
            f"case {case.id!r}: cannot resolve placeholders {sorted(set(unresolved))}")
    return text


def audit_kb(kb: KnowledgeBase) -> tuple[list[Violation], list[str]]:
    """Full content check: (violations, warnings).

    Violations are integrity breaches a strict load refuses; warnings are
    oddities worth a line in a report but legal to store.
    """
    violations: list[Violation] = []
    warnings: list[str] = []

    for gid in sorted(kb.graphs):
        violations.extend(validate_graph(kb.taxonomy, kb.roles, kb.graphs[gid]))

    for cid in sorted(kb.cases):
        c = kb.cases[cid]
        g = kb.graphs.get(c.graph_id)
        if g is None:
            violations.append(Violation(
                "unknown_graph", cid, f"case references graph {c.graph_id!r}"))
            continue
        outside = sorted(c.vertex_set - g.vertex_ids)
        if outside:
            violations.append(Violation(
                "unknown_vertex", cid,
                f"case vertex set leaves graph {c.graph_id!r}: {outside}"))
            continue
        if g.closure(c.vertex_set) != c.vertex_set:
            violations.append(Violation(
                "fragment_not_closed", cid,
                "case vertex set misses arguments of an included relation"))
        bad = sorted(set(vid for vid in c.placeholder_ids()
                         if vid not in c.vertex_set))
        if bad:
            violations.append(Violation(
                "unresolved_placeholder", cid,
                f"explanation references vertices outside the case: {bad}"))
        if not c.vertex_set:
            warnings.append(f"case {cid!r} is empty")

    for p in sorted(kb.policy.allowed_pairs & kb.policy.forbidden_pairs,
                    key=sorted):
        violations.append(Violation(
            "policy_conflict", "/".join(sorted(p)),
            "pair is both allowed and forbidden"))
    for p in sorted(kb.policy.allowed_pairs | kb.policy.forbidden_pairs,
                    key=sorted):
        for concept in sorted(p):
            if concept not in kb.taxonomy.concepts:
                violations.append(Violation(
                    "unknown_concept", concept, "policy names an unknown concept"))
        kinds = {kb.taxonomy.concepts[c].kind for c in p
                 if c in kb.taxonomy.concepts}
        if len(kinds) > 1:
            violations.append(Violation(
                "concept_kind", "/".join(sorted(p)),
                "policy pairs an entity concept with a relation concept"))
    if not (0.0 <= kb.policy.threshold <= 1.0):
        violations.append(Violation(
            "threshold_range", "policy",
            f"threshold {kb.policy.threshold} outside [0, 1]"))

    # same relation concept used with differing role sets is suspicious
    role_sets: dict[str, set[frozenset[str]]] = {}
    for gid in sorted(kb.graphs):
        g = kb.graphs[gid]
        for r in g.relations:
            roles = frozenset(e.role for e in g.edges if e.relation == r.id)
            role_sets.setdefault(r.concept, set()).add(roles)
    for concept in sorted(role_sets):
        if len(role_sets[concept]) > 1:
            variants = sorted(sorted(s) for s in role_sets[concept])
            warnings.append(
                f"relation concept {concept!r} used with differing role sets: "
                f"{variants}")

    return violations, warnings
