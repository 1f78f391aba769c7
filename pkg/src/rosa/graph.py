"""Bipartite labeled graphs describing a farm's spatial structure.

A graph holds entity vertices (the spatial objects) and relation vertices
(their arrangements); edges run only between a relation and an entity and
carry the entity's role in the relation.  Graph values are immutable once
built and validated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import InvalidGraphError, UnknownVertexError
from .taxonomy import ConceptKind, Taxonomy

DEFAULT_ROLE_NAMES = ("sujet", "objet")


@dataclass(frozen=True)
class Role:
    name: str
    repeatable: bool = False


@dataclass(frozen=True)
class RoleVocabulary:
    """Role names usable on edges, declared once per knowledge base."""

    roles: tuple[Role, ...] = tuple(Role(n) for n in DEFAULT_ROLE_NAMES)

    def __post_init__(self):
        object.__setattr__(self, "roles", tuple(self.roles))

    def __contains__(self, name: str) -> bool:
        return any(r.name == name for r in self.roles)

    def names(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.roles)

    def is_repeatable(self, name: str) -> bool:
        return any(r.name == name and r.repeatable for r in self.roles)


@dataclass(frozen=True)
class EntityVertex:
    id: str
    concept: str
    label: str
    attributes: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class RelationVertex:
    id: str
    concept: str
    label: str


@dataclass(frozen=True)
class Edge:
    relation: str
    role: str
    entity: str

    def key(self) -> tuple[str, str, str]:
        return (self.relation, self.role, self.entity)


@dataclass(frozen=True)
class GraphMetadata:
    farm_name: str = ""
    zone: str = ""
    choreme_image: str | None = None


@dataclass(frozen=True)
class Violation:
    """One broken rule, naming the vertex/edge/record it concerns."""

    code: str
    subject: str
    message: str

    def __str__(self) -> str:
        return f"[{self.code}] {self.subject}: {self.message}"


@dataclass(frozen=True)
class FarmGraph:
    id: str
    metadata: GraphMetadata = GraphMetadata()
    entities: tuple[EntityVertex, ...] = ()
    relations: tuple[RelationVertex, ...] = ()
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "entities", tuple(self.entities))
        object.__setattr__(self, "relations", tuple(self.relations))
        object.__setattr__(self, "edges", tuple(self.edges))

    # -- lookups -------------------------------------------------------------

    @property
    def entity_ids(self) -> frozenset[str]:
        return frozenset(v.id for v in self.entities)

    @property
    def relation_ids(self) -> frozenset[str]:
        return frozenset(v.id for v in self.relations)

    @property
    def vertex_ids(self) -> frozenset[str]:
        return self.entity_ids | self.relation_ids

    def vertex(self, vid: str) -> EntityVertex | RelationVertex:
        for v in self.entities:
            if v.id == vid:
                return v
        for v in self.relations:
            if v.id == vid:
                return v
        raise UnknownVertexError(f"graph {self.id!r} has no vertex {vid!r}")

    def vertex_label(self, vid: str) -> str:
        return self.vertex(vid).label

    def vertex_concept(self, vid: str) -> str:
        return self.vertex(vid).concept

    def is_relation_vertex(self, vid: str) -> bool:
        return vid in self.relation_ids

    def edge_keys(self) -> frozenset[tuple[str, str, str]]:
        return frozenset(e.key() for e in self.edges)

    def edges_of(self, vid: str) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if vid in (e.relation, e.entity))

    def degree(self, vid: str) -> int:
        return len(self.edges_of(vid))

    def __len__(self) -> int:
        return len(self.entities) + len(self.relations)

    # -- validation ----------------------------------------------------------

    def structural_violations(self) -> list[Violation]:
        """Rules checkable without a taxonomy or role vocabulary."""
        out: list[Violation] = []
        seen: set[str] = set()
        for v in list(self.entities) + list(self.relations):
            if v.id in seen:
                out.append(Violation("duplicate_vertex_id", v.id,
                                     "vertex id declared twice"))
            seen.add(v.id)
        entity_ids, relation_ids = self.entity_ids, self.relation_ids
        seen_edges: set[tuple[str, str, str]] = set()
        for e in self.edges:
            subject = f"{e.relation}-[{e.role}]->{e.entity}"
            if e.relation in entity_ids or e.entity in relation_ids:
                out.append(Violation("bipartite", subject,
                                     "edges join a relation vertex to an entity vertex"))
            if e.relation not in entity_ids | relation_ids:
                out.append(Violation("dangling_edge", subject,
                                     f"no vertex {e.relation!r}"))
            if e.entity not in entity_ids | relation_ids:
                out.append(Violation("dangling_edge", subject,
                                     f"no vertex {e.entity!r}"))
            if e.key() in seen_edges:
                out.append(Violation("duplicate_edge", subject,
                                     "identical edge declared twice"))
            seen_edges.add(e.key())
        touched = {e.relation for e in self.edges}
        for v in self.relations:
            if v.id not in touched:
                out.append(Violation("isolated_relation", v.id,
                                     "relation vertex has no incident edge"))
        return out

    # -- fragments -----------------------------------------------------------

    def induced_fragment(self, seeds: Iterable[str]) -> "FarmGraph":
        """Induced subgraph on the seeds, closed under relation completeness.

        Every relation vertex kept brings all its incident entity vertices,
        so a fragment never contains a relation with missing arguments.
        Entity seeds do not pull their relations in.
        """
        seeds = set(seeds)
        unknown = seeds - self.vertex_ids
        if unknown:
            raise UnknownVertexError(
                f"graph {self.id!r} has no vertex {sorted(unknown)[0]!r}")
        keep = set(seeds)
        for e in self.edges:
            if e.relation in seeds:
                keep.add(e.entity)
        return FarmGraph(
            id=self.id,
            metadata=self.metadata,
            entities=tuple(sorted((v for v in self.entities if v.id in keep),
                                  key=lambda v: v.id)),
            relations=tuple(sorted((v for v in self.relations if v.id in keep),
                                   key=lambda v: v.id)),
            edges=tuple(sorted((e for e in self.edges
                                if e.relation in keep and e.entity in keep),
                               key=Edge.key)),
        )

    def closure(self, seeds: Iterable[str]) -> frozenset[str]:
        """Vertex set of :meth:`induced_fragment` without building the graph."""
        seeds = set(seeds)
        unknown = seeds - self.vertex_ids
        if unknown:
            raise UnknownVertexError(
                f"graph {self.id!r} has no vertex {sorted(unknown)[0]!r}")
        keep = set(seeds)
        for e in self.edges:
            if e.relation in seeds:
                keep.add(e.entity)
        return frozenset(keep)

    # -- canonical serialization ---------------------------------------------

    def canonical_form(self) -> bytes:
        """Deterministic byte serialization; equal graphs yield equal bytes."""
        violations = self.structural_violations()
        if violations:
            raise InvalidGraphError(
                f"graph {self.id!r} is not well-formed: {violations[0]}",
                violations)
        return json.dumps(graph_to_doc(self), sort_keys=True,
                          ensure_ascii=False,
                          separators=(",", ":")).encode("utf-8")


def graph_to_doc(g: FarmGraph) -> dict:
    """JSON-able document with vertices and edges in canonical order."""
    return {
        "id": g.id,
        "metadata": {
            "farm_name": g.metadata.farm_name,
            "zone": g.metadata.zone,
            "choreme_image": g.metadata.choreme_image,
        },
        "entities": [
            {"id": v.id, "concept": v.concept, "label": v.label,
             "attributes": dict(sorted(v.attributes.items()))}
            for v in sorted(g.entities, key=lambda v: v.id)
        ],
        "relations": [
            {"id": v.id, "concept": v.concept, "label": v.label}
            for v in sorted(g.relations, key=lambda v: v.id)
        ],
        "edges": [
            {"relation": e.relation, "role": e.role, "entity": e.entity}
            for e in sorted(g.edges, key=Edge.key)
        ],
    }


def graph_from_doc(doc: Mapping) -> FarmGraph:
    md = doc.get("metadata") or {}
    return FarmGraph(
        id=doc["id"],
        metadata=GraphMetadata(
            farm_name=md.get("farm_name", ""),
            zone=md.get("zone", ""),
            choreme_image=md.get("choreme_image"),
        ),
        entities=tuple(EntityVertex(v["id"], v["concept"], v["label"],
                                    dict(v.get("attributes", {})))
                       for v in doc.get("entities", ())),
        relations=tuple(RelationVertex(v["id"], v["concept"], v["label"])
                        for v in doc.get("relations", ())),
        edges=tuple(Edge(e["relation"], e["role"], e["entity"])
                    for e in doc.get("edges", ())),
    )


def validate_graph(tax: Taxonomy, roles: RoleVocabulary, g: FarmGraph) -> list[Violation]:
    """All structural and typing rules; an empty list means the graph is valid."""
    out = g.structural_violations()
    for v in g.entities:
        c = tax.concepts.get(v.concept)
        if c is None:
            out.append(Violation("unknown_concept", v.id,
                                 f"concept {v.concept!r} not in taxonomy"))
            continue
        if c.kind != ConceptKind.ENTITY:
            out.append(Violation("concept_kind", v.id,
                                 f"concept {v.concept!r} is not an entity concept"))
            continue
        declared: set[str] = set()
        for anc in tax.ancestors(v.concept):
            declared |= tax.get(anc).attributes
        for name in sorted(set(v.attributes) - declared):
            out.append(Violation("unknown_attribute", v.id,
                                 f"attribute {name!r} not declared on "
                                 f"{v.concept!r} or its ancestors"))
    for v in g.relations:
        c = tax.concepts.get(v.concept)
        if c is None:
            out.append(Violation("unknown_concept", v.id,
                                 f"concept {v.concept!r} not in taxonomy"))
        elif c.kind != ConceptKind.RELATION:
            out.append(Violation("concept_kind", v.id,
                                 f"concept {v.concept!r} is not a relation concept"))
    role_use: dict[tuple[str, str], int] = {}
    for e in g.edges:
        subject = f"{e.relation}-[{e.role}]->{e.entity}"
        if e.role not in roles:
            out.append(Violation("unknown_role", subject,
                                 f"role {e.role!r} not in the vocabulary "
                                 f"{list(roles.names())}"))
            continue
        role_use[(e.relation, e.role)] = role_use.get((e.relation, e.role), 0) + 1
    for (rid, role), n in sorted(role_use.items()):
        if n > 1 and not roles.is_repeatable(role):
            out.append(Violation("role_repeated", rid,
                                 f"role {role!r} used {n} times but is not repeatable"))
    return out
