"""Matching case fragments into target graphs and ranking cases.

A match is an injective, kind-preserving vertex mapping from a case
fragment into a target graph such that every case edge is preserved with
the exact same role; only concepts are softened, through the taxonomy and
the compatibility policy.  Scores are exact rationals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable, Mapping as TMapping

from .errors import (
    InvalidGraphError,
    InvalidMappingError,
    KindMismatchError,
    LimitZeroError,
    PartialMappingError,
    TooLargeError,
    UnknownCaseError,
    UnknownGraphError,
)
from .graph import FarmGraph, validate_graph
from .taxonomy import ConceptId, Taxonomy

if TYPE_CHECKING:  # pragma: no cover - annotations only
    from .cases import Case, KnowledgeBase

ConceptPair = frozenset


def pair(a: ConceptId, b: ConceptId) -> ConceptPair:
    """Unordered concept pair, as stored in policies."""
    return frozenset((a, b))


@dataclass(frozen=True)
class CompatibilityPolicy:
    """Threshold plus explicit allow/forbid pairs governing label matches.

    Precedence: a forbidden pair never matches, an allowed pair always
    does, anything else falls back to the similarity threshold.
    """

    threshold: float = 0.5
    allowed_pairs: frozenset[ConceptPair] = frozenset()
    forbidden_pairs: frozenset[ConceptPair] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "allowed_pairs",
                           frozenset(frozenset(p) for p in self.allowed_pairs))
        object.__setattr__(self, "forbidden_pairs",
                           frozenset(frozenset(p) for p in self.forbidden_pairs))

    @classmethod
    def build(cls, threshold: float = 0.5,
              allowed: Iterable[tuple[str, str]] = (),
              forbidden: Iterable[tuple[str, str]] = ()) -> "CompatibilityPolicy":
        return cls(threshold,
                   frozenset(pair(a, b) for a, b in allowed),
                   frozenset(pair(a, b) for a, b in forbidden))


@dataclass(frozen=True)
class MatchLimits:
    max_mappings: int = 64
    max_cases: int = 256


@dataclass(frozen=True)
class Mapping:
    """Injective vertex mapping, total on the case fragment."""

    pairs: tuple[tuple[str, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(sorted(dict(self.pairs).items())))

    @classmethod
    def from_dict(cls, d: TMapping[str, str]) -> "Mapping":
        return cls(tuple(d.items()))

    def as_dict(self) -> dict[str, str]:
        return dict(self.pairs)

    def target_of(self, vid: str) -> str | None:
        return dict(self.pairs).get(vid)

    def key(self) -> tuple[str, ...]:
        """Mapped target ids in case-vertex-id order; the sort key."""
        return tuple(t for _, t in self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class MappingEnumeration:
    mappings: tuple[Mapping, ...]
    truncated: bool = False


@dataclass(frozen=True)
class MatchResult:
    case_id: str
    target_graph_id: str
    mapping: Mapping
    score: Fraction
    per_vertex: dict[str, Fraction] = field(default_factory=dict)
    truncated: bool = False


def compatible(policy: CompatibilityPolicy, tax: Taxonomy,
               a: ConceptId, b: ConceptId) -> bool:
    """May a vertex typed ``a`` map onto a vertex typed ``b``?"""
    ka, kb = tax.get(a).kind, tax.get(b).kind
    if ka != kb:
        raise KindMismatchError(
            f"cannot pair {a!r} ({ka.value}) with {b!r} ({kb.value})")
    p = pair(a, b)
    if p in policy.forbidden_pairs:
        return False
    if a == b or p in policy.allowed_pairs:
        return True
    return tax.similarity(a, b) >= policy.threshold


def _check_valid(tax: Taxonomy, g: FarmGraph, roles=None) -> None:
    from .graph import RoleVocabulary
    if roles is None:
        # fragment-level entry point: roles are compared verbatim, accept any
        roles = RoleVocabulary(tuple())
        violations = [v for v in validate_graph(tax, roles, g)
                      if v.code != "unknown_role"]
    else:
        violations = validate_graph(tax, roles, g)
    if violations:
        raise InvalidGraphError(
            f"graph {g.id!r} does not validate: {violations[0]}", violations)


def fragment_mappings(tax: Taxonomy, fragment: FarmGraph, target: FarmGraph,
                      policy: CompatibilityPolicy,
                      limits: MatchLimits = MatchLimits()) -> MappingEnumeration:
    """Enumerate all valid mappings of ``fragment`` into ``target``.

    Backtracking over fragment vertices in a static most-constrained-first
    order (descending incident-edge count, ties by id), pruning on concept
    compatibility, degree and edge feasibility.  Results are sorted by
    their mapped-target-id key; at most ``limits.max_mappings`` are kept
    and the enumeration is flagged truncated when the search was cut.
    """
    if limits.max_mappings < 1:
        raise LimitZeroError("max_mappings must be >= 1")
    _check_valid(tax, fragment)
    _check_valid(tax, target)

    order = sorted(
        [v.id for v in fragment.entities] + [v.id for v in fragment.relations],
        key=lambda vid: (-fragment.degree(vid), vid))
    if not order:
        return MappingEnumeration((Mapping(()),), False)

    target_edges = target.edge_keys()
    frag_concept = {v.id: v.concept for v in fragment.entities}
    frag_concept.update({v.id: v.concept for v in fragment.relations})
    tgt_degree = {vid: target.degree(vid)
                  for vid in target.entity_ids | target.relation_ids}

    candidates: dict[str, list[str]] = {}
    for vid in order:
        if vid in fragment.entity_ids:
            pool: Iterable = target.entities
        else:
            pool = target.relations
        need = fragment.degree(vid)
        cands = [t.id for t in pool
                 if tgt_degree[t.id] >= need
                 and compatible(policy, tax, frag_concept[vid], t.concept)]
        if not cands:
            return MappingEnumeration((), False)
        candidates[vid] = sorted(cands)

    # edges between a vertex and the vertices assigned before it
    position = {vid: i for i, vid in enumerate(order)}
    constraints: dict[str, list[tuple[str, str, bool]]] = {vid: [] for vid in order}
    for e in fragment.edges:
        r, v = e.relation, e.entity
        if position[r] < position[v]:
            constraints[v].append((r, e.role, True))    # earlier vertex is the relation
        else:
            constraints[r].append((v, e.role, False))
    tgt_concept = {v.id: v.concept for v in list(target.entities) + list(target.relations)}

    found: list[Mapping] = []
    truncated = False
    assignment: dict[str, str] = {}
    used: set[str] = set()

    def backtrack(i: int) -> bool:
        """Returns False when the search must stop (limit hit)."""
        nonlocal truncated
        if i == len(order):
            if len(found) >= limits.max_mappings:
                truncated = True
                return False
            found.append(Mapping(tuple(assignment.items())))
            return True
        vid = order[i]
        for t in candidates[vid]:
            if t in used:
                continue
            ok = True
            for other, role, other_is_relation in constraints[vid]:
                m_other = assignment[other]
                edge = (m_other, role, t) if other_is_relation else (t, role, m_other)
                if edge not in target_edges:
                    ok = False
                    break
            if not ok:
                continue
            assignment[vid] = t
            used.add(t)
            keep_going = backtrack(i + 1)
            del assignment[vid]
            used.remove(t)
            if not keep_going:
                return False
        return True

    backtrack(0)
    found.sort(key=Mapping.key)
    return MappingEnumeration(tuple(found), truncated)


def brute_force_fragment_mappings(tax: Taxonomy, fragment: FarmGraph,
                                  target: FarmGraph,
                                  policy: CompatibilityPolicy) -> list[Mapping]:
    """Exhaustive oracle: try every injective assignment and filter.

    Deliberately shares no search machinery with :func:`fragment_mappings`
    (even the policy precedence is restated inline) so the two can check
    each other.  Only meant for instances of at most 10 vertices per side.
    """
    if len(fragment) > 10 or len(target) > 10:
        raise TooLargeError("brute force is capped at 10 vertices per side")

    def ok_pair(a: ConceptId, b: ConceptId) -> bool:
        p = frozenset((a, b))
        if p in policy.forbidden_pairs:
            return False
        if a == b or p in policy.allowed_pairs:
            return True
        return tax.similarity(a, b) >= policy.threshold

    frag_entities = sorted(fragment.entities, key=lambda v: v.id)
    frag_relations = sorted(fragment.relations, key=lambda v: v.id)
    tgt_entities = sorted(target.entities, key=lambda v: v.id)
    tgt_relations = sorted(target.relations, key=lambda v: v.id)

    results: list[Mapping] = []
    for ent_choice in itertools.permutations(tgt_entities, len(frag_entities)):
        for rel_choice in itertools.permutations(tgt_relations, len(frag_relations)):
            m = {v.id: t.id for v, t in zip(frag_entities, ent_choice)}
            m.update({v.id: t.id for v, t in zip(frag_relations, rel_choice)})
            if not all(ok_pair(v.concept, t.concept)
                       for v, t in zip(frag_entities, ent_choice)):
                continue
            if not all(ok_pair(v.concept, t.concept)
                       for v, t in zip(frag_relations, rel_choice)):
                continue
            if all((m[e.relation], e.role, m[e.entity]) in
                   {(te.relation, te.role, te.entity) for te in target.edges}
                   for e in fragment.edges):
                results.append(Mapping.from_dict(m))
    results.sort(key=Mapping.key)
    return results


def check_mapping_total(fragment: FarmGraph, mapping: Mapping) -> None:
    vids = fragment.vertex_ids
    keys = set(mapping.as_dict())
    missing = vids - keys
    if missing:
        raise PartialMappingError(
            f"mapping misses case vertices: {sorted(missing)}")
    extra = keys - vids
    if extra:
        raise InvalidMappingError(
            f"mapping covers vertices outside the case: {sorted(extra)}")
    values = list(mapping.as_dict().values())
    if len(values) != len(set(values)):
        raise InvalidMappingError("mapping is not injective")


def score_mapping(tax: Taxonomy, fragment: FarmGraph, target: FarmGraph,
                  mapping: Mapping) -> tuple[Fraction, dict[str, Fraction]]:
    """Mean concept similarity over all case vertices, with the per-vertex
    breakdown.  Entities and relations weigh equally; an empty fragment
    scores 1 (vacuously exact)."""
    check_mapping_total(fragment, mapping)
    m = mapping.as_dict()
    per_vertex: dict[str, Fraction] = {}
    for vid in sorted(fragment.vertex_ids):
        per_vertex[vid] = tax.similarity(fragment.vertex_concept(vid),
                                         target.vertex_concept(m[vid]))
    if not per_vertex:
        return Fraction(1), {}
    total = sum(per_vertex.values(), Fraction(0))
    return total / len(per_vertex), per_vertex


def case_fragment(kb: "KnowledgeBase", case: "Case") -> FarmGraph:
    g = kb.graphs.get(case.graph_id)
    if g is None:
        raise UnknownGraphError(f"case {case.id!r} references unknown graph "
                                f"{case.graph_id!r}")
    return g.induced_fragment(case.vertex_set)


def find_mappings(kb: "KnowledgeBase", case: "Case", target: FarmGraph,
                  policy: CompatibilityPolicy | None = None,
                  limits: MatchLimits = MatchLimits()) -> MappingEnumeration:
    """All valid mappings of the case's fragment into ``target``."""
    policy = kb.policy if policy is None else policy
    fragment = case_fragment(kb, case)
    _check_valid(kb.taxonomy, fragment, kb.roles)
    _check_valid(kb.taxonomy, target, kb.roles)
    return fragment_mappings(kb.taxonomy, fragment, target, policy, limits)


def brute_force_mappings(kb: "KnowledgeBase", case: "Case", target: FarmGraph,
                         policy: CompatibilityPolicy | None = None) -> list[Mapping]:
    policy = kb.policy if policy is None else policy
    return brute_force_fragment_mappings(kb.taxonomy, case_fragment(kb, case),
                                         target, policy)


def score_match(kb: "KnowledgeBase", case: "Case", target: FarmGraph,
                mapping: Mapping) -> Fraction:
    score, _ = score_mapping(kb.taxonomy, case_fragment(kb, case), target, mapping)
    return score


def retrieve(kb: "KnowledgeBase", target: FarmGraph,
             policy: CompatibilityPolicy | None = None, k: int = 5,
             limits: MatchLimits = MatchLimits()) -> list[MatchResult]:
    """Rank non-rejected cases by their best mapping into ``target``.

    Sorted by score descending, ties broken by larger case fragment, then
    case id ascending; at most ``k`` results.  Deterministic: rerunning on
    the same KB snapshot reproduces the list exactly.
    """
    from .cases import CaseStatus
    if k < 1:
        raise LimitZeroError("k must be >= 1")
    if limits.max_cases < 1:
        raise LimitZeroError("max_cases must be >= 1")
    policy = kb.policy if policy is None else policy
    _check_valid(kb.taxonomy, target, kb.roles)

    ranked: list[tuple[Fraction, int, str, MatchResult]] = []
    eligible = [kb.cases[cid] for cid in sorted(kb.cases)
                if kb.cases[cid].status != CaseStatus.REJECTED]
    for case in eligible[:limits.max_cases]:
        fragment = case_fragment(kb, case)
        enum = fragment_mappings(kb.taxonomy, fragment, target, policy, limits)
        best: tuple[Fraction, dict[str, Fraction], Mapping] | None = None
        for m in enum.mappings:  # key-sorted: first best wins ties deterministically
            score, per_vertex = score_mapping(kb.taxonomy, fragment, target, m)
            if best is None or score > best[0]:
                best = (score, per_vertex, m)
        if best is None:
            continue
        score, per_vertex, m = best
        ranked.append((score, len(fragment), case.id,
                       MatchResult(case.id, target.id, m, score, per_vertex,
                                   enum.truncated)))
    ranked.sort(key=lambda r: (-r[0], -r[1], r[2]))
    return [r[3] for r in ranked[:k]]
