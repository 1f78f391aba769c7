"""Carrying a matched explanation over to the target, and the verdicts.

Adaptation is purely substitutional: the matched mapping renames each
``{v:x}`` placeholder to the label of its image vertex in the target
graph, and everything outside the placeholders is left verbatim.  The
argued part of a review (why a pairing convinces or does not) is human
text, stored as notes.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum

from .cases import Case, CaseStatus, KnowledgeBase, substitute
from .errors import (
    InvalidMappingError,
    StaleVersionError,
    UnknownCaseError,
    UnknownGraphError,
    UnknownMatchError,
)
from .graph import FarmGraph
from .matching import Mapping, MatchResult


class Decision(str, Enum):
    ACCEPT = "accept"
    REJECT = "reject"


@dataclass(frozen=True)
class AdaptedExplanation:
    case_id: str
    mapping: Mapping
    text: str
    unresolved: tuple[str, ...] = ()


@dataclass(frozen=True)
class ReviewVerdict:
    """A human ruling on one proposed match.

    ``edited_text`` is the reviewer's rewrite of the adapted explanation
    and only makes sense on accept; ``note`` carries the argument either
    way.  ``expected_version`` pins the KB snapshot the verdict was made
    against.
    """

    match: MatchResult
    decision: Decision
    edited_text: str | None = None
    reviewer: str = ""
    timestamp: str = ""
    note: str = ""
    expected_version: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "decision", Decision(self.decision))
        if self.edited_text is not None and self.decision is not Decision.ACCEPT:
            raise ValueError("edited_text only accompanies an accept verdict")


def _check_mapping(fragment: FarmGraph, mapping: Mapping, target: FarmGraph,
                   require_total: bool = False) -> None:
    """Structural sanity of a mapping: stays inside both graphs, injective,
    kind-preserving; with ``require_total`` also covers the whole fragment
    and preserves every edge with its role."""
    m = mapping.as_dict()
    extra = sorted(set(m) - fragment.vertex_ids)
    if extra:
        raise InvalidMappingError(f"mapping covers unknown case vertices: {extra}")
    missing_targets = sorted(t for t in m.values() if t not in target.vertex_ids)
    if missing_targets:
        raise InvalidMappingError(
            f"mapping lands outside target {target.id!r}: {missing_targets}")
    if len(set(m.values())) != len(m):
        raise InvalidMappingError("mapping is not injective")
    for vid, tid in m.items():
        if (vid in fragment.entity_ids) != (tid in target.entity_ids):
            raise InvalidMappingError(
                f"mapping pairs {vid!r} with {tid!r} across vertex kinds")
    if require_total:
        missing = sorted(fragment.vertex_ids - set(m))
        if missing:
            raise InvalidMappingError(f"mapping misses case vertices: {missing}")
        target_edges = target.edge_keys()
        for e in fragment.edges:
            if (m[e.relation], e.role, m[e.entity]) not in target_edges:
                raise InvalidMappingError(
                    f"edge ({e.relation}, {e.role}, {e.entity}) has no image "
                    f"in {target.id!r}")


def adapt(kb: KnowledgeBase, match: MatchResult) -> AdaptedExplanation:
    """Re-voice the matched case's explanation on the target graph.

    Placeholders whose vertex the mapping does not cover stay verbatim
    and are reported in ``unresolved`` instead of raising, so a partial
    mapping still yields a readable draft.
    """
    case = kb.cases.get(match.case_id)
    if case is None:
        raise UnknownCaseError(f"no case {match.case_id!r}")
    target = kb.graphs.get(match.target_graph_id)
    if target is None:
        raise UnknownGraphError(f"no graph {match.target_graph_id!r}")
    fragment = kb.case_fragment(case.id)
    _check_mapping(fragment, match.mapping, target)

    m = match.mapping.as_dict()

    def resolver(vid: str) -> str | None:
        tid = m.get(vid)
        return None if tid is None else target.vertex_label(tid)

    text, unresolved = substitute(case.explanation, resolver)
    return AdaptedExplanation(case.id, match.mapping, text,
                              tuple(dict.fromkeys(unresolved)))


def _stamp(timestamp: str, reviewer: str, text: str) -> str:
    head = f"[{timestamp}]" + (f" {reviewer}:" if reviewer else "")
    return f"{head} {text}"


def record_review(kb: KnowledgeBase,
                  verdict: ReviewVerdict) -> tuple[KnowledgeBase, Case | None]:
    """Apply one verdict; returns the new KB and the case an accept created.

    Accept materializes a new draft case on the target graph (vertex set =
    closure of the mapping's image, explanation = the reviewer's edit or
    the adapted text) and promotes the source case to validated.  Reject
    only argues: the reason lands in the source case's notes.  Both paths
    bump the version.
    """
    if (verdict.expected_version is not None
            and verdict.expected_version != kb.version):
        raise StaleVersionError(
            f"verdict built against version {verdict.expected_version}, "
            f"KB is at {kb.version}")
    match = verdict.match
    case = kb.cases.get(match.case_id)
    if case is None:
        raise UnknownMatchError(f"match references unknown case "
                                f"{match.case_id!r}")
    target = kb.graphs.get(match.target_graph_id)
    if target is None:
        raise UnknownMatchError(f"match references unknown graph "
                                f"{match.target_graph_id!r}")
    fragment = kb.case_fragment(case.id)
    _check_mapping(fragment, match.mapping, target, require_total=True)

    ts = verdict.timestamp or datetime.now(timezone.utc).strftime(
        "%Y-%m-%dT%H:%M:%SZ")

    if verdict.decision is Decision.REJECT:
        reason = verdict.note or "sans motif"
        note = _stamp(ts, verdict.reviewer,
                      f"appariement vers {target.id} rejeté: {reason}")
        return kb.append_note(case.id, note), None

    adapted = adapt(kb, match)
    explanation = (verdict.edited_text if verdict.edited_text is not None
                   else adapted.text)
    seeds = match.mapping.as_dict().values()
    provenance = _stamp(ts, verdict.reviewer,
                        f"adapté du cas {case.id} sur {target.id}")
    kb2, new_case = kb.add_case(target.id, seeds, explanation,
                                notes=(provenance,))
    # promotion is the one-way ratchet; accepting a rejected source is
    # refused by the transition table rather than silently tolerated
    if case.status is not CaseStatus.VALIDATED:
        kb2 = kb2.set_status(case.id, CaseStatus.VALIDATED)
    note = _stamp(ts, verdict.reviewer,
                  f"accepté sur {target.id}, nouveau cas {new_case.id}"
                  + (f": {verdict.note}" if verdict.note else ""))
    kb2 = kb2.append_note(case.id, note)
    return kb2, new_case
