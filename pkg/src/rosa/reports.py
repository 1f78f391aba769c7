"""The match report: one canonical JSON document for CLI and HTTP alike.

Both front ends serialize the same dict with the same dump settings, so
their outputs are byte-identical for identical inputs and can be pinned
by golden files.  Scores appear twice: as floats for display and as
exact fraction strings for anything that must not round.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .adaptation import adapt
from .cases import KnowledgeBase, render_explanation
from .matching import CompatibilityPolicy, MatchLimits, retrieve


def _exact(x: Fraction) -> str:
    return str(x)


def match_report(kb: KnowledgeBase, target_graph_id: str, k: int = 5,
                 policy: CompatibilityPolicy | None = None,
                 limits: MatchLimits = MatchLimits()) -> dict:
    target = kb.graph(target_graph_id)
    results = retrieve(kb, target, policy=policy, k=k, limits=limits)
    entries = []
    for r in results:
        case = kb.case(r.case_id)
        adapted = adapt(kb, r)
        entries.append({
            "case_id": r.case_id,
            "graph_id": case.graph_id,
            "status": case.status.value,
            "score": float(r.score),
            "score_exact": _exact(r.score),
            "case_vertices": len(kb.case_fragment(r.case_id)),
            "mapping": r.mapping.as_dict(),
            "per_vertex": {vid: float(s) for vid, s in r.per_vertex.items()},
            "per_vertex_exact": {vid: _exact(s)
                                 for vid, s in r.per_vertex.items()},
            "source_text": render_explanation(kb, case),
            "adapted_text": adapted.text,
            "unresolved": list(adapted.unresolved),
            "truncated": r.truncated,
        })
    return {
        "target_graph_id": target_graph_id,
        "k": k,
        "kb_version": kb.version,
        "results": entries,
    }


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
