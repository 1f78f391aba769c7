"""The knowledge base file: one JSON document, written atomically.

The whole KB (role vocabulary, taxonomy, graphs, cases, policy, version
counter) lives in a single ``.rosa.json`` file with fully sorted keys and
lists, so two saves of equal content are byte-identical.  Loading is
lenient by default machinery: it always builds the best KB it can plus a
list of integrity violations; the strict entry point refuses a file with
any violation.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Any

from .cases import Case, CaseStatus, KnowledgeBase, audit_kb
from .errors import IntegrityError, IoError, ParseError, RosaError
from .graph import (
    FarmGraph,
    Role,
    RoleVocabulary,
    Violation,
    graph_from_doc,
    graph_to_doc,
)
from .matching import CompatibilityPolicy, pair
from .taxonomy import Concept, ConceptKind, Taxonomy

FORMAT_NAME = "rosa-kb"
FORMAT_VERSION = 1


def kb_to_doc(kb: KnowledgeBase) -> dict:
    """Canonical JSON-able document for the whole knowledge base."""
    concepts = [
        {
            "id": c.id,
            "label": c.label,
            "kind": c.kind.value,
            "parents": sorted(c.parents),
            "attributes": sorted(c.attributes),
        }
        for c in sorted(kb.taxonomy.concepts.values(), key=lambda c: c.id)
    ]
    cases = [
        {
            "id": c.id,
            "graph_id": c.graph_id,
            "vertices": sorted(c.vertex_set),
            "explanation": c.explanation,
            "status": c.status.value,
            "notes": list(c.notes),
        }
        for c in sorted(kb.cases.values(), key=lambda c: c.id)
    ]
    return {
        "format": FORMAT_NAME,
        "format_version": FORMAT_VERSION,
        "version": kb.version,
        "roles": [{"name": r.name, "repeatable": r.repeatable}
                  for r in kb.roles.roles],
        "concepts": concepts,
        "graphs": [graph_to_doc(kb.graphs[gid]) for gid in sorted(kb.graphs)],
        "cases": cases,
        "policy": {
            "threshold": kb.policy.threshold,
            "allowed_pairs": sorted(sorted(p) for p in kb.policy.allowed_pairs),
            "forbidden_pairs": sorted(sorted(p) for p in kb.policy.forbidden_pairs),
        },
    }


def dumps_kb(kb: KnowledgeBase) -> str:
    return json.dumps(kb_to_doc(kb), indent=2, sort_keys=True,
                      ensure_ascii=False) + "\n"


def kb_fingerprint(kb: KnowledgeBase) -> str:
    """Content hash over the canonical document, version included."""
    return hashlib.sha256(dumps_kb(kb).encode("utf-8")).hexdigest()


def _expect(doc: Any, key: str, kind: type, where: str) -> Any:
    if not isinstance(doc, dict) or key not in doc:
        raise ParseError(f"{where}: missing key {key!r}")
    value = doc[key]
    if kind is float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ParseError(f"{where}.{key}: expected a number, "
                             f"got {type(value).__name__}")
        return float(value)
    if not isinstance(value, kind) or isinstance(value, bool) and kind is int:
        raise ParseError(f"{where}.{key}: expected {kind.__name__}, "
                         f"got {type(value).__name__}")
    return value


def _build_taxonomy(concept_docs: list, violations: list[Violation]) -> Taxonomy:
    """Insert concepts in dependency order; record and drop the unbuildable."""
    pending: dict[str, Concept] = {}
    for i, cd in enumerate(concept_docs):
        where = f"concepts[{i}]"
        cid = _expect(cd, "id", str, where)
        if cid in pending:
            violations.append(Violation("duplicate_id", cid,
                                        "concept listed twice; keeping the first"))
            continue
        kind_raw = _expect(cd, "kind", str, where)
        try:
            kind = ConceptKind(kind_raw)
        except ValueError:
            raise ParseError(f"{where}.kind: {kind_raw!r} is not a concept kind")
        parents = _expect(cd, "parents", list, where)
        attributes = cd.get("attributes", [])
        if not isinstance(attributes, list):
            raise ParseError(f"{where}.attributes: expected list")
        pending[cid] = Concept(cid, cd.get("label", ""), kind,
                               frozenset(parents), frozenset(attributes))

    tax = Taxonomy({})
    remaining = dict(pending)
    progress = True
    while remaining and progress:
        progress = False
        for cid in sorted(remaining):
            c = remaining[cid]
            if not (c.parents <= set(tax.concepts)):
                continue
            try:
                tax = tax.add_concept(c)
            except RosaError as exc:
                violations.append(Violation("concept_unbuildable", cid, str(exc)))
            del remaining[cid]
            progress = True
    for cid in sorted(remaining):
        missing = sorted(remaining[cid].parents - set(pending))
        reason = (f"unknown parents {missing}" if missing
                  else "parent cycle or unbuildable parent")
        violations.append(Violation("concept_unbuildable", cid, reason))
    return tax


def doc_to_kb(doc: Any) -> tuple[KnowledgeBase, list[Violation]]:
    """Build a KB from a parsed document; shape problems raise ParseError,
    load-level content problems (duplicates, unbuildable or misdeclared
    entries) come back as violations.  Referential integrity of the built
    KB is :func:`rosa.cases.audit_kb`'s job."""
    if not isinstance(doc, dict):
        raise ParseError("top level: expected a JSON object")
    fmt = _expect(doc, "format", str, "top level")
    if fmt != FORMAT_NAME:
        raise ParseError(f"top level.format: {fmt!r} is not {FORMAT_NAME!r}")
    fv = _expect(doc, "format_version", int, "top level")
    if fv != FORMAT_VERSION:
        raise ParseError(f"top level.format_version: cannot read version {fv}")
    version = _expect(doc, "version", int, "top level")
    if version < 0:
        raise ParseError("top level.version: must be >= 0")

    violations: list[Violation] = []

    role_docs = _expect(doc, "roles", list, "top level")
    roles_list: list[Role] = []
    for i, rd in enumerate(role_docs):
        name = _expect(rd, "name", str, f"roles[{i}]")
        if any(r.name == name for r in roles_list):
            violations.append(Violation("duplicate_id", name,
                                        "role listed twice; keeping the first"))
            continue
        roles_list.append(Role(name, bool(rd.get("repeatable", False))))
    roles = RoleVocabulary(tuple(roles_list))

    tax = _build_taxonomy(_expect(doc, "concepts", list, "top level"), violations)

    graphs: dict[str, FarmGraph] = {}
    for i, gd in enumerate(_expect(doc, "graphs", list, "top level")):
        try:
            g = graph_from_doc(gd)
        except (KeyError, TypeError) as exc:
            raise ParseError(f"graphs[{i}]: malformed graph document ({exc})")
        if g.id in graphs:
            violations.append(Violation("duplicate_id", g.id,
                                        "graph listed twice; keeping the first"))
            continue
        graphs[g.id] = g

    cases: dict[str, Case] = {}
    for i, cd in enumerate(_expect(doc, "cases", list, "top level")):
        where = f"cases[{i}]"
        cid = _expect(cd, "id", str, where)
        if cid in cases:
            violations.append(Violation("duplicate_id", cid,
                                        "case listed twice; keeping the first"))
            continue
        status_raw = cd.get("status", CaseStatus.DRAFT.value)
        try:
            status = CaseStatus(status_raw)
        except ValueError:
            violations.append(Violation("bad_status", cid,
                                        f"{status_raw!r} is not a case status"))
            continue
        notes = cd.get("notes", [])
        if not isinstance(notes, list):
            raise ParseError(f"{where}.notes: expected list")
        cases[cid] = Case(
            cid,
            _expect(cd, "graph_id", str, where),
            frozenset(_expect(cd, "vertices", list, where)),
            _expect(cd, "explanation", str, where),
            status,
            tuple(notes),
        )

    pd = _expect(doc, "policy", dict, "top level")
    threshold = _expect(pd, "threshold", float, "policy")

    def read_pairs(key: str) -> frozenset:
        out = []
        for j, p in enumerate(pd.get(key, [])):
            if not isinstance(p, list) or len(p) != 2:
                raise ParseError(f"policy.{key}[{j}]: expected a pair")
            out.append(pair(p[0], p[1]))
        return frozenset(out)

    policy = CompatibilityPolicy(threshold, read_pairs("allowed_pairs"),
                                 read_pairs("forbidden_pairs"))

    kb = KnowledgeBase(tax, roles, graphs, cases, policy, version)
    return kb, violations


def load_kb_with_audit(path: str | Path) -> tuple[KnowledgeBase, list[Violation], list[str]]:
    """Lenient load: best-effort KB plus violations and warnings."""
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not JSON (line {exc.lineno} column {exc.colno}: "
                         f"{exc.msg})")
    kb, load_violations = doc_to_kb(doc)
    content_violations, warnings = audit_kb(kb)
    return kb, load_violations + content_violations, warnings


def load_kb(path: str | Path) -> KnowledgeBase:
    """Strict load: any integrity violation refuses the file."""
    kb, violations, _ = load_kb_with_audit(path)
    if violations:
        raise IntegrityError(
            f"{path}: {len(violations)} integrity violation(s); first: "
            f"{violations[0]}", violations)
    return kb


def save_kb(kb: KnowledgeBase, path: str | Path) -> None:
    """Write the whole KB to ``path`` atomically (temp file then rename)."""
    path = Path(path)
    data = dumps_kb(kb).encode("utf-8")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".",
                                   suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}")
