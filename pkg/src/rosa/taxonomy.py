"""Concept hierarchy and concept-level similarity.

Entity concepts and relation concepts live in two disjoint rooted DAGs;
a concept may have several parents.  Similarity between two concepts of
the same kind is the Wu-Palmer ratio computed from longest-path depths,
so refining a concept never makes it shallower.

Scores are exact rationals (`fractions.Fraction`); convert to float only
at display or serialization boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import (
    CycleDetectedError,
    DuplicateIdError,
    KindMismatchError,
    MultipleRootsError,
    UnknownConceptError,
    UnknownParentError,
)

ConceptId = str


class ConceptKind(str, Enum):
    ENTITY = "entity"
    RELATION = "relation"


@dataclass(frozen=True)
class Concept:
    """One node of the hierarchy.

    ``attributes`` are free-form descriptor names declared on the concept;
    vertices typed by this concept (or a descendant) may carry values for
    them.
    """

    id: ConceptId
    label: str
    kind: ConceptKind
    parents: frozenset[ConceptId] = frozenset()
    attributes: frozenset[str] = frozenset()

    def __post_init__(self):
        if not self.id:
            raise ValueError("concept id must be non-empty")
        object.__setattr__(self, "kind", ConceptKind(self.kind))
        object.__setattr__(self, "parents", frozenset(self.parents))
        object.__setattr__(self, "attributes", frozenset(self.attributes))


def entity(cid: ConceptId, label: str = "", parents: Iterable[ConceptId] = (),
           attributes: Iterable[str] = ()) -> Concept:
    return Concept(cid, label or cid.replace("_", " "), ConceptKind.ENTITY,
                   frozenset(parents), frozenset(attributes))


def relation(cid: ConceptId, label: str = "", parents: Iterable[ConceptId] = (),
             attributes: Iterable[str] = ()) -> Concept:
    return Concept(cid, label or cid.replace("_", " "), ConceptKind.RELATION,
                   frozenset(parents), frozenset(attributes))


@dataclass(frozen=True)
class Taxonomy:
    """Immutable concept hierarchy; mutations return a new value.

    Safe to share read-only across concurrent matcher workers.
    """

    concepts: dict[ConceptId, Concept] = field(default_factory=dict)
    _depths: dict[ConceptId, int] = field(
        default_factory=dict, repr=False, compare=False)
    _ancestors: dict[ConceptId, frozenset[ConceptId]] = field(
        default_factory=dict, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.concepts)

    def __contains__(self, cid: ConceptId) -> bool:
        return cid in self.concepts

    def __iter__(self) -> Iterator[ConceptId]:
        return iter(sorted(self.concepts))

    def get(self, cid: ConceptId) -> Concept:
        try:
            return self.concepts[cid]
        except KeyError:
            raise UnknownConceptError(f"unknown concept: {cid!r}") from None

    def root(self, kind: ConceptKind) -> ConceptId | None:
        for c in self.concepts.values():
            if c.kind == kind and not c.parents:
                return c.id
        return None

    # -- construction --------------------------------------------------------

    def add_concept(self, c: Concept) -> "Taxonomy":
        """Insert one concept, re-checking every hierarchy invariant."""
        if c.id in self.concepts:
            raise DuplicateIdError(f"concept already defined: {c.id!r}")
        for pid in sorted(c.parents):
            if pid == c.id:
                raise CycleDetectedError(f"concept {c.id!r} cannot be its own parent")
            parent = self.concepts.get(pid)
            if parent is None:
                raise UnknownParentError(f"unknown parent {pid!r} for concept {c.id!r}")
            if parent.kind != c.kind:
                raise KindMismatchError(
                    f"parent {pid!r} is a {parent.kind.value} concept, "
                    f"{c.id!r} is a {c.kind.value} concept")
        if not c.parents and self.root(c.kind) is not None:
            raise MultipleRootsError(
                f"{c.kind.value} hierarchy already has a root "
                f"({self.root(c.kind)!r}); give {c.id!r} a parent")
        return Taxonomy({**self.concepts, c.id: c})

    @classmethod
    def from_concepts(cls, concepts: Iterable[Concept]) -> "Taxonomy":
        """Build a taxonomy from concepts given in any order.

        Raises the first structural error found (duplicate id, unknown
        parent, kind mismatch, cycle, extra root).
        """
        pending = list(concepts)
        seen: set[ConceptId] = set()
        for c in pending:
            if c.id in seen:
                raise DuplicateIdError(f"concept already defined: {c.id!r}")
            seen.add(c.id)
        tax = cls()
        while pending:
            stuck = True
            rest = []
            for c in pending:
                if c.parents <= set(tax.concepts):
                    tax = tax.add_concept(c)
                    stuck = False
                else:
                    rest.append(c)
            if stuck:
                ids = {c.id for c in rest}
                for c in rest:
                    missing = c.parents - set(tax.concepts) - ids
                    if missing:
                        raise UnknownParentError(
                            f"unknown parent {sorted(missing)[0]!r} for concept {c.id!r}")
                raise CycleDetectedError(
                    "cyclic parent relation among: " + ", ".join(sorted(ids)))
            pending = rest
        return tax

    # -- order relation ------------------------------------------------------

    def ancestors(self, cid: ConceptId) -> frozenset[ConceptId]:
        """All concepts reachable via parent steps, the concept included."""
        cached = self._ancestors.get(cid)
        if cached is not None:
            return cached
        c = self.get(cid)
        acc: set[ConceptId] = {cid}
        for pid in c.parents:
            acc |= self.ancestors(pid)
        result = frozenset(acc)
        self._ancestors[cid] = result
        return result

    def subsumes(self, ancestor: ConceptId, descendant: ConceptId) -> bool:
        """True iff ``ancestor`` is reachable from ``descendant`` upwards."""
        self.get(ancestor)
        return ancestor in self.ancestors(descendant)

    def depth(self, cid: ConceptId) -> int:
        """Length of the longest parent path to the root (root depth 0)."""
        cached = self._depths.get(cid)
        if cached is not None:
            return cached
        c = self.get(cid)
        d = 0 if not c.parents else 1 + max(self.depth(p) for p in c.parents)
        self._depths[cid] = d
        return d

    def least_common_subsumers(self, a: ConceptId, b: ConceptId) -> frozenset[ConceptId]:
        """Most specific common ancestors of ``a`` and ``b``.

        Common ancestors that strictly subsume another common ancestor are
        dropped; the result is never empty (the root is always shared) and
        its elements are pairwise incomparable.
        """
        ka, kb = self.get(a).kind, self.get(b).kind
        if ka != kb:
            raise KindMismatchError(
                f"cannot compare {a!r} ({ka.value}) with {b!r} ({kb.value})")
        common = self.ancestors(a) & self.ancestors(b)
        return frozenset(
            x for x in common
            if not any(y != x and x in self.ancestors(y) for y in common))

    def similarity(self, a: ConceptId, b: ConceptId) -> Fraction:
        """Wu-Palmer similarity: 2·depth(lcs) / (depth(a) + depth(b)).

        Equal concepts score exactly 1 (this also covers root vs root,
        where the quotient would be 0/0).  Among equally deep least common
        subsumers the lexicographically smallest id is used; the quotient
        does not depend on the choice.
        """
        if self.get(a).kind != self.get(b).kind:
            raise KindMismatchError(
                f"cannot compare {a!r} with {b!r}: different kinds")
        if a == b:
            return Fraction(1)
        lcs = self.least_common_subsumers(a, b)
        ell = min(lcs, key=lambda c: (-self.depth(c), c))
        return Fraction(2 * self.depth(ell), self.depth(a) + self.depth(b))
