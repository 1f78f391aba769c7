"""Interactive case-based reasoning over farm spatial-organization graphs.

Farms are stored as bipartite labeled graphs (entity and relation
vertices, role-labeled edges), explanations as cases pinned to graph
fragments.  Retrieval finds taxonomy-softened embeddings of case
fragments in a target graph; adaptation re-voices the explanation there
for a human to ratify or refuse.
"""

from .adaptation import AdaptedExplanation, Decision, ReviewVerdict, adapt, record_review
from .cases import Case, CaseStatus, KnowledgeBase, render_explanation
from .config import Config, load_config
from .errors import RosaError
from .fixtures import desk_kb, minimal_kb
from .graph import (
    Edge,
    EntityVertex,
    FarmGraph,
    GraphMetadata,
    RelationVertex,
    Role,
    RoleVocabulary,
    Violation,
    validate_graph,
)
from .matching import (
    CompatibilityPolicy,
    Mapping,
    MatchLimits,
    MatchResult,
    brute_force_mappings,
    compatible,
    find_mappings,
    retrieve,
    score_match,
)
from .storage import load_kb, load_kb_with_audit, save_kb
from .taxonomy import Concept, ConceptKind, Taxonomy

__version__ = "0.1.0"

__all__ = [
    "AdaptedExplanation",
    "Case",
    "CaseStatus",
    "CompatibilityPolicy",
    "Concept",
    "ConceptKind",
    "Config",
    "Decision",
    "Edge",
    "EntityVertex",
    "FarmGraph",
    "GraphMetadata",
    "KnowledgeBase",
    "Mapping",
    "MatchLimits",
    "MatchResult",
    "RelationVertex",
    "ReviewVerdict",
    "Role",
    "RoleVocabulary",
    "RosaError",
    "Taxonomy",
    "Violation",
    "adapt",
    "brute_force_mappings",
    "compatible",
    "desk_kb",
    "find_mappings",
    "load_config",
    "load_kb",
    "load_kb_with_audit",
    "minimal_kb",
    "record_review",
    "render_explanation",
    "retrieve",
    "save_kb",
    "score_match",
    "validate_graph",
    "__version__",
]
