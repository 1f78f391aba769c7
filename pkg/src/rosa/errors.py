"""Exception hierarchy shared by all rosa modules."""


class RosaError(Exception):
    """Base class for every error raised by this package."""


class DuplicateIdError(RosaError):
    """An identifier is already taken (concept, case, vertex...)."""


# --- taxonomy ---------------------------------------------------------------

class TaxonomyError(RosaError):
    pass


class UnknownConceptError(TaxonomyError):
    pass


class UnknownParentError(TaxonomyError):
    pass


class KindMismatchError(TaxonomyError):
    """Entity and relation concepts live in disjoint hierarchies."""


class CycleDetectedError(TaxonomyError):
    pass


class MultipleRootsError(TaxonomyError):
    """Each kind admits a single parentless concept."""


# --- graphs -----------------------------------------------------------------

class GraphError(RosaError):
    pass


class UnknownVertexError(GraphError):
    pass


class InvalidGraphError(GraphError):
    """The graph breaks a structural or typing invariant."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = tuple(violations)


# --- case base --------------------------------------------------------------

class CaseError(RosaError):
    pass


class UnknownGraphError(CaseError):
    pass


class UnknownCaseError(CaseError):
    pass


class UnresolvedPlaceholderError(CaseError):
    """An explanation placeholder points outside the case fragment."""


class IllegalTransitionError(CaseError):
    """Case status change not in the declared transition table."""


# --- storage ----------------------------------------------------------------

class StorageError(RosaError):
    pass


class IoError(StorageError):
    """Underlying filesystem failure while reading or writing a KB file."""


class ParseError(StorageError):
    """The KB file is not a well-formed document; message carries diagnostics."""


class IntegrityError(StorageError):
    """The KB file parses but contains dangling or inconsistent references."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = tuple(violations)


# --- matching ---------------------------------------------------------------

class MatchError(RosaError):
    pass


class PartialMappingError(MatchError):
    """The mapping does not cover every case vertex."""


class InvalidMappingError(MatchError):
    """The mapping references unknown vertices or breaks mapping invariants."""


class LimitZeroError(MatchError):
    """Search or retrieval limits must be at least 1."""


class TooLargeError(MatchError):
    """Instance exceeds the size bound of the exhaustive enumerator."""


# --- review loop ------------------------------------------------------------

class ReviewError(RosaError):
    pass


class StaleVersionError(ReviewError):
    """Verdict was formed against an outdated KB snapshot."""


class UnknownMatchError(ReviewError):
    """Verdict references a case, graph or mapping the KB does not hold."""
