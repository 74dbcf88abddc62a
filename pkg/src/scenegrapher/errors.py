"""Exception hierarchy shared by every layer.

Each error carries a machine-readable ``code`` and, when one exists, the
offending node/graph id, so the HTTP layer can surface structured errors.
"""

from __future__ import annotations


class GraphError(Exception):
    """Base class for all domain errors."""

    code = "error"

    def __init__(self, message: str, node_id: str | None = None):
        super().__init__(message)
        self.node_id = node_id


class ValidationError(GraphError):
    """A precondition on the inputs failed (bad label, self-loop, non-finite point)."""

    code = "validation"


class NotFoundError(GraphError):
    """A referenced node, graph, or template does not exist."""

    code = "not_found"


class ConflictError(GraphError):
    """The edit collides with existing state (duplicate label, duplicate triple)."""

    code = "conflict"


class StateError(GraphError):
    """The operation is not valid in the current state (nothing to undo, double close)."""

    code = "state"


class ParseError(GraphError):
    """A document could not be decoded; ``offset`` is the byte position when known."""

    code = "parse"

    def __init__(self, message: str, offset: int | None = None, node_id: str | None = None):
        super().__init__(message, node_id=node_id)
        self.offset = offset
