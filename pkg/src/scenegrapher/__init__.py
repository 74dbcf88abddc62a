"""Interactive scene-graph authoring engine.

Object-oriented graph model, reversible command log, automatic tree layout,
JSON/SVG/sg2im exports, vocabulary lists, session metrics, and an HTTP service.
"""

from .commands import (
    AddAttribute,
    AddObject,
    AddRelationship,
    ApplyTemplate,
    Clone,
    Collapse,
    Command,
    CommandLog,
    Drag,
    Effect,
    Expand,
    GraphEditor,
    Remove,
    Template,
    TemplateRegistry,
    decode_command,
    store_template,
)
from .errors import (
    ConflictError,
    GraphError,
    NotFoundError,
    ParseError,
    StateError,
    ValidationError,
)
from .layout import LayoutConfig, LayoutMap, compute_layout, visible_nodes
from .metrics import SessionRecord, instances_per_minute, new_session
from .model import (
    AttributeNode,
    ObjectNode,
    RelationshipEdge,
    SceneGraph,
    new_graph,
    structurally_equal,
)
from .serialization import (
    document_dict,
    export_sg2im,
    parse_json,
    render_svg,
    serialize_json,
)
from .store import GraphStore
from .vocabulary import VocabularyList, build_from_corpus, builtin_vocabulary

__version__ = "0.1.0"

__all__ = [
    "AddAttribute",
    "AddObject",
    "AddRelationship",
    "ApplyTemplate",
    "AttributeNode",
    "Clone",
    "Collapse",
    "Command",
    "CommandLog",
    "ConflictError",
    "Drag",
    "Effect",
    "Expand",
    "GraphEditor",
    "GraphError",
    "GraphStore",
    "LayoutConfig",
    "LayoutMap",
    "NotFoundError",
    "ObjectNode",
    "ParseError",
    "RelationshipEdge",
    "Remove",
    "SceneGraph",
    "SessionRecord",
    "StateError",
    "Template",
    "TemplateRegistry",
    "ValidationError",
    "VocabularyList",
    "build_from_corpus",
    "builtin_vocabulary",
    "compute_layout",
    "decode_command",
    "document_dict",
    "export_sg2im",
    "instances_per_minute",
    "new_graph",
    "new_session",
    "parse_json",
    "render_svg",
    "serialize_json",
    "store_template",
    "structurally_equal",
    "visible_nodes",
]
