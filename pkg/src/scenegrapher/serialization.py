"""Flexible data archive: canonical JSON documents, SVG rendering, sg2im export.

All three exports are deterministic byte-for-byte: fixed key order, arrays in
insertion order, UTF-8, LF line endings.  The JSON document is the lossless
archival form (load, modify, save); the SVG is the visual form; the sg2im form
keeps only objects and index triples because that generator accepts nothing
else — attributes are dropped.
"""

from __future__ import annotations

import json
import math
from xml.sax.saxutils import escape

from .errors import GraphError, ParseError, ValidationError
from .layout import (
    LayoutConfig,
    OBJECT_ATTRIBUTE,
    RELATIONSHIP_OBJECT,
    compute_layout,
    visible_nodes,
)
from .model import SceneGraph, new_graph

SCHEMA_VERSION = 1

OBJECT_COLOR = "#E53935"  # red
RELATIONSHIP_COLOR = "#FDD835"  # yellow
ATTRIBUTE_COLOR = "#1E88E5"  # blue
EDGE_COLOR = "#607D8B"
NODE_RADIUS = 18.0
CANVAS_MARGIN = 42.0

NODE_COLORS = {
    "object": OBJECT_COLOR,
    "relationship": RELATIONSHIP_COLOR,
    "attribute": ATTRIBUTE_COLOR,
}

JSON_EXTENSION = ".sg.json"
SVG_EXTENSION = ".svg"
SG2IM_EXTENSION = ".sg2im.json"

_DOCUMENT_KEYS = {"schema_version", "image_ref", "objects", "relationships", "collapsed"}
_OBJECT_KEYS = {"id", "category", "attributes", "position_override"}
_ATTRIBUTE_KEYS = {"id", "label", "position_override"}
_RELATIONSHIP_KEYS = {"id", "subject", "predicate", "object", "position_override"}


# -- JSON document ---------------------------------------------------------


def document_dict(graph: SceneGraph) -> dict:
    """The canonical document as a plain dict, keys in fixed order."""
    objects = []
    for obj in graph.objects:
        entry: dict = {"id": obj.node_id, "category": obj.category, "attributes": []}
        for attr in obj.attributes:
            attr_entry: dict = {"id": attr.node_id, "label": attr.label}
            if attr.position_override is not None:
                attr_entry["position_override"] = list(attr.position_override)
            entry["attributes"].append(attr_entry)
        if obj.position_override is not None:
            entry["position_override"] = list(obj.position_override)
        objects.append(entry)
    relationships = []
    for edge in graph.relationships:
        rel_entry: dict = {
            "id": edge.node_id,
            "subject": edge.subject,
            "predicate": edge.predicate,
            "object": edge.object,
        }
        if edge.position_override is not None:
            rel_entry["position_override"] = list(edge.position_override)
        relationships.append(rel_entry)
    return {
        "schema_version": SCHEMA_VERSION,
        "image_ref": graph.image_ref,
        "objects": objects,
        "relationships": relationships,
        # object insertion order keeps the set deterministic on disk
        "collapsed": [o.node_id for o in graph.objects if o.node_id in graph.collapsed],
    }


def canonical_bytes(document: dict) -> bytes:
    return (json.dumps(document, ensure_ascii=False, indent=2, allow_nan=False) + "\n").encode(
        "utf-8"
    )


def serialize_json(graph: SceneGraph) -> bytes:
    return canonical_bytes(document_dict(graph))


def parse_json(data: bytes | str, graph_id: str | None = None) -> SceneGraph:
    """Reconstruct a graph from document bytes.

    Syntax problems raise ParseError with the byte offset; integrity problems
    (dangling endpoints, duplicate ids, self-loops, bad id shapes) raise
    ValidationError naming the offending id.  Id counters resume past the
    largest ordinal seen so future ids stay unique.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"document is not UTF-8: {exc.reason}", offset=exc.start) from exc
    else:
        text = data
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[: exc.pos].encode("utf-8"))
        raise ParseError(f"invalid JSON at byte {offset}: {exc.msg}", offset=offset) from exc
    return graph_from_document(document, graph_id=graph_id)


def graph_from_document(document: dict, graph_id: str | None = None) -> SceneGraph:
    if not isinstance(document, dict):
        raise ValidationError("document root must be an object")
    _check_keys(document, _DOCUMENT_KEYS, "document")
    version = document.get("schema_version")
    if version != SCHEMA_VERSION or isinstance(version, bool):
        raise ValidationError(f"unsupported schema_version {version!r}")
    image_ref = document.get("image_ref")
    if image_ref is not None and not isinstance(image_ref, str):
        raise ValidationError("image_ref must be a string or null")

    graph = new_graph(image_ref=image_ref, graph_id=graph_id)
    for entry in _array(document, "objects"):
        _check_keys(entry, _OBJECT_KEYS, "object")
        object_id = _string(entry, "id", "object")
        _wrap(lambda: graph.add_object(_string(entry, "category", object_id), object_id), object_id)
        for attr_entry in _array(entry, "attributes"):
            _check_keys(attr_entry, _ATTRIBUTE_KEYS, f"attribute of {object_id}")
            attr_id = _string(attr_entry, "id", object_id)
            _wrap(
                lambda: graph.add_attribute(
                    object_id, _string(attr_entry, "label", attr_id), attr_id
                ),
                attr_id,
            )
            _apply_override(graph, attr_id, attr_entry)
        _apply_override(graph, object_id, entry)
    for rel_entry in _array(document, "relationships"):
        _check_keys(rel_entry, _RELATIONSHIP_KEYS, "relationship")
        rel_id = _string(rel_entry, "id", "relationship")
        _wrap(
            lambda: graph.add_relationship(
                _string(rel_entry, "subject", rel_id),
                _string(rel_entry, "object", rel_id),
                _string(rel_entry, "predicate", rel_id),
                rel_id,
            ),
            rel_id,
        )
        _apply_override(graph, rel_id, rel_entry)
    for collapsed_id in document.get("collapsed", []):
        if not isinstance(collapsed_id, str) or not graph.has_object(collapsed_id):
            raise ValidationError(
                f"collapsed id {collapsed_id!r} is not an object",
                node_id=collapsed_id if isinstance(collapsed_id, str) else None,
            )
        graph.collapsed.add(collapsed_id)
    return graph


def _wrap(action, node_id: str):
    # Integrity failures during reconstruction surface uniformly as
    # validation errors naming the offending id.
    try:
        return action()
    except ValidationError:
        raise
    except GraphError as exc:
        raise ValidationError(str(exc), node_id=exc.node_id or node_id) from exc


def _check_keys(entry, allowed: set[str], where: str) -> None:
    if not isinstance(entry, dict):
        raise ValidationError(f"{where} entry must be an object")
    extra = set(entry) - allowed
    if extra:
        raise ValidationError(f"unexpected keys in {where}: {sorted(extra)}")


def _array(entry: dict, key: str):
    value = entry.get(key, [])
    if not isinstance(value, list):
        raise ValidationError(f"{key} must be an array")
    return value


def _string(entry: dict, key: str, context: str) -> str:
    value = entry.get(key)
    if not isinstance(value, str):
        raise ValidationError(f"{context}: field {key!r} must be a string", node_id=context)
    return value


def _apply_override(graph: SceneGraph, node_id: str, entry: dict) -> None:
    override = entry.get("position_override")
    if override is None:
        return
    if (
        not isinstance(override, list)
        or len(override) != 2
        or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in override)
        or not all(math.isfinite(c) for c in override)
    ):
        raise ValidationError(
            f"position_override of {node_id!r} must be two finite numbers", node_id=node_id
        )
    graph.set_position_override(node_id, (float(override[0]), float(override[1])))


# -- SVG ---------------------------------------------------------------------


def _fmt(value: float) -> str:
    text = f"{value:.2f}".rstrip("0").rstrip(".")
    return text if text not in ("-0", "") else "0"


def render_svg(graph: SceneGraph, layout_config: LayoutConfig | None = None) -> bytes:
    """Color-coded SVG 1.1: red objects, blue attributes, yellow relationships.

    One circle + one text label per visible node at its layout position; one
    line per layout edge; every element id is the node id it renders.
    """
    layout = compute_layout(graph, layout_config)
    visible = visible_nodes(graph)
    positions = layout.positions

    if positions:
        xs = [p[0] for p in positions.values()]
        ys = [p[1] for p in positions.values()]
        min_x, max_x = min(xs) - CANVAS_MARGIN, max(xs) + CANVAS_MARGIN
        min_y, max_y = min(ys) - CANVAS_MARGIN, max(ys) + CANVAS_MARGIN
    else:
        min_x = min_y = -CANVAS_MARGIN
        max_x = max_y = CANVAS_MARGIN
    width, height = max_x - min_x, max_y - min_y

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>\n',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="{_fmt(min_x)} {_fmt(min_y)} {_fmt(width)} {_fmt(height)}">\n',
    ]

    def node(node_id: str, fill: str, label: str) -> None:
        x, y = positions[node_id]
        parts.append(
            f'  <circle id="{escape(node_id)}" cx="{_fmt(x)}" cy="{_fmt(y)}" '
            f'r="{_fmt(NODE_RADIUS)}" fill="{fill}"/>\n'
        )
        parts.append(
            f'  <text id="{escape(node_id)}-label" x="{_fmt(x)}" y="{_fmt(y + 4)}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="12">'
            f"{escape(label)}</text>\n"
        )

    for obj in graph.objects:
        node(obj.node_id, OBJECT_COLOR, obj.node_id)
        if obj.node_id not in graph.collapsed:
            for attr in obj.attributes:
                node(attr.node_id, ATTRIBUTE_COLOR, attr.label)
    for edge in graph.relationships:
        node(edge.node_id, RELATIONSHIP_COLOR, edge.predicate)

    for source, target, role in layout.edges:
        if source not in visible or target not in visible:
            continue
        x1, y1 = positions[source]
        x2, y2 = positions[target]
        dash = ' stroke-dasharray="4 3"' if role == RELATIONSHIP_OBJECT else ""
        parts.append(
            f'  <line class="{role}" x1="{_fmt(x1)}" y1="{_fmt(y1)}" '
            f'x2="{_fmt(x2)}" y2="{_fmt(y2)}" stroke="{EDGE_COLOR}"{dash}/>\n'
        )
    parts.append("</svg>\n")
    return "".join(parts).encode("utf-8")


# -- sg2im -------------------------------------------------------------------


def export_sg2im(graph: SceneGraph) -> bytes:
    """Objects + index triples only; attributes are dropped entirely.

    Indices point into the objects array (one entry per object instance, so a
    category repeats once per instance).
    """
    index = {obj.node_id: i for i, obj in enumerate(graph.objects)}
    document = {
        "objects": [obj.category for obj in graph.objects],
        "relationships": [
            [index[e.subject], e.predicate, index[e.object]] for e in graph.relationships
        ],
    }
    return canonical_bytes(document)


def dropped_attribute_count(graph: SceneGraph) -> int:
    """How many attribute nodes an sg2im export silently drops."""
    return sum(len(o.attributes) for o in graph.objects)
