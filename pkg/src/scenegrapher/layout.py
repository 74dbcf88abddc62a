"""Automatic hierarchical layout for scene graphs.

Object nodes are roots on row 0, laid out left to right in insertion order.
Each root's children sit on row 1, centered under it with tidy-tree sibling
spacing: its attribute nodes (hidden while the object is collapsed) followed
by the relationship nodes it is the subject of.  A relationship node also gets
a rendering-only edge to its object endpoint.  Dragged nodes keep their
override position, but children still lay out relative to the computed slot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ValidationError
from .model import Point, SceneGraph

OBJECT_ATTRIBUTE = "object-attribute"
SUBJECT_RELATIONSHIP = "subject-relationship"
RELATIONSHIP_OBJECT = "relationship-object"

LayoutEdge = tuple[str, str, str]  # (from id, to id, role)


@dataclass(frozen=True)
class LayoutConfig:
    min_sep: float = 40.0
    row_height: float = 80.0
    origin: Point = (0.0, 0.0)

    def validate(self) -> "LayoutConfig":
        if not (self.min_sep > 0 and math.isfinite(self.min_sep)):
            raise ValidationError(f"min_sep must be positive, got {self.min_sep!r}")
        if not (self.row_height > 0 and math.isfinite(self.row_height)):
            raise ValidationError(f"row_height must be positive, got {self.row_height!r}")
        if not all(math.isfinite(c) for c in self.origin):
            raise ValidationError(f"origin must be finite, got {self.origin!r}")
        return self


@dataclass
class LayoutMap:
    positions: dict[str, Point] = field(default_factory=dict)
    edges: list[LayoutEdge] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "positions": {k: [x, y] for k, (x, y) in self.positions.items()},
            "edges": [list(e) for e in self.edges],
        }


def visible_nodes(graph: SceneGraph) -> set[str]:
    """All node ids minus attribute subtrees of collapsed objects.

    Relationship nodes are always visible.
    """
    visible: set[str] = set()
    for obj in graph.objects:
        visible.add(obj.node_id)
        if obj.node_id not in graph.collapsed:
            visible.update(a.node_id for a in obj.attributes)
    visible.update(e.node_id for e in graph.relationships)
    return visible


def compute_layout(graph: SceneGraph, config: LayoutConfig | None = None) -> LayoutMap:
    """Deterministic positions for every visible node, plus the drawn edges."""
    config = (config or LayoutConfig()).validate()
    origin_x, origin_y = config.origin
    sep = config.min_sep
    child_y = origin_y + config.row_height

    positions: dict[str, Point] = {}
    next_root_x = origin_x
    next_child_x = origin_x
    for obj in graph.objects:
        children: list[str] = []
        if obj.node_id not in graph.collapsed:
            children.extend(a.node_id for a in obj.attributes)
        children.extend(e.node_id for e in graph.relationships if e.subject == obj.node_id)

        span = (len(children) - 1) * sep if children else 0.0
        # Center the root over its children; push right just enough that this
        # family clears both the previous root and the previous family's fan.
        center = max(next_root_x, next_child_x + span / 2.0) if children else next_root_x
        positions[obj.node_id] = (center, origin_y)
        left = center - span / 2.0
        for k, child in enumerate(children):
            positions[child] = (left + k * sep, child_y)
        next_root_x = center + sep
        if children:
            next_child_x = left + span + sep

    for node_id, override in _overrides(graph):
        if node_id in positions:
            positions[node_id] = override

    edges: list[LayoutEdge] = []
    for obj in graph.objects:
        if obj.node_id in graph.collapsed:
            continue
        edges.extend((obj.node_id, a.node_id, OBJECT_ATTRIBUTE) for a in obj.attributes)
    for edge in graph.relationships:
        edges.append((edge.subject, edge.node_id, SUBJECT_RELATIONSHIP))
        edges.append((edge.node_id, edge.object, RELATIONSHIP_OBJECT))
    return LayoutMap(positions=positions, edges=edges)


def _overrides(graph: SceneGraph):
    for obj in graph.objects:
        if obj.position_override is not None:
            yield obj.node_id, obj.position_override
        for attr in obj.attributes:
            if attr.position_override is not None:
                yield attr.node_id, attr.position_override
    for edge in graph.relationships:
        if edge.position_override is not None:
            yield edge.node_id, edge.position_override
