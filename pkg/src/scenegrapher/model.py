"""Object-oriented scene-graph data model.

A scene graph holds object nodes (each with its own attribute nodes) and
directed relationship edges between pairs of distinct objects.  Object ids are
``category + ordinal`` ("horse1", "horse2", ...); ordinals are per-category,
strictly increasing, and never reused even after removal.  Attribute and
relationship ids come from separate monotone counters ("attr1", "rel1", ...).
Every id ever issued is remembered so no id can ever be issued twice, even
across pathological category names like "attr".
"""

from __future__ import annotations

import math
import re
import uuid
from dataclasses import dataclass, field

from .errors import ConflictError, NotFoundError, ValidationError

Point = tuple[float, float]

_ORDINAL_RE = re.compile(r"([1-9][0-9]*)$")
_ATTR_ID_RE = re.compile(r"^attr([1-9][0-9]*)$")
_REL_ID_RE = re.compile(r"^rel([1-9][0-9]*)$")


@dataclass
class AttributeNode:
    node_id: str
    label: str
    owner: str
    position_override: Point | None = None


@dataclass
class RelationshipEdge:
    node_id: str
    subject: str
    object: str
    predicate: str
    position_override: Point | None = None


@dataclass
class ObjectNode:
    node_id: str
    category: str
    attributes: list[AttributeNode] = field(default_factory=list)
    position_override: Point | None = None

    def attribute_labels(self) -> list[str]:
        return [a.label for a in self.attributes]


@dataclass
class SceneGraph:
    graph_id: str
    image_ref: str | None = None
    objects: list[ObjectNode] = field(default_factory=list)
    relationships: list[RelationshipEdge] = field(default_factory=list)
    id_counters: dict[str, int] = field(default_factory=dict)
    attr_counter: int = 0
    rel_counter: int = 0
    collapsed: set[str] = field(default_factory=set)
    # Append-only history of every id ever issued; excluded from structural
    # equality, never rolled back by undo.
    issued_ids: set[str] = field(default_factory=set)

    # -- lookups ---------------------------------------------------------

    def get_object(self, object_id: str) -> ObjectNode:
        for obj in self.objects:
            if obj.node_id == object_id:
                return obj
        raise NotFoundError(f"no object {object_id!r}", node_id=object_id)

    def has_object(self, object_id: str) -> bool:
        return any(o.node_id == object_id for o in self.objects)

    def get_relationship(self, rel_id: str) -> RelationshipEdge:
        for edge in self.relationships:
            if edge.node_id == rel_id:
                return edge
        raise NotFoundError(f"no relationship {rel_id!r}", node_id=rel_id)

    def find_node(self, node_id: str) -> ObjectNode | AttributeNode | RelationshipEdge:
        """Return the node with this id, whatever its kind."""
        for obj in self.objects:
            if obj.node_id == node_id:
                return obj
            for attr in obj.attributes:
                if attr.node_id == node_id:
                    return attr
        for edge in self.relationships:
            if edge.node_id == node_id:
                return edge
        raise NotFoundError(f"no node {node_id!r}", node_id=node_id)

    def node_exists(self, node_id: str) -> bool:
        try:
            self.find_node(node_id)
            return True
        except NotFoundError:
            return False

    def has_triple(self, subject: str, predicate: str, object_: str) -> bool:
        return any(
            e.subject == subject and e.predicate == predicate and e.object == object_
            for e in self.relationships
        )

    def incident_relationships(self, object_id: str) -> list[RelationshipEdge]:
        return [e for e in self.relationships if object_id in (e.subject, e.object)]

    def all_node_ids(self) -> list[str]:
        ids: list[str] = []
        for obj in self.objects:
            ids.append(obj.node_id)
            ids.extend(a.node_id for a in obj.attributes)
        ids.extend(e.node_id for e in self.relationships)
        return ids

    def instance_count(self) -> int:
        """Objects + attributes + relationships (the annotation-throughput unit)."""
        return (
            len(self.objects)
            + sum(len(o.attributes) for o in self.objects)
            + len(self.relationships)
        )

    # -- id allocation ---------------------------------------------------

    def _allocate(self, prefix: str, counter: int) -> tuple[str, int]:
        # Skip over ids already issued by other streams (e.g. a literal
        # "attr" category); skipped ordinals stay consumed.
        while True:
            counter += 1
            candidate = f"{prefix}{counter}"
            if candidate not in self.issued_ids:
                self.issued_ids.add(candidate)
                return candidate, counter

    def _claim_forced(self, node_id: str) -> None:
        if not node_id:
            raise ValidationError("node id must be nonempty")
        if node_id in self.issued_ids or self.node_exists(node_id):
            raise ConflictError(f"id {node_id!r} already in use", node_id=node_id)
        self.issued_ids.add(node_id)

    # -- mutation --------------------------------------------------------

    def add_object(self, category: str, node_id: str | None = None) -> str:
        """Append a new object of ``category``; returns its id.

        ``node_id`` forces a specific id (used by log replay and document
        loading); it must be the category followed by a positive ordinal and
        advances the category counter past that ordinal.
        """
        category = category.strip()
        if not category:
            raise ValidationError("object category must be nonempty")
        if node_id is None:
            node_id, counter = self._allocate(category, self.id_counters.get(category, 0))
            self.id_counters[category] = counter
        else:
            ordinal = _parse_ordinal(node_id, category)
            self._claim_forced(node_id)
            self.id_counters[category] = max(self.id_counters.get(category, 0), ordinal)
        self.objects.append(ObjectNode(node_id=node_id, category=category))
        return node_id

    def add_attribute(self, object_id: str, label: str, node_id: str | None = None) -> str:
        """Attach ``label`` to an object; duplicate labels per object are rejected."""
        label = label.strip()
        if not label:
            raise ValidationError("attribute label must be nonempty")
        owner = self.get_object(object_id)
        if label in owner.attribute_labels():
            raise ConflictError(
                f"object {object_id!r} already has attribute {label!r}", node_id=object_id
            )
        if node_id is None:
            node_id, self.attr_counter = self._allocate("attr", self.attr_counter)
        else:
            self._claim_forced(node_id)
            m = _ATTR_ID_RE.match(node_id)
            if m:
                self.attr_counter = max(self.attr_counter, int(m.group(1)))
        owner.attributes.append(AttributeNode(node_id=node_id, label=label, owner=object_id))
        return node_id

    def add_relationship(
        self, subject_id: str, object_id: str, predicate: str, node_id: str | None = None
    ) -> str:
        """Add a directed subject -> predicate -> object edge between two distinct objects."""
        predicate = predicate.strip()
        if not predicate:
            raise ValidationError("predicate must be nonempty")
        if subject_id == object_id:
            raise ValidationError(
                f"relationship endpoints must differ (got {subject_id!r} twice)",
                node_id=subject_id,
            )
        self.get_object(subject_id)
        self.get_object(object_id)
        if self.has_triple(subject_id, predicate, object_id):
            raise ConflictError(
                f"duplicate triple ({subject_id!r}, {predicate!r}, {object_id!r})",
                node_id=subject_id,
            )
        if node_id is None:
            node_id, self.rel_counter = self._allocate("rel", self.rel_counter)
        else:
            self._claim_forced(node_id)
            m = _REL_ID_RE.match(node_id)
            if m:
                self.rel_counter = max(self.rel_counter, int(m.group(1)))
        self.relationships.append(
            RelationshipEdge(
                node_id=node_id, subject=subject_id, object=object_id, predicate=predicate
            )
        )
        return node_id

    # Primitive removals/inserts return enough to restore the exact prior
    # insertion positions; the command engine builds undo records from them.

    def pop_attribute(self, attr_id: str) -> tuple[str, int, AttributeNode]:
        for obj in self.objects:
            for i, attr in enumerate(obj.attributes):
                if attr.node_id == attr_id:
                    return obj.node_id, i, obj.attributes.pop(i)
        raise NotFoundError(f"no attribute {attr_id!r}", node_id=attr_id)

    def insert_attribute(self, owner_id: str, index: int, node: AttributeNode) -> None:
        self.get_object(owner_id).attributes.insert(index, node)

    def pop_relationship(self, rel_id: str) -> tuple[int, RelationshipEdge]:
        for i, edge in enumerate(self.relationships):
            if edge.node_id == rel_id:
                return i, self.relationships.pop(i)
        raise NotFoundError(f"no relationship {rel_id!r}", node_id=rel_id)

    def insert_relationship(self, index: int, edge: RelationshipEdge) -> None:
        self.relationships.insert(index, edge)

    def pop_object(self, object_id: str) -> tuple[int, ObjectNode, list[tuple[int, RelationshipEdge]]]:
        """Remove an object, its attributes, and all incident edges atomically.

        Returns (object index, object node, [(edge index, edge), ...] in
        ascending index order) for restoration.
        """
        for i, obj in enumerate(self.objects):
            if obj.node_id == object_id:
                removed_edges = [
                    (j, e)
                    for j, e in enumerate(self.relationships)
                    if object_id in (e.subject, e.object)
                ]
                for j, _ in reversed(removed_edges):
                    del self.relationships[j]
                self.objects.pop(i)
                self.collapsed.discard(object_id)
                return i, obj, removed_edges
        raise NotFoundError(f"no object {object_id!r}", node_id=object_id)

    def insert_object(self, index: int, node: ObjectNode) -> None:
        self.objects.insert(index, node)

    def set_position_override(self, node_id: str, position: Point | None) -> Point | None:
        """Set (or clear) a node's dragged position; returns the previous value."""
        if position is not None:
            x, y = position
            if not (math.isfinite(x) and math.isfinite(y)):
                raise ValidationError(
                    f"drag position must be finite, got {position!r}", node_id=node_id
                )
            position = (float(x), float(y))
        node = self.find_node(node_id)
        previous = node.position_override
        node.position_override = position
        return previous

    # -- equality --------------------------------------------------------

    def structural_state(self):
        """Hashable snapshot of everything that defines the graph's content.

        Excludes graph_id, id counters and issued-id history: two graphs are
        structurally equal when an annotator could not tell them apart.
        """
        return (
            self.image_ref,
            tuple(
                (
                    o.node_id,
                    o.category,
                    tuple((a.node_id, a.label, a.position_override) for a in o.attributes),
                    o.position_override,
                )
                for o in self.objects
            ),
            tuple(
                (e.node_id, e.subject, e.predicate, e.object, e.position_override)
                for e in self.relationships
            ),
            frozenset(self.collapsed),
        )


def _parse_ordinal(node_id: str, category: str) -> int:
    suffix = node_id[len(category):]
    if not node_id.startswith(category) or not _ORDINAL_RE.fullmatch(suffix):
        raise ValidationError(
            f"object id {node_id!r} is not {category!r} + positive ordinal", node_id=node_id
        )
    return int(suffix)


def new_graph(image_ref: str | None = None, graph_id: str | None = None) -> SceneGraph:
    """Create an empty graph; ``image_ref`` is stored verbatim."""
    return SceneGraph(graph_id=graph_id or uuid.uuid4().hex[:12], image_ref=image_ref)


def structurally_equal(a: SceneGraph, b: SceneGraph) -> bool:
    return a.structural_state() == b.structural_state()
