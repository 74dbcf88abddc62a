"""Reversible editing commands and the undo log.

Every edit is a Command: applying it mutates the graph and captures whatever
is needed to revert exactly (original nodes, insertion indices, prior drag
positions).  A failed command leaves graph and log untouched.

Commands have a canonical one-JSON-object-per-line encoding so logs can be
persisted and replayed.  Records carry the ids a command allocated: counters
are never rolled back by undo, so a log replayed onto a fresh graph must force
the recorded ids rather than re-allocate.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

from .errors import NotFoundError, StateError, ValidationError
from .model import (
    AttributeNode,
    ObjectNode,
    RelationshipEdge,
    SceneGraph,
)

# (predicate, role of the template's category, peer category)
Pattern = tuple[str, str, str]


@dataclass(frozen=True)
class Effect:
    """Immutable summary of what a command (or undo) did to the graph."""

    kind: str
    created: tuple[str, ...] = ()
    removed: tuple[str, ...] = ()
    updated: tuple[str, ...] = ()
    pending: tuple[Pattern, ...] = ()

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "created": list(self.created),
            "removed": list(self.removed),
            "updated": list(self.updated),
            "pending": [list(p) for p in self.pending],
        }


@dataclass
class Template:
    """Stored archetype of one category: its attributes and abstracted edges."""

    template_id: str
    category: str
    attributes: list[str]
    relationship_patterns: list[Pattern]

    def to_dict(self) -> dict:
        return {
            "template_id": self.template_id,
            "category": self.category,
            "attributes": list(self.attributes),
            "relationship_patterns": [list(p) for p in self.relationship_patterns],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Template":
        return cls(
            template_id=data["template_id"],
            category=data["category"],
            attributes=list(data["attributes"]),
            relationship_patterns=[tuple(p) for p in data["relationship_patterns"]],
        )


class TemplateRegistry:
    """Templates keyed by category; storing again replaces (upsert)."""

    def __init__(self) -> None:
        self._by_category: dict[str, Template] = {}

    def store(self, template: Template) -> None:
        self._by_category[template.category] = template

    def get(self, template_id: str) -> Template:
        try:
            return self._by_category[template_id]
        except KeyError:
            raise NotFoundError(f"no template {template_id!r}", node_id=template_id) from None

    def list(self) -> list[Template]:
        return list(self._by_category.values())

    def to_dict(self) -> dict:
        return {c: t.to_dict() for c, t in sorted(self._by_category.items())}

    @classmethod
    def from_dict(cls, data: dict) -> "TemplateRegistry":
        reg = cls()
        for t in data.values():
            reg.store(Template.from_dict(t))
        return reg


def store_template(graph: SceneGraph, object_id: str) -> Template:
    """Capture an object's category, attribute labels, and abstracted incident edges.

    Not a logged command: templates live outside the graph and storing one does
    not change graph state.
    """
    obj = graph.get_object(object_id)
    patterns: list[Pattern] = []
    for edge in graph.incident_relationships(object_id):
        role = "subject" if edge.subject == object_id else "object"
        peer_id = edge.object if role == "subject" else edge.subject
        pattern = (edge.predicate, role, graph.get_object(peer_id).category)
        if pattern not in patterns:
            patterns.append(pattern)
    return Template(
        template_id=obj.category,
        category=obj.category,
        attributes=obj.attribute_labels(),
        relationship_patterns=patterns,
    )


class Command:
    """Base class; subclasses mutate in apply() and revert exactly in undo()."""

    kind = "command"

    def apply(self, graph: SceneGraph, templates: TemplateRegistry) -> Effect:
        raise NotImplementedError

    def undo(self, graph: SceneGraph) -> Effect:
        raise NotImplementedError

    def to_record(self) -> dict:
        raise NotImplementedError


@dataclass
class AddObject(Command):
    category: str
    node_id: str | None = None

    kind = "add_object"

    def apply(self, graph, templates):
        self.node_id = graph.add_object(self.category, self.node_id)
        return Effect(self.kind, created=(self.node_id,))

    def undo(self, graph):
        graph.pop_object(self.node_id)
        return Effect("undo", removed=(self.node_id,))

    def to_record(self):
        return {"op": self.kind, "category": self.category, "id": self.node_id}


@dataclass
class AddAttribute(Command):
    object_id: str
    label: str
    node_id: str | None = None

    kind = "add_attribute"

    def apply(self, graph, templates):
        self.node_id = graph.add_attribute(self.object_id, self.label, self.node_id)
        return Effect(self.kind, created=(self.node_id,))

    def undo(self, graph):
        graph.pop_attribute(self.node_id)
        return Effect("undo", removed=(self.node_id,))

    def to_record(self):
        return {"op": self.kind, "object": self.object_id, "label": self.label, "id": self.node_id}


@dataclass
class AddRelationship(Command):
    subject_id: str
    object_id: str
    predicate: str
    node_id: str | None = None

    kind = "add_relationship"

    def apply(self, graph, templates):
        self.node_id = graph.add_relationship(
            self.subject_id, self.object_id, self.predicate, self.node_id
        )
        return Effect(self.kind, created=(self.node_id,))

    def undo(self, graph):
        graph.pop_relationship(self.node_id)
        return Effect("undo", removed=(self.node_id,))

    def to_record(self):
        return {
            "op": self.kind,
            "subject": self.subject_id,
            "object": self.object_id,
            "predicate": self.predicate,
            "id": self.node_id,
        }


@dataclass
class Remove(Command):
    node_id: str
    _restore: tuple | None = field(default=None, repr=False)

    kind = "remove"

    def apply(self, graph, templates):
        node = graph.find_node(self.node_id)
        if isinstance(node, ObjectNode):
            was_collapsed = self.node_id in graph.collapsed
            index, obj, edges = graph.pop_object(self.node_id)
            self._restore = ("object", index, obj, edges, was_collapsed)
            removed = (
                [obj.node_id]
                + [a.node_id for a in obj.attributes]
                + [e.node_id for _, e in edges]
            )
            return Effect(self.kind, removed=tuple(removed))
        if isinstance(node, AttributeNode):
            owner, index, attr = graph.pop_attribute(self.node_id)
            self._restore = ("attribute", owner, index, attr)
            return Effect(self.kind, removed=(self.node_id,))
        index, edge = graph.pop_relationship(self.node_id)
        self._restore = ("relationship", index, edge)
        return Effect(self.kind, removed=(self.node_id,))

    def undo(self, graph):
        shape = self._restore[0]
        if shape == "object":
            _, index, obj, edges, was_collapsed = self._restore
            graph.insert_object(index, obj)
            for j, edge in edges:  # ascending indices restore original order
                graph.insert_relationship(j, edge)
            if was_collapsed:
                graph.collapsed.add(obj.node_id)
            restored = (
                [obj.node_id]
                + [a.node_id for a in obj.attributes]
                + [e.node_id for _, e in edges]
            )
            return Effect("undo", created=tuple(restored))
        if shape == "attribute":
            _, owner, index, attr = self._restore
            graph.insert_attribute(owner, index, attr)
            return Effect("undo", created=(attr.node_id,))
        _, index, edge = self._restore
        graph.insert_relationship(index, edge)
        return Effect("undo", created=(edge.node_id,))

    def to_record(self):
        return {"op": self.kind, "id": self.node_id}


@dataclass
class Clone(Command):
    object_id: str
    clone_id: str | None = None
    attribute_ids: list[str] | None = None
    relationship_ids: list[str] | None = None

    kind = "clone"

    def apply(self, graph, templates):
        source = graph.get_object(self.object_id)
        incident = graph.incident_relationships(self.object_id)

        clone_id = graph.add_object(source.category, self.clone_id)
        forced_attrs = iter(self.attribute_ids or [])
        attr_ids = [
            graph.add_attribute(clone_id, attr.label, next(forced_attrs, None))
            for attr in source.attributes
        ]
        forced_rels = iter(self.relationship_ids or [])
        rel_ids = []
        for edge in incident:
            subject = clone_id if edge.subject == self.object_id else edge.subject
            object_ = clone_id if edge.object == self.object_id else edge.object
            if graph.has_triple(subject, edge.predicate, object_):
                continue  # conflicting copies are skipped, not errors
            rel_ids.append(
                graph.add_relationship(subject, object_, edge.predicate, next(forced_rels, None))
            )
        self.clone_id, self.attribute_ids, self.relationship_ids = clone_id, attr_ids, rel_ids
        return Effect(self.kind, created=tuple([clone_id] + attr_ids + rel_ids))

    def undo(self, graph):
        for rel_id in self.relationship_ids:
            graph.pop_relationship(rel_id)
        graph.pop_object(self.clone_id)
        removed = [self.clone_id] + self.attribute_ids + self.relationship_ids
        return Effect("undo", removed=tuple(removed))

    def to_record(self):
        return {
            "op": self.kind,
            "source": self.object_id,
            "id": self.clone_id,
            "attribute_ids": list(self.attribute_ids),
            "relationship_ids": list(self.relationship_ids),
        }


@dataclass
class Drag(Command):
    node_id: str
    x: float
    y: float
    _previous: tuple | None = field(default=None, repr=False)

    kind = "drag"

    def apply(self, graph, templates):
        self._previous = graph.set_position_override(self.node_id, (self.x, self.y))
        return Effect(self.kind, updated=(self.node_id,))

    def undo(self, graph):
        graph.set_position_override(self.node_id, self._previous)
        return Effect("undo", updated=(self.node_id,))

    def to_record(self):
        return {"op": self.kind, "id": self.node_id, "position": [self.x, self.y]}


@dataclass
class Collapse(Command):
    object_id: str

    kind = "collapse"

    def apply(self, graph, templates):
        graph.get_object(self.object_id)
        if self.object_id in graph.collapsed:
            raise StateError(f"{self.object_id!r} is already collapsed", node_id=self.object_id)
        graph.collapsed.add(self.object_id)
        return Effect(self.kind, updated=(self.object_id,))

    def undo(self, graph):
        graph.collapsed.discard(self.object_id)
        return Effect("undo", updated=(self.object_id,))

    def to_record(self):
        return {"op": self.kind, "id": self.object_id}


@dataclass
class Expand(Command):
    object_id: str

    kind = "expand"

    def apply(self, graph, templates):
        graph.get_object(self.object_id)
        if self.object_id not in graph.collapsed:
            raise StateError(f"{self.object_id!r} is not collapsed", node_id=self.object_id)
        graph.collapsed.discard(self.object_id)
        return Effect(self.kind, updated=(self.object_id,))

    def undo(self, graph):
        graph.collapsed.add(self.object_id)
        return Effect("undo", updated=(self.object_id,))

    def to_record(self):
        return {"op": self.kind, "id": self.object_id}


@dataclass
class ApplyTemplate(Command):
    """Inherit a stored template's attributes and relationship patterns.

    The first application resolves the template against the live graph:
    attributes already on the target are skipped; a pattern binds only when
    exactly one live peer of its category exists (the target itself excluded),
    otherwise it is reported as a pending suggestion.  The resolved additions
    are recorded so replay does not depend on registry state.
    """

    template_id: str
    target_id: str
    attributes: list[dict] | None = None  # [{"label", "id"}]
    relationships: list[dict] | None = None  # [{"subject", "object", "predicate", "id"}]
    pending: list[Pattern] = field(default_factory=list)

    kind = "apply_template"

    def _resolve(self, graph: SceneGraph, templates: TemplateRegistry) -> None:
        template = templates.get(self.template_id)
        target = graph.get_object(self.target_id)
        existing = set(target.attribute_labels())
        self.attributes = [
            {"label": label, "id": None} for label in template.attributes if label not in existing
        ]
        self.relationships = []
        self.pending = []
        for predicate, role, peer_category in template.relationship_patterns:
            peers = [
                o.node_id
                for o in graph.objects
                if o.category == peer_category and o.node_id != self.target_id
            ]
            if len(peers) != 1:
                self.pending.append((predicate, role, peer_category))
                continue
            subject, object_ = (
                (self.target_id, peers[0]) if role == "subject" else (peers[0], self.target_id)
            )
            if graph.has_triple(subject, predicate, object_):
                continue  # already present, skip silently like clone does
            self.relationships.append(
                {"subject": subject, "object": object_, "predicate": predicate, "id": None}
            )

    def apply(self, graph, templates):
        if self.attributes is None:
            self._resolve(graph, templates)
        else:
            graph.get_object(self.target_id)
        for entry in self.attributes:
            entry["id"] = graph.add_attribute(self.target_id, entry["label"], entry["id"])
        for entry in self.relationships:
            entry["id"] = graph.add_relationship(
                entry["subject"], entry["object"], entry["predicate"], entry["id"]
            )
        created = [e["id"] for e in self.attributes] + [e["id"] for e in self.relationships]
        return Effect(self.kind, created=tuple(created), pending=tuple(self.pending))

    def undo(self, graph):
        for entry in self.relationships:
            graph.pop_relationship(entry["id"])
        for entry in self.attributes:
            graph.pop_attribute(entry["id"])
        removed = [e["id"] for e in self.attributes] + [e["id"] for e in self.relationships]
        return Effect("undo", removed=tuple(removed))

    def to_record(self):
        return {
            "op": self.kind,
            "template_id": self.template_id,
            "target": self.target_id,
            "attributes": [dict(e) for e in self.attributes],
            "relationships": [dict(e) for e in self.relationships],
            "pending": [list(p) for p in self.pending],
        }


_RECORD_FIELDS = {
    "add_object": {"category", "id"},
    "add_attribute": {"object", "label", "id"},
    "add_relationship": {"subject", "object", "predicate", "id"},
    "remove": {"id"},
    "clone": {"source", "id", "attribute_ids", "relationship_ids"},
    "drag": {"id", "position"},
    "collapse": {"id"},
    "expand": {"id"},
    "apply_template": {"template_id", "target", "attributes", "relationships", "pending"},
}


def decode_command(record: dict) -> Command:
    """Decode one canonical record (or client envelope body) into a Command.

    Ids are optional: absent for fresh client commands, present in persisted
    logs so replay reproduces them.
    """
    if not isinstance(record, dict) or "op" not in record:
        raise ValidationError("command record must be an object with an 'op' field")
    op = record["op"]
    allowed = _RECORD_FIELDS.get(op)
    if allowed is None:
        raise ValidationError(f"unknown command op {op!r}")
    extra = set(record) - allowed - {"op"}
    if extra:
        raise ValidationError(f"unexpected fields for {op!r}: {sorted(extra)}")
    try:
        if op == "add_object":
            return AddObject(category=_text(record, "category"), node_id=record.get("id"))
        if op == "add_attribute":
            return AddAttribute(
                object_id=_text(record, "object"),
                label=_text(record, "label"),
                node_id=record.get("id"),
            )
        if op == "add_relationship":
            return AddRelationship(
                subject_id=_text(record, "subject"),
                object_id=_text(record, "object"),
                predicate=_text(record, "predicate"),
                node_id=record.get("id"),
            )
        if op == "remove":
            return Remove(node_id=_text(record, "id"))
        if op == "clone":
            return Clone(
                object_id=_text(record, "source"),
                clone_id=record.get("id"),
                attribute_ids=record.get("attribute_ids"),
                relationship_ids=record.get("relationship_ids"),
            )
        if op == "drag":
            x, y = record["position"]
            return Drag(node_id=_text(record, "id"), x=float(x), y=float(y))
        if op == "collapse":
            return Collapse(object_id=_text(record, "id"))
        if op == "expand":
            return Expand(object_id=_text(record, "id"))
        return ApplyTemplate(
            template_id=_text(record, "template_id"),
            target_id=_text(record, "target"),
            attributes=record.get("attributes"),
            relationships=record.get("relationships"),
            pending=[tuple(p) for p in record.get("pending", [])],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed {op!r} command: {exc}") from exc


def _text(record: dict, key: str) -> str:
    value = record[key]
    if not isinstance(value, str):
        raise ValidationError(f"field {key!r} must be a string")
    return value


@dataclass
class CommandLog:
    """Applied commands plus a cursor separating applied from undone."""

    applied: list[Command] = field(default_factory=list)
    cursor: int = 0

    def record(self, command: Command) -> None:
        del self.applied[self.cursor:]  # a new edit discards the undone suffix
        self.applied.append(command)
        self.cursor += 1

    def effective(self) -> list[Command]:
        return self.applied[: self.cursor]


class GraphEditor:
    """One graph plus its undo log and template registry.

    apply/undo must be externally serialized per graph (the service holds a
    per-graph lock); the editor itself does no locking.
    """

    def __init__(self, graph: SceneGraph, templates: TemplateRegistry | None = None):
        self.graph = graph
        self.log = CommandLog()
        self.templates = templates if templates is not None else TemplateRegistry()

    def apply(self, command: Command) -> Effect:
        effect = command.apply(self.graph, self.templates)  # raises -> nothing recorded
        self.log.record(command)
        return effect

    def undo(self) -> Effect:
        if self.log.cursor == 0:
            raise StateError("nothing to undo")
        command = self.log.applied[self.log.cursor - 1]
        effect = command.undo(self.graph)
        self.log.cursor -= 1
        return effect

    # Convenience wrappers used by tests and the CLI

    def add_object(self, category: str) -> Effect:
        return self.apply(AddObject(category))

    def add_attribute(self, object_id: str, label: str) -> Effect:
        return self.apply(AddAttribute(object_id, label))

    def add_relationship(self, subject_id: str, object_id: str, predicate: str) -> Effect:
        return self.apply(AddRelationship(subject_id, object_id, predicate))

    def remove(self, node_id: str) -> Effect:
        return self.apply(Remove(node_id))

    def clone(self, object_id: str) -> Effect:
        return self.apply(Clone(object_id))

    def drag(self, node_id: str, x: float, y: float) -> Effect:
        return self.apply(Drag(node_id, x, y))

    def collapse(self, object_id: str) -> Effect:
        return self.apply(Collapse(object_id))

    def expand(self, object_id: str) -> Effect:
        return self.apply(Expand(object_id))

    def store_template(self, object_id: str) -> Template:
        template = store_template(self.graph, object_id)
        self.templates.store(template)
        return template

    def apply_template(self, template_id: str, target_id: str) -> Effect:
        return self.apply(ApplyTemplate(template_id, target_id))

    def replay_records(self, records: list[dict]) -> None:
        """Re-execute persisted records (commands and undo markers) in order."""
        for record in records:
            if record.get("op") == "undo":
                self.undo()
            else:
                self.apply(decode_command(copy.deepcopy(record)))
