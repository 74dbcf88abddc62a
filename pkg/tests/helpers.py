"""Shared builders: the Figure-style fixture graph and random valid command streams."""

from __future__ import annotations

import random

from scenegrapher import (
    AddAttribute,
    AddObject,
    AddRelationship,
    ApplyTemplate,
    Clone,
    Collapse,
    Command,
    Drag,
    Expand,
    GraphEditor,
    Remove,
    new_graph,
)

CATEGORIES = ["horse", "person", "tree", "dog", "car", "sky", "grass", "building"]
LABELS = ["black", "white", "tall", "small", "green", "old", "wooden", "smiling", "wet", "round"]
PREDICATES = ["riding", "holding", "on", "near", "behind", "wearing", "above"]


def fixture_editor(image_ref: str | None = "img/2407890.jpg") -> GraphEditor:
    """Two objects, three attributes, one relationship, built through commands.

    person1 and horse2 survive (horse1 is added and removed, so the horse
    ordinal visibly never resets); person1 -> horse2 "riding".
    """
    editor = GraphEditor(new_graph(image_ref=image_ref))
    editor.add_object("person")
    editor.add_object("horse")
    editor.add_object("horse")
    editor.remove("horse1")
    editor.add_attribute("horse2", "black")
    editor.add_attribute("horse2", "white")
    editor.add_attribute("person1", "tall")
    editor.add_relationship("person1", "horse2", "riding")
    return editor


def enumerate_nodes(graph) -> list[str]:
    """Brute-force traversal oracle: every node id reachable from the graph."""
    found = []
    for obj in graph.objects:
        found.append(obj.node_id)
        for attr in obj.attributes:
            found.append(attr.node_id)
    for edge in graph.relationships:
        found.append(edge.node_id)
    return found


def incident_closure(graph, object_id: str) -> set[str]:
    """Brute-force oracle: ids that removing this object must take with it."""
    obj = graph.get_object(object_id)
    ids = {object_id}
    ids.update(a.node_id for a in obj.attributes)
    ids.update(
        e.node_id for e in graph.relationships if object_id in (e.subject, e.object)
    )
    return ids


def random_command(rng: random.Random, editor: GraphEditor) -> Command | None:
    """One random command that is valid against the editor's current graph."""
    graph = editor.graph
    choices: list[str] = ["add_object"] * 4
    if graph.objects:
        choices += ["add_attribute"] * 3 + ["clone", "drag", "remove", "collapse", "template"]
    if len(graph.objects) >= 2:
        choices += ["add_relationship"] * 3
    if graph.collapsed:
        choices.append("expand")
    kind = rng.choice(choices)

    if kind == "add_object":
        return AddObject(rng.choice(CATEGORIES))
    if kind == "add_attribute":
        obj = rng.choice(graph.objects)
        free = [l for l in LABELS if l not in obj.attribute_labels()]
        if not free:
            return None
        return AddAttribute(obj.node_id, rng.choice(free))
    if kind == "add_relationship":
        for _ in range(8):
            subject, target = rng.sample([o.node_id for o in graph.objects], 2)
            predicate = rng.choice(PREDICATES)
            if not graph.has_triple(subject, predicate, target):
                return AddRelationship(subject, target, predicate)
        return None
    if kind == "remove":
        return Remove(rng.choice(enumerate_nodes(graph)))
    if kind == "clone":
        return Clone(rng.choice(graph.objects).node_id)
    if kind == "drag":
        node_id = rng.choice(enumerate_nodes(graph))
        return Drag(node_id, rng.uniform(-500, 500), rng.uniform(-500, 500))
    if kind == "collapse":
        open_objects = [o.node_id for o in graph.objects if o.node_id not in graph.collapsed]
        if not open_objects:
            return None
        return Collapse(rng.choice(open_objects))
    if kind == "expand":
        return Expand(rng.choice(sorted(graph.collapsed)))
    # template: store one from a random object, then inherit into another
    source = rng.choice(graph.objects)
    template = editor.store_template(source.node_id)
    target = rng.choice(graph.objects)
    return ApplyTemplate(template.template_id, target.node_id)


def apply_random_commands(editor: GraphEditor, rng: random.Random, count: int) -> int:
    """Apply up to ``count`` random valid commands; returns how many applied."""
    applied = 0
    for _ in range(count):
        command = random_command(rng, editor)
        if command is None:
            continue
        editor.apply(command)
        applied += 1
    return applied


def random_editor(seed: int, steps: int = 20, image_ref: str | None = None) -> GraphEditor:
    rng = random.Random(seed)
    editor = GraphEditor(new_graph(image_ref=image_ref))
    apply_random_commands(editor, rng, steps)
    return editor
