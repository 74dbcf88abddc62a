"""Acceptance suite: every criterion at its stated size and tolerance.

Each test prints one ACCEPTANCE line on success; a failure fails the test.
"""

import json
import random
import signal
import socket
import subprocess
import sys
import time
import xml.etree.ElementTree as ET
from collections import Counter
from pathlib import Path

import pytest

from scenegrapher import (
    GraphEditor,
    GraphStore,
    LayoutConfig,
    compute_layout,
    decode_command,
    export_sg2im,
    instances_per_minute,
    new_graph,
    parse_json,
    render_svg,
    serialize_json,
    visible_nodes,
)
from scenegrapher.serialization import (
    ATTRIBUTE_COLOR,
    OBJECT_COLOR,
    RELATIONSHIP_COLOR,
)
from scenegrapher.vocabulary import build_from_corpus

from helpers import apply_random_commands, fixture_editor, random_command

SVG_NS = "{http://www.w3.org/2000/svg}"


def _report(name: str, detail: str) -> None:
    print(f"\nACCEPTANCE: {name}: PASS ({detail})")


def test_undo_inversion_1000_sequences():
    started = time.perf_counter()
    master = random.Random(20260810)
    checked = 0
    for _ in range(1000):
        rng = random.Random(master.getrandbits(48))
        editor = GraphEditor(new_graph())
        states = [editor.graph.structural_state()]
        for _ in range(rng.randint(1, 50)):
            command = random_command(rng, editor)
            if command is None:
                continue
            editor.apply(command)
            states.append(editor.graph.structural_state())
        applied = len(states) - 1
        k = rng.randint(0, applied)
        for _ in range(k):
            editor.undo()
        assert editor.graph.structural_state() == states[applied - k]
        checked += 1
    elapsed = time.perf_counter() - started
    assert elapsed < 10.0, f"undo inversion took {elapsed:.2f}s (limit 10s)"
    _report("undo-inversion", f"{checked} sequences, k undos each, {elapsed:.2f}s")


def test_replay_determinism_from_persisted_logs(tmp_path):
    master = random.Random(777)
    sessions = 40
    for i in range(sessions):
        rng = random.Random(master.getrandbits(48))
        store = GraphStore(tmp_path / f"s{i}", compaction_interval=rng.choice([3, 7, 100]))
        graph_id = store.create_graph(image_ref=f"img/{i}.jpg")
        shadow = GraphEditor(new_graph(image_ref=f"img/{i}.jpg"))
        for _ in range(rng.randint(1, 60)):
            if shadow.log.cursor > 0 and rng.random() < 0.2:
                shadow.undo()
                store.undo(graph_id)
                continue
            command = random_command(rng, shadow)
            if command is None:
                continue
            shadow.apply(command)
            store.apply_command(graph_id, decode_command(command.to_record()))
        live = store.document_bytes(graph_id)
        store.close()
        # replaying snapshot + persisted log tail on a fresh store
        recovered = GraphStore(tmp_path / f"s{i}")
        assert recovered.document_bytes(graph_id) == live
        # and the in-memory shadow replay agrees byte for byte
        assert serialize_json(shadow.graph) == live
        recovered.close()
    _report("replay-determinism", f"{sessions} persisted sessions, byte-identical")


def test_remove_closure_500_random_graphs():
    master = random.Random(4242)
    removed_checked = 0
    while removed_checked < 500:
        rng = random.Random(master.getrandbits(48))
        editor = GraphEditor(new_graph())
        apply_random_commands(editor, rng, rng.randint(1, 35))
        graph = editor.graph
        if not graph.objects:
            continue
        victim = rng.choice(graph.objects).node_id
        editor.remove(victim)
        # brute-force scan for dangling references
        for obj in graph.objects:
            assert obj.node_id != victim
            for attr in obj.attributes:
                assert attr.owner != victim
        for edge in graph.relationships:
            assert victim not in (edge.subject, edge.object)
        assert victim not in graph.collapsed
        removed_checked += 1
    _report("remove-closure", f"{removed_checked} removals, zero dangling references")


def test_clone_isomorphism_200_pairs():
    master = random.Random(999)
    checked = 0
    while checked < 200:
        rng = random.Random(master.getrandbits(48))
        editor = GraphEditor(new_graph())
        apply_random_commands(editor, rng, rng.randint(1, 35))
        graph = editor.graph
        if not graph.objects:
            continue
        source = rng.choice(graph.objects)

        def neighborhood(object_id):
            labels = sorted(graph.get_object(object_id).attribute_labels())
            edges = sorted(
                (e.predicate, "subject", e.object)
                if e.subject == object_id
                else (e.predicate, "object", e.subject)
                for e in graph.incident_relationships(object_id)
            )
            return labels, edges

        before_labels, before_edges = neighborhood(source.node_id)
        clone_id = editor.clone(source.node_id).created[0]
        after_labels, after_edges = neighborhood(clone_id)
        assert after_labels == before_labels
        assert after_edges == [
            (p, role, clone_id if peer == source.node_id else peer)
            for (p, role, peer) in before_edges
        ]
        checked += 1
    _report("clone-isomorphism", "200 (graph, object) pairs, neighborhoods equal")


def test_serialization_round_trip_1000_graphs():
    master = random.Random(31337)
    for i in range(1000):
        rng = random.Random(master.getrandbits(48))
        editor = GraphEditor(new_graph(image_ref=f"img/{i}.jpg" if i % 3 else None))
        apply_random_commands(editor, rng, rng.randint(0, 30))
        first = serialize_json(editor.graph)
        assert serialize_json(editor.graph) == first  # deterministic
        reparsed = parse_json(first)
        assert reparsed.structural_state() == editor.graph.structural_state()
        assert serialize_json(reparsed) == first
    _report("serialization-round-trip", "1000 graphs, structural identity + byte determinism")


def test_figure_unit_fixed_point():
    editor = fixture_editor()
    graph = editor.graph
    assert graph.instance_count() == 6

    sg2im = json.loads(export_sg2im(graph))
    assert sg2im == {"objects": ["person", "horse"], "relationships": [[0, "riding", 1]]}

    root = ET.fromstring(render_svg(graph).decode("utf-8"))
    fills = Counter(c.get("fill") for c in root.iter(f"{SVG_NS}circle"))
    assert fills[OBJECT_COLOR] == 2
    assert fills[ATTRIBUTE_COLOR] == 3
    assert fills[RELATIONSHIP_COLOR] == 1
    assert sum(fills.values()) == 6
    _report("figure-unit-fixed-point", "6 instances, sg2im indices, 2 red / 3 blue / 1 yellow")


def test_metrics_fixed_points():
    assert abs(instances_per_minute(49, 600.0) - 4.9) <= 1e-9
    assert abs(instances_per_minute(21, 600.0) - 2.1) <= 1e-9
    _report("metrics-fixed-points", "49/600s -> 4.9, 21/600s -> 2.1, tol 1e-9")


def test_layout_determinism_and_separation_200_graphs():
    master = random.Random(55555)
    for _ in range(200):
        rng = random.Random(master.getrandbits(48))
        editor = GraphEditor(new_graph())
        config = LayoutConfig(min_sep=rng.choice([25.0, 40.0, 60.0]))
        # ≤100 nodes, no drags (an override lands wherever the user put it)
        while editor.graph.instance_count() < rng.randint(2, 100):
            roll = rng.random()
            graph = editor.graph
            if roll < 0.4 or not graph.objects:
                editor.add_object(rng.choice(["a", "b", "c", "d", "e"]))
            elif roll < 0.75:
                obj = rng.choice(graph.objects)
                free = [l for l in "jklmnopqrstuv" if l not in obj.attribute_labels()]
                if free:
                    editor.add_attribute(obj.node_id, rng.choice(free))
            elif roll < 0.9 and len(graph.objects) >= 2:
                subject, target = rng.sample([o.node_id for o in graph.objects], 2)
                if not graph.has_triple(subject, "near", target):
                    editor.add_relationship(subject, target, "near")
            else:
                open_objects = [
                    o.node_id for o in graph.objects if o.node_id not in graph.collapsed
                ]
                if open_objects:
                    editor.collapse(rng.choice(open_objects))

        first = compute_layout(editor.graph, config)
        second = compute_layout(editor.graph, config)
        assert first.positions == second.positions  # bit-equal floats
        assert set(first.positions) == visible_nodes(editor.graph)
        by_row = {}
        for node_id, (x, y) in first.positions.items():
            by_row.setdefault(y, []).append(x)
        for xs in by_row.values():
            xs.sort()
            for a, b in zip(xs, xs[1:]):
                assert b - a >= config.min_sep - 1e-9
    _report("layout-properties", "200 graphs ≤100 nodes, bit-equal + min_sep kept")


# -- crash recovery ------------------------------------------------------------


def _free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


def _start_server(port: int, store_dir: Path) -> subprocess.Popen:
    process = subprocess.Popen(
        [
            sys.executable,
            "-m",
            "scenegrapher.cli",
            "serve",
            "--host",
            "127.0.0.1",
            "--port",
            str(port),
            "--store-dir",
            str(store_dir),
        ],
        stdout=subprocess.DEVNULL,
        stderr=subprocess.DEVNULL,
    )
    import httpx

    deadline = time.time() + 30
    while time.time() < deadline:
        if process.poll() is not None:
            raise RuntimeError("server process exited during startup")
        try:
            if httpx.get(f"http://127.0.0.1:{port}/graphs", timeout=1.0).status_code == 200:
                return process
        except Exception:
            time.sleep(0.05)
    process.kill()
    raise RuntimeError("server did not become ready")


def test_crash_recovery_20_kill_points(tmp_path):
    import httpx

    rng = random.Random(13)
    port = _free_port()
    store_dir = tmp_path / "store"
    base = f"http://127.0.0.1:{port}"
    total_commands = 100
    kill_after = set(rng.sample(range(1, total_commands), 20))

    process = _start_server(port, store_dir)
    kills = 0
    try:
        graph_id = httpx.post(f"{base}/graphs", json={}).json()["graph_id"]
        shadow = GraphEditor(new_graph())

        applied = 0
        while applied < total_commands:
            if shadow.log.cursor > 0 and rng.random() < 0.15:
                shadow.undo()
                response = httpx.post(f"{base}/graphs/{graph_id}/undo")
            else:
                command = random_command(rng, shadow)
                if command is None:
                    continue
                shadow.apply(command)
                response = httpx.post(
                    f"{base}/graphs/{graph_id}/commands",
                    json={"command": command.to_record()},
                )
            assert response.status_code == 200, response.text
            applied += 1

            if applied in kill_after:
                process.send_signal(signal.SIGKILL)
                process.wait()
                process = _start_server(port, store_dir)
                kills += 1
                recovered = httpx.get(f"{base}/graphs/{graph_id}")
                assert recovered.content == serialize_json(shadow.graph), (
                    f"divergence after kill at command {applied}"
                )

        final = httpx.get(f"{base}/graphs/{graph_id}")
        assert final.content == serialize_json(shadow.graph)
    finally:
        process.kill()
        process.wait()
    assert kills == 20
    _report("crash-recovery", f"{kills} SIGKILLs across {total_commands} commands, exact recovery")


def test_vocabulary_recount_1000_records():
    rng = random.Random(2024)
    words = ["black", "white", "red", "tall", "small", "wet", "on", "near", "riding", "behind"]
    corpus = []
    for i in range(1000):
        if i % 2 == 0:
            corpus.append(
                {
                    "objects": [
                        {"attributes": [{"label": rng.choice(words)} for _ in range(rng.randint(0, 3))]}
                    ],
                    "relationships": [
                        {"predicate": rng.choice(words)} for _ in range(rng.randint(0, 3))
                    ],
                }
            )
        else:  # VG-style record
            corpus.append(
                {
                    "objects": [
                        {"names": ["x"], "attributes": [rng.choice(words).upper() + " "]}
                    ],
                    "relationships": [{"predicate": rng.choice(words)}],
                }
            )
    result = build_from_corpus(corpus)
    # independent single-pass brute-force recount
    oracle_attrs, oracle_preds = Counter(), Counter()
    for record in corpus:
        for obj in record["objects"]:
            for attr in obj["attributes"]:
                label = attr["label"] if isinstance(attr, dict) else attr
                oracle_attrs[label.strip().lower()] += 1
        for rel in record["relationships"]:
            oracle_preds[rel["predicate"].strip().lower()] += 1
    assert dict(result.attributes.entries) == dict(oracle_attrs)
    assert dict(result.predicates.entries) == dict(oracle_preds)
    assert result.skipped_records == 0
    for entries in (result.attributes.entries, result.predicates.entries):
        counts = [c for _, c in entries]
        assert counts == sorted(counts, reverse=True)
    _report("vocabulary-recount", "1000-record synthetic corpus equals brute-force recount")
