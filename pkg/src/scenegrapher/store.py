"""File-backed graph store: canonical snapshot + append-only command log.

Per graph directory there is one live generation of three files:

    snapshot-<gen>.sg.json   canonical document at the compaction point
    commands-<gen>.log       one JSON record per applied command / undo
    counters-<gen>.json      id counters at the compaction point

Recovery parses the newest snapshot, restores counters (so ordinals are never
reused even when their allocation history was compacted away), and replays the
log tail through the command engine.  Compaction writes the next generation's
counters and empty log first and commits by writing the snapshot; stale
generations are swept afterwards, so a crash at any point leaves exactly one
replayable generation.  Appends are unbuffered single writes; an unterminated
final line is an unacknowledged command and is dropped on recovery.

An undo whose target command is already baked into the snapshot cannot be
replayed from the tail, so it triggers an immediate re-snapshot instead of an
"undo" record.
"""

from __future__ import annotations

import json
import os
import re
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO

from .commands import Command, Effect, GraphEditor, Template, TemplateRegistry
from .errors import NotFoundError, ParseError, ValidationError
from .layout import LayoutConfig, compute_layout
from .metrics import SessionRecord, new_session
from .model import SceneGraph, new_graph
from .serialization import (
    dropped_attribute_count,
    export_sg2im,
    parse_json,
    render_svg,
    serialize_json,
)

_SNAPSHOT_RE = re.compile(r"^snapshot-(\d{6})\.sg\.json$")

EXPORT_FORMATS = ("json", "svg", "sg2im")


def _snapshot_name(gen: int) -> str:
    return f"snapshot-{gen:06d}.sg.json"


def _log_name(gen: int) -> str:
    return f"commands-{gen:06d}.log"


def _counters_name(gen: int) -> str:
    return f"counters-{gen:06d}.json"


def _fsync_dir(path: Path) -> None:
    fd = os.open(path, os.O_RDONLY)
    try:
        os.fsync(fd)
    finally:
        os.close(fd)


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(data)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)
    _fsync_dir(path.parent)


def read_log_records(path: Path) -> list[dict]:
    """Decode a command log, dropping an unterminated (unacknowledged) tail."""
    if not path.exists():
        return []
    segments = path.read_bytes().split(b"\n")
    segments.pop()  # "" after the final newline, or a torn unterminated tail
    records = []
    for lineno, segment in enumerate(segments, start=1):
        if not segment:
            continue
        try:
            records.append(json.loads(segment.decode("utf-8")))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ParseError(f"{path}:{lineno}: corrupt log record: {exc}") from exc
    return records


@dataclass
class _StoredGraph:
    graph_id: str
    directory: Path
    editor: GraphEditor
    gen: int
    log_handle: IO[bytes]
    session: SessionRecord
    lock: threading.RLock = field(default_factory=threading.RLock)
    tail_records: int = 0
    # editor.log cursor corresponding to the current snapshot's state
    base_cursor: int = 0
    request_cache: dict[str, Effect] = field(default_factory=dict)


class GraphStore:
    """All persisted graphs under one root; one exclusive writer per graph."""

    def __init__(self, root: str | Path, compaction_interval: int = 100, fsync: bool = True):
        if compaction_interval < 1:
            raise ValidationError(f"compaction_interval must be >= 1, got {compaction_interval}")
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.compaction_interval = compaction_interval
        self.fsync = fsync
        self._graphs: dict[str, _StoredGraph] = {}
        self._registry_lock = threading.Lock()
        self._templates_path = self.root / "templates.json"
        if self._templates_path.exists():
            self.templates = TemplateRegistry.from_dict(
                json.loads(self._templates_path.read_text(encoding="utf-8"))
            )
        else:
            self.templates = TemplateRegistry()

    # -- lifecycle ---------------------------------------------------------

    def graph_ids(self) -> list[str]:
        return sorted(p.name for p in self.root.iterdir() if p.is_dir())

    def create_graph(self, image_ref: str | None = None) -> str:
        graph_id = uuid.uuid4().hex[:12]
        directory = self.root / graph_id
        directory.mkdir()
        graph = new_graph(image_ref=image_ref, graph_id=graph_id)
        _atomic_write(directory / _counters_name(0), self._counters_bytes(graph))
        with open(directory / _log_name(0), "wb"):
            pass
        _fsync_dir(directory)
        _atomic_write(directory / _snapshot_name(0), serialize_json(graph))
        stored = _StoredGraph(
            graph_id=graph_id,
            directory=directory,
            editor=GraphEditor(graph, templates=self.templates),
            gen=0,
            log_handle=open(directory / _log_name(0), "ab", buffering=0),
            session=new_session(graph_id),
        )
        with self._registry_lock:
            self._graphs[graph_id] = stored
        return graph_id

    def close(self) -> None:
        with self._registry_lock:
            for stored in self._graphs.values():
                stored.log_handle.close()
            self._graphs.clear()

    def _get(self, graph_id: str) -> _StoredGraph:
        with self._registry_lock:
            stored = self._graphs.get(graph_id)
            if stored is None:
                stored = self._recover(graph_id)
                self._graphs[graph_id] = stored
            return stored

    def _recover(self, graph_id: str) -> _StoredGraph:
        directory = self.root / graph_id
        if not directory.is_dir():
            raise NotFoundError(f"no graph {graph_id!r}", node_id=graph_id)
        gens = []
        for entry in directory.iterdir():
            m = _SNAPSHOT_RE.match(entry.name)
            if m:
                gens.append(int(m.group(1)))
        if not gens:
            raise ParseError(f"graph {graph_id!r} has no snapshot")
        gen = max(gens)
        graph = parse_json((directory / _snapshot_name(gen)).read_bytes(), graph_id=graph_id)
        self._restore_counters(graph, directory / _counters_name(gen))
        records = read_log_records(directory / _log_name(gen))
        editor = GraphEditor(graph, templates=self.templates)
        replayable = [r for r in records if r.get("op") != "session_summary"]
        editor.replay_records(replayable)
        self._sweep(directory, keep_gen=gen)
        return _StoredGraph(
            graph_id=graph_id,
            directory=directory,
            editor=editor,
            gen=gen,
            log_handle=open(directory / _log_name(gen), "ab", buffering=0),
            session=new_session(graph_id),
            tail_records=len(replayable),
        )

    @staticmethod
    def _restore_counters(graph: SceneGraph, path: Path) -> None:
        if not path.exists():
            return
        data = json.loads(path.read_text(encoding="utf-8"))
        for category, value in data.get("categories", {}).items():
            graph.id_counters[category] = max(graph.id_counters.get(category, 0), value)
        graph.attr_counter = max(graph.attr_counter, data.get("attr", 0))
        graph.rel_counter = max(graph.rel_counter, data.get("rel", 0))

    @staticmethod
    def _counters_bytes(graph: SceneGraph) -> bytes:
        payload = {
            "categories": dict(sorted(graph.id_counters.items())),
            "attr": graph.attr_counter,
            "rel": graph.rel_counter,
        }
        return (json.dumps(payload, ensure_ascii=False) + "\n").encode("utf-8")

    @staticmethod
    def _sweep(directory: Path, keep_gen: int) -> None:
        keep = {_snapshot_name(keep_gen), _log_name(keep_gen), _counters_name(keep_gen)}
        for entry in directory.iterdir():
            if entry.name not in keep:
                entry.unlink(missing_ok=True)

    # -- command application -------------------------------------------------

    def apply_command(
        self, graph_id: str, command: Command, request_id: str | None = None
    ) -> Effect:
        stored = self._get(graph_id)
        with stored.lock:
            if request_id is not None and request_id in stored.request_cache:
                return stored.request_cache[request_id]
            effect = stored.editor.apply(command)
            self._append(stored, command.to_record(), count=True)
            self._note_command(stored)
            self._maybe_compact(stored)
            if request_id is not None:
                stored.request_cache[request_id] = effect
            return effect

    def undo(self, graph_id: str) -> Effect:
        stored = self._get(graph_id)
        with stored.lock:
            if stored.editor.log.cursor <= stored.base_cursor:
                # target command is inside the snapshot; undo then re-snapshot
                effect = stored.editor.undo()
                self._note_command(stored)
                self._compact(stored)
            else:
                effect = stored.editor.undo()
                self._append(stored, {"op": "undo"}, count=True)
                self._note_command(stored)
                self._maybe_compact(stored)
            return effect

    def _note_command(self, stored: _StoredGraph) -> None:
        if not stored.session.is_open():
            stored.session = new_session(stored.graph_id)
        stored.session.note_command()

    def _append(self, stored: _StoredGraph, record: dict, count: bool) -> None:
        line = (json.dumps(record, ensure_ascii=False) + "\n").encode("utf-8")
        stored.log_handle.write(line)
        if self.fsync:
            os.fsync(stored.log_handle.fileno())
        if count:
            stored.tail_records += 1

    def _maybe_compact(self, stored: _StoredGraph) -> None:
        if stored.tail_records >= self.compaction_interval:
            self._compact(stored)

    def _compact(self, stored: _StoredGraph) -> None:
        graph = stored.editor.graph
        new_gen = stored.gen + 1
        _atomic_write(stored.directory / _counters_name(new_gen), self._counters_bytes(graph))
        with open(stored.directory / _log_name(new_gen), "wb"):
            pass  # truncates any leftover from an interrupted compaction
        _fsync_dir(stored.directory)
        _atomic_write(stored.directory / _snapshot_name(new_gen), serialize_json(graph))
        stored.log_handle.close()
        stored.gen = new_gen
        stored.log_handle = open(stored.directory / _log_name(new_gen), "ab", buffering=0)
        stored.tail_records = 0
        stored.base_cursor = stored.editor.log.cursor
        self._sweep(stored.directory, keep_gen=new_gen)

    # -- reads / exports ------------------------------------------------------

    def document_bytes(self, graph_id: str) -> bytes:
        stored = self._get(graph_id)
        with stored.lock:
            return serialize_json(stored.editor.graph)

    def layout_map(self, graph_id: str, config: LayoutConfig | None = None) -> dict:
        stored = self._get(graph_id)
        with stored.lock:
            return compute_layout(stored.editor.graph, config).to_dict()

    def export(self, graph_id: str, fmt: str) -> tuple[bytes, int | None]:
        """Export bytes in one of EXPORT_FORMATS; closes the open session.

        Returns (payload, dropped attribute count for sg2im else None).
        """
        if fmt not in EXPORT_FORMATS:
            raise ValidationError(f"unknown export format {fmt!r}")
        stored = self._get(graph_id)
        with stored.lock:
            graph = stored.editor.graph
            dropped = None
            if fmt == "json":
                payload = serialize_json(graph)
            elif fmt == "svg":
                payload = render_svg(graph)
            else:
                payload = export_sg2im(graph)
                dropped = dropped_attribute_count(graph)
            if stored.session.is_open():
                stored.session.close(graph)
                self._append(
                    stored,
                    {"op": "session_summary", "session": stored.session.summary()},
                    count=False,
                )
            return payload, dropped

    def metrics_summary(self, graph_id: str) -> dict:
        stored = self._get(graph_id)
        with stored.lock:
            return stored.session.summary(stored.editor.graph)

    def graph_snapshot(self, graph_id: str) -> SceneGraph:
        """A detached copy safe to read outside the graph lock."""
        stored = self._get(graph_id)
        with stored.lock:
            return parse_json(serialize_json(stored.editor.graph), graph_id=graph_id)

    # -- templates -------------------------------------------------------------

    def store_template(self, graph_id: str, object_id: str) -> Template:
        stored = self._get(graph_id)
        with stored.lock:
            template = stored.editor.store_template(object_id)
        with self._registry_lock:
            _atomic_write(
                self._templates_path,
                (json.dumps(self.templates.to_dict(), ensure_ascii=False, indent=2) + "\n").encode(
                    "utf-8"
                ),
            )
        return template

    def list_templates(self) -> list[Template]:
        return self.templates.list()
