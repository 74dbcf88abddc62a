"""Implicit per-session timing and instances-per-minute accounting.

The timer starts at the first applied command (not at session creation) and
stops when the graph is saved/exported.  Durations come from the monotonic
clock so wall-clock adjustments can never yield negative spans; wall times are
kept only for display.
"""

from __future__ import annotations

import math
import time
import uuid
from dataclasses import dataclass

from .errors import StateError, ValidationError
from .model import SceneGraph


def instances_per_minute(instances: int, duration_seconds: float) -> float:
    """Annotation throughput: instances divided by duration in minutes."""
    if instances < 0:
        raise ValidationError(f"instance count must be nonnegative, got {instances}")
    if not (duration_seconds > 0 and math.isfinite(duration_seconds)):
        raise ValidationError(f"duration must be positive seconds, got {duration_seconds!r}")
    return instances / (duration_seconds / 60.0)


@dataclass
class SessionRecord:
    session_id: str
    graph_id: str
    created_wall: float
    created_mono: float
    started_wall: float | None = None
    started_mono: float | None = None
    ended_wall: float | None = None
    duration_seconds: float | None = None
    command_count: int = 0
    instance_count: int | None = None
    rate: float | None = None

    def is_open(self) -> bool:
        return self.ended_wall is None

    def note_command(self, mono: float | None = None, wall: float | None = None) -> None:
        if not self.is_open():
            raise StateError("session already closed")
        if self.started_mono is None:
            self.started_mono = time.monotonic() if mono is None else mono
            self.started_wall = time.time() if wall is None else wall
        self.command_count += 1

    def close(
        self, graph: SceneGraph, mono: float | None = None, wall: float | None = None
    ) -> "SessionRecord":
        """Stamp the end time and freeze the instance snapshot and rate."""
        if not self.is_open():
            raise StateError("session already closed")
        mono = time.monotonic() if mono is None else mono
        # no command yet: measure from session creation instead
        base = self.created_mono if self.started_mono is None else self.started_mono
        self.duration_seconds = max(mono - base, 0.0)
        self.ended_wall = time.time() if wall is None else wall
        self.instance_count = graph.instance_count()
        if self.duration_seconds > 0:
            self.rate = instances_per_minute(self.instance_count, self.duration_seconds)
        else:
            self.rate = 0.0
        return self

    def summary(self, graph: SceneGraph | None = None, mono: float | None = None) -> dict:
        """JSON-ready snapshot; for an open session the duration/rate are live."""
        if self.is_open():
            mono = time.monotonic() if mono is None else mono
            base = self.created_mono if self.started_mono is None else self.started_mono
            duration = max(mono - base, 0.0)
            instances = graph.instance_count() if graph is not None else None
            rate = (
                instances_per_minute(instances, duration)
                if instances is not None and duration > 0
                else 0.0
            )
        else:
            duration, instances, rate = self.duration_seconds, self.instance_count, self.rate
        return {
            "session_id": self.session_id,
            "graph_id": self.graph_id,
            "open": self.is_open(),
            "started_at": self.started_wall,
            "ended_at": self.ended_wall,
            "duration_seconds": duration,
            "command_count": self.command_count,
            "instance_count": instances,
            "instances_per_minute": rate,
        }


def new_session(graph_id: str, mono: float | None = None, wall: float | None = None) -> SessionRecord:
    return SessionRecord(
        session_id=uuid.uuid4().hex[:12],
        graph_id=graph_id,
        created_wall=time.time() if wall is None else wall,
        created_mono=time.monotonic() if mono is None else mono,
    )
