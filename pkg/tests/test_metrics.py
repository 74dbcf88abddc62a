import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scenegrapher import StateError, ValidationError, instances_per_minute, new_graph, new_session

from helpers import fixture_editor


def test_published_rate_fixed_points():
    assert instances_per_minute(49, 600.0) == pytest.approx(4.9, abs=1e-9)
    assert instances_per_minute(21, 600.0) == pytest.approx(2.1, abs=1e-9)


def test_zero_instances_zero_rate():
    assert instances_per_minute(0, 17.3) == 0.0


def test_nonpositive_duration_rejected():
    for bad in (0.0, -1.0, float("nan"), float("inf")):
        with pytest.raises(ValidationError):
            instances_per_minute(10, bad)
    with pytest.raises(ValidationError):
        instances_per_minute(-1, 60.0)


@settings(max_examples=80, deadline=None)
@given(
    instances=st.integers(0, 10_000),
    duration=st.floats(0.001, 10_000.0, allow_nan=False, allow_infinity=False),
)
def test_rate_times_minutes_equals_instances(instances, duration):
    rate = instances_per_minute(instances, duration)
    assert math.isclose(rate * (duration / 60.0), instances, rel_tol=1e-9, abs_tol=1e-12)


def test_session_close_computes_rate():
    graph = fixture_editor().graph  # 6 instances
    record = new_session(graph.graph_id, mono=100.0, wall=5000.0)
    record.note_command(mono=110.0, wall=5010.0)
    record.note_command(mono=120.0, wall=5020.0)
    record.close(graph, mono=170.0, wall=5070.0)  # 60 s drawing
    assert record.command_count == 2
    assert record.instance_count == 6
    assert record.duration_seconds == pytest.approx(60.0)
    assert record.rate == pytest.approx(6.0, abs=1e-9)
    assert not record.is_open()


def test_timer_starts_at_first_command_not_creation():
    graph = fixture_editor().graph
    record = new_session(graph.graph_id, mono=0.0, wall=0.0)
    record.note_command(mono=40.0, wall=40.0)  # idle 40 s before drawing
    record.close(graph, mono=100.0, wall=100.0)
    assert record.duration_seconds == pytest.approx(60.0)


def test_close_without_commands_measures_from_creation():
    graph = new_graph()
    record = new_session(graph.graph_id, mono=10.0, wall=10.0)
    record.close(graph, mono=70.0, wall=70.0)
    assert record.duration_seconds == pytest.approx(60.0)
    assert record.instance_count == 0
    assert record.rate == 0.0


def test_double_close_is_a_state_error():
    graph = new_graph()
    record = new_session(graph.graph_id, mono=0.0, wall=0.0)
    record.close(graph, mono=1.0, wall=1.0)
    with pytest.raises(StateError):
        record.close(graph, mono=2.0, wall=2.0)
    with pytest.raises(StateError):
        record.note_command(mono=3.0, wall=3.0)


def test_clock_regression_never_goes_negative():
    graph = new_graph()
    record = new_session(graph.graph_id, mono=100.0, wall=100.0)
    record.note_command(mono=100.0, wall=100.0)
    record.close(graph, mono=99.5, wall=50.0)  # clock went backwards
    assert record.duration_seconds == 0.0
    assert record.rate == 0.0


def test_summary_shapes():
    graph = fixture_editor().graph
    record = new_session(graph.graph_id, mono=0.0, wall=1000.0)
    live = record.summary(graph, mono=30.0)
    assert live["open"] is True
    assert live["duration_seconds"] == pytest.approx(30.0)
    assert live["instance_count"] == 6
    assert live["instances_per_minute"] == pytest.approx(12.0)
    record.note_command(mono=10.0, wall=1010.0)
    record.close(graph, mono=40.0, wall=1040.0)
    closed = record.summary()
    assert closed["open"] is False
    assert closed["duration_seconds"] == pytest.approx(30.0)
    assert closed["instances_per_minute"] == pytest.approx(12.0)
    assert closed["command_count"] == 1
