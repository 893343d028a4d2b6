"""Trace store: probe events, example outcomes, coverage."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .snapshots import ValueSnapshot


class UnknownProbe(KeyError):
    pass


@dataclass(frozen=True)
class TraceEvent:
    probe_id: str
    example_id: str
    phase: str  # "before" | "after"
    iteration_vector: tuple[tuple[str, int], ...]  # (slider_id, index>=1), outermost first
    seq: int
    snapshot: ValueSnapshot


@dataclass
class ExampleOutcome:
    example_id: str
    name: str
    status: str = "ok"  # ok | error | timeout
    error_message: Optional[str] = None
    return_snapshot: Optional[ValueSnapshot] = None
    executed_node_ids: set[int] = field(default_factory=set)
    output: list[str] = field(default_factory=list)
    color_index: int = 0

    def __post_init__(self):
        if self.status == "error" and not self.error_message:
            raise ValueError("error outcomes carry a message")


@dataclass
class SliderRecord:
    slider_id: str
    target_id: int
    # Final per-example activation counts for this evaluation.
    counts: dict[str, int] = field(default_factory=dict)


class TraceStore:
    def __init__(self):
        self.events: list[TraceEvent] = []
        self.probe_targets: dict[str, int] = {}     # probe id -> original node id
        self.probe_labels: dict[str, str] = {}
        self.sliders: dict[str, SliderRecord] = {}
        self._seq = 0

    def register_probe(self, probe_id: str, target_id: int, label: str) -> None:
        self.probe_targets[probe_id] = target_id
        self.probe_labels[probe_id] = label

    def register_slider(self, slider_id: str, target_id: int) -> None:
        self.sliders.setdefault(slider_id, SliderRecord(slider_id, target_id))

    def record(self, probe_id: str, example_id: str, phase: str,
               iteration_vector: tuple[tuple[str, int], ...], snapshot: ValueSnapshot) -> TraceEvent:
        self._seq += 1
        event = TraceEvent(probe_id=probe_id, example_id=example_id, phase=phase,
                           iteration_vector=iteration_vector, seq=self._seq, snapshot=snapshot)
        self.events.append(event)
        return event

    def record_slider_count(self, slider_id: str, example_id: str, count: int) -> None:
        if slider_id in self.sliders:
            self.sliders[slider_id].counts[example_id] = count

    def events_for(self, probe_id: str) -> list[TraceEvent]:
        return [e for e in self.events if e.probe_id == probe_id]


def _innermost_matches(event: TraceEvent, slider_id: str, index: int) -> bool:
    """Match the innermost activation of that slider, so recursive
    activations nested inside earlier ones do not leak into outer positions."""
    last = None
    for entry in event.iteration_vector:
        if entry[0] == slider_id:
            last = entry
    return last == (slider_id, index)


def query_probe(store: TraceStore, probe_id: str,
                example_filter: Optional[str] = None,
                slider_position: Optional[tuple[str, int]] = None) -> list[TraceEvent]:
    """Events for one probe, optionally filtered to one example and to one
    slider iteration, in chronological (seq) order."""
    if probe_id not in store.probe_targets:
        raise UnknownProbe(probe_id)
    events = store.events_for(probe_id)
    if example_filter is not None:
        events = [e for e in events if e.example_id == example_filter]
    if slider_position is not None:
        slider_id, index = slider_position
        events = [e for e in events if _innermost_matches(e, slider_id, index)]
    return sorted(events, key=lambda e: e.seq)
