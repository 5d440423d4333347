"""Core domain types for event logs.

An event is a timestamped record of named attribute values; traces group
events that share a case key, ordered by time; an event log is a multiset
of traces.  Every event carries a label (a tuple of attribute values,
defaulting to all of them) and the log's alphabet is the set of labels
occurring in it, always recomputed from the traces.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from datetime import date, datetime, time, timezone
from typing import Any, Iterable, Iterator, Mapping


class MissingAttributeError(KeyError):
    """An operation referenced an attribute the event does not carry."""

    def __init__(self, attribute: str, event_id: Any):
        super().__init__(attribute)
        self.attribute = attribute
        self.event_id = event_id

    def __str__(self) -> str:
        return f"event {self.event_id!r} has no attribute {self.attribute!r}"


def _value_key(value: Any) -> tuple:
    """Total order over the attribute-value types we admit.

    Numbers compare numerically among themselves; other types compare within
    their own group.  Cross-type comparisons fall back to the group rank so
    that sorting never raises.
    """
    if isinstance(value, bool):
        return (0, float(value))
    if isinstance(value, (int, float)):
        return (0, float(value))
    if isinstance(value, str):
        return (1, value)
    if isinstance(value, time):
        return (2, value.isoformat())
    if isinstance(value, datetime):
        return (3, value.astimezone(timezone.utc).isoformat())
    if isinstance(value, date):
        return (4, value.isoformat())
    return (5, repr(value))


def _id_key(event_id: Any) -> tuple:
    """Sort key for event ids; digit strings order numerically."""
    if isinstance(event_id, int):
        return (0, event_id, "")
    text = str(event_id)
    if text.isdigit():
        return (0, int(text), text)
    return (1, 0, text)


@functools.total_ordering
class Label:
    """An event label: a tuple of attribute values compared componentwise.

    Labels are totally ordered so every iteration over alphabets and report
    rows is deterministic.
    """

    __slots__ = ("parts",)

    def __init__(self, *parts: Any):
        if len(parts) == 1 and isinstance(parts[0], tuple):
            parts = parts[0]
        object.__setattr__(self, "parts", tuple(parts))

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("Label is immutable")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Label) and self.parts == other.parts

    def __lt__(self, other: "Label") -> bool:
        if not isinstance(other, Label):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    def __hash__(self) -> int:
        return hash(self.parts)

    def __repr__(self) -> str:
        return f"Label{self.parts!r}"

    def __str__(self) -> str:
        return "+".join(str(p) for p in self.parts)

    def sort_key(self) -> tuple:
        return tuple(_value_key(p) for p in self.parts)

    def json_parts(self) -> list:
        """Label components as JSON-friendly values."""
        out = []
        for p in self.parts:
            if isinstance(p, (datetime, date, time)):
                out.append(p.isoformat())
            else:
                out.append(p)
        return out


@dataclass(frozen=True)
class Event:
    """A single timestamped observation.

    ``attributes`` is an ordered name -> value map (values are strings,
    numbers, or instants).  Timestamps are normalized to UTC on
    construction; naive inputs are taken as UTC.  The label defaults to the
    tuple of all attribute values and is replaced by relabeling functions.
    """

    id: Any
    timestamp: datetime
    attributes: tuple[tuple[str, Any], ...]
    label: Label = None  # type: ignore[assignment]

    def __init__(
        self,
        id: Any,
        timestamp: datetime,
        attributes: Mapping[str, Any] | Iterable[tuple[str, Any]] = (),
        label: Label | None = None,
    ):
        object.__setattr__(self, "id", id)
        if not isinstance(timestamp, datetime):
            raise TypeError(f"event {id!r}: timestamp must be a datetime")
        if timestamp.tzinfo is None:
            timestamp = timestamp.replace(tzinfo=timezone.utc)
        object.__setattr__(self, "timestamp", timestamp.astimezone(timezone.utc))
        if isinstance(attributes, Mapping):
            attrs = tuple(attributes.items())
        else:
            attrs = tuple(attributes)
        object.__setattr__(self, "attributes", attrs)
        if label is None:
            label = Label(tuple(v for _, v in attrs))
        object.__setattr__(self, "label", label)

    def attribute(self, name: str) -> Any:
        for key, value in self.attributes:
            if key == name:
                return value
        raise MissingAttributeError(name, self.id)

    def has_attribute(self, name: str) -> bool:
        return any(key == name for key, _ in self.attributes)

    def with_label(self, label: Label) -> "Event":
        return Event(self.id, self.timestamp, self.attributes, label)

    def sort_key(self) -> tuple:
        return (self.timestamp, _id_key(self.id))


def label_of(event: Event, projection: list[str] | tuple[str, ...]) -> Label:
    """Project an event onto the named attributes, in the given order.

    Raises MissingAttributeError naming the attribute and event id when a
    named attribute is absent.
    """
    return Label(tuple(event.attribute(name) for name in projection))


@dataclass(frozen=True)
class Trace:
    """A time-ordered sequence of events sharing one case key.

    Events are sorted by (timestamp, id) on construction, so equal-timestamp
    runs have a fixed order and rebuilding a trace from its own events is
    the identity.
    """

    case_id: Any
    events: tuple[Event, ...]

    def __init__(self, case_id: Any, events: Iterable[Event]):
        object.__setattr__(self, "case_id", case_id)
        ordered = tuple(sorted(events, key=Event.sort_key))
        seen: set = set()
        for e in ordered:
            if e.id in seen:
                raise ValueError(f"duplicate event id {e.id!r} in trace {case_id!r}")
            seen.add(e.id)
        object.__setattr__(self, "events", ordered)

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[Event]:
        return iter(self.events)

    def labels(self) -> tuple[Label, ...]:
        return tuple(e.label for e in self.events)


@dataclass(frozen=True)
class EventLog:
    """A finite multiset of traces.

    The alphabet is derived from the traces on every access, never cached,
    so it cannot go stale.
    """

    traces: tuple[Trace, ...] = field(default_factory=tuple)

    def __init__(self, traces: Iterable[Trace] = ()):
        object.__setattr__(self, "traces", tuple(traces))

    def __len__(self) -> int:
        return len(self.traces)

    def __iter__(self) -> Iterator[Trace]:
        return iter(self.traces)

    @property
    def event_count(self) -> int:
        return sum(len(t) for t in self.traces)

    @property
    def alphabet(self) -> tuple[Label, ...]:
        return log_alphabet(self)


def log_alphabet(log: EventLog) -> tuple[Label, ...]:
    """Distinct labels occurring in the log, in sorted (deterministic) order."""
    return tuple(sorted({e.label for t in log for e in t}))
