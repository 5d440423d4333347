"""Event ingestion: CSV parsing, a minimal XES subset, and trace partitioning.

CSV input is UTF-8 with a header row and RFC-4180 quoting.  XES support is
deliberately minimal: log/trace/event elements, the event name and timestamp,
and string attributes; everything else is skipped and counted as a warning.
"""

from __future__ import annotations

import csv
import io
import logging
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Any, Iterable
from zoneinfo import ZoneInfo

from .model import Event, EventLog, Label, Trace, _value_key

logger = logging.getLogger(__name__)

SYNTHESIZE = "synthesize"

XES_NAME_KEY = "concept:name"
XES_TIME_KEY = "time:timestamp"


class CsvFormatError(ValueError):
    """Malformed CSV input; the message carries the offending line number."""


class XesFormatError(ValueError):
    """Malformed or unsupported XES input."""


def parse_timestamp(text: str, fmt: str | None, tz: ZoneInfo) -> datetime:
    """Parse a timestamp string; naive results are localized to ``tz``.

    ``fmt`` is a strptime format, or None/"iso8601" for ISO-8601.
    """
    text = text.strip()
    try:
        if fmt is None or fmt == "iso8601":
            # Python 3.10 fromisoformat does not accept a trailing Z.
            parsed = datetime.fromisoformat(text.replace("Z", "+00:00"))
        else:
            parsed = datetime.strptime(text, fmt)
    except ValueError as exc:
        raise ValueError(f"unparseable timestamp {text!r}") from exc
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=tz)
    return parsed.astimezone(timezone.utc)


@dataclass(frozen=True)
class CsvSchema:
    """Column layout of a CSV event file.

    ``id_column`` may be the sentinel "synthesize", in which case ids are the
    1-based data-row index.  ``timezone`` interprets naive timestamps; all
    timestamps are stored UTC.
    """

    timestamp_column: str
    attribute_columns: tuple[str, ...]
    id_column: str = SYNTHESIZE
    timestamp_format: str | None = None
    delimiter: str = ","
    timezone: str = "UTC"

    def __post_init__(self):
        if not self.timestamp_column:
            raise ValueError("timestamp_column is mandatory")
        if not self.attribute_columns:
            raise ValueError("attribute_columns must be non-empty")
        if len(self.delimiter) != 1:
            raise ValueError("delimiter must be a single character")
        object.__setattr__(self, "attribute_columns", tuple(self.attribute_columns))


@dataclass(frozen=True)
class PartitionKeySpec:
    """How events are grouped into traces.

    The key of an event is the tuple of its values for ``attribute_keys``,
    optionally extended with the calendar day (midnight to midnight in
    ``timezone``) of its timestamp.
    """

    attribute_keys: tuple[str, ...] = ()
    calendar_key: str = "none"  # "none" | "day"
    timezone: str = "UTC"

    def __post_init__(self):
        object.__setattr__(self, "attribute_keys", tuple(self.attribute_keys))
        if self.calendar_key not in ("none", "day"):
            raise ValueError(f"unsupported calendar_key {self.calendar_key!r}")
        if not self.attribute_keys and self.calendar_key == "none":
            raise ValueError("at least one of attribute_keys or calendar_key required")

    def key_of(self, event: Event) -> tuple:
        parts = [event.attribute(name) for name in self.attribute_keys]
        if self.calendar_key == "day":
            local = event.timestamp.astimezone(ZoneInfo(self.timezone))
            parts.append(local.date())
        return tuple(parts)


def _decode(data: bytes | str) -> str:
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CsvFormatError(f"input is not valid UTF-8: {exc}") from exc


def parse_csv(data: bytes | str, schema: CsvSchema) -> list[Event]:
    """Parse CSV text into one Event per data row.

    Synthesized ids are the 1-based data-row index.  Raises CsvFormatError on
    ragged rows, unparseable timestamps, or duplicate explicit ids, naming
    the line.
    """
    text = _decode(data)
    reader = csv.reader(io.StringIO(text), delimiter=schema.delimiter)
    try:
        header = next(reader)
    except StopIteration:
        raise CsvFormatError("empty input: missing header row")

    columns = {name: i for i, name in enumerate(header)}
    needed = [schema.timestamp_column, *schema.attribute_columns]
    if schema.id_column != SYNTHESIZE:
        needed.append(schema.id_column)
    for name in needed:
        if name not in columns:
            raise CsvFormatError(f"header is missing column {name!r}")

    tz = ZoneInfo(schema.timezone)
    events: list[Event] = []
    seen_ids: set = set()
    for row_index, row in enumerate(reader, start=1):
        line = reader.line_num
        if not row:
            continue
        if len(row) != len(header):
            raise CsvFormatError(
                f"line {line}: expected {len(header)} fields, got {len(row)}"
            )
        if schema.id_column == SYNTHESIZE:
            event_id: Any = row_index
        else:
            event_id = row[columns[schema.id_column]]
            if event_id in seen_ids:
                raise CsvFormatError(f"line {line}: duplicate event id {event_id!r}")
            seen_ids.add(event_id)
        try:
            ts = parse_timestamp(row[columns[schema.timestamp_column]],
                                 schema.timestamp_format, tz)
        except ValueError as exc:
            raise CsvFormatError(f"line {line}: {exc}") from exc
        attrs = [(name, row[columns[name]]) for name in schema.attribute_columns]
        events.append(Event(event_id, ts, attrs))
    return events


def partition(events: Iterable[Event], key: PartitionKeySpec) -> EventLog:
    """Group events into traces of equal partition key.

    Traces are the maximal same-key groups, internally time-ordered; the
    case id is the key value (unwrapped when the key has one component).
    """
    groups: dict[tuple, list[Event]] = {}
    for event in events:
        groups.setdefault(key.key_of(event), []).append(event)
    traces = []
    for key_value in sorted(groups, key=lambda k: tuple(_value_key(v) for v in k)):
        case_id = key_value[0] if len(key_value) == 1 else key_value
        traces.append(Trace(case_id, groups[key_value]))
    return EventLog(traces)


def parse_xes_minimal(data: bytes | str, warnings: list[str] | None = None) -> EventLog:
    """Parse the minimal XES subset into an EventLog.

    Traces keep the file's grouping; each event's label is its name
    attribute.  String attributes are kept; other attribute kinds are
    skipped and reported via ``warnings`` (and the module logger).
    """
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise XesFormatError(f"malformed XML: {exc}") from exc
    if root.tag != "log":
        raise XesFormatError(f"expected <log> root element, got <{root.tag}>")

    skipped = 0
    traces = []
    next_id = 0
    for t_index, trace_el in enumerate(root.iter("trace"), start=1):
        case_id = f"trace-{t_index}"
        events = []
        for child in trace_el:
            if child.tag == "string" and child.get("key") == XES_NAME_KEY:
                case_id = child.get("value", case_id)
            elif child.tag != "event":
                skipped += 1
        for event_el in trace_el.iter("event"):
            next_id += 1
            name = None
            ts = None
            attrs: list[tuple[str, Any]] = []
            for attr_el in event_el:
                key = attr_el.get("key")
                value = attr_el.get("value")
                if attr_el.tag == "string" and key is not None:
                    attrs.append((key, value))
                    if key == XES_NAME_KEY:
                        name = value
                elif attr_el.tag == "date" and key == XES_TIME_KEY:
                    try:
                        ts = parse_timestamp(value or "", None, ZoneInfo("UTC"))
                    except ValueError as exc:
                        raise XesFormatError(f"event {next_id}: {exc}") from exc
                else:
                    skipped += 1
            if ts is None:
                raise XesFormatError(f"event {next_id} has no {XES_TIME_KEY}")
            if name is None:
                raise XesFormatError(f"event {next_id} has no {XES_NAME_KEY}")
            events.append(Event(next_id, ts, attrs, label=Label(name)))
        traces.append(Trace(case_id, events))
    if skipped:
        logger.warning("ignored %d unsupported XES attribute(s)", skipped)
        if warnings is not None:
            warnings.append(f"ignored {skipped} unsupported XES attribute(s)")
    return EventLog(traces)


def write_csv(log: EventLog) -> str:
    """Serialize a log to CSV: id, timestamp, case, one column per attribute
    name (union over events, in order of first appearance), and the label."""
    attr_names: list[str] = []
    for trace in log:
        for event in trace:
            for name, _ in event.attributes:
                if name not in attr_names:
                    attr_names.append(name)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["id", "timestamp", "case", *attr_names, "label"])
    for trace in log:
        case = render_case_id(trace.case_id)
        for event in trace:
            attr_map = dict(event.attributes)
            writer.writerow([
                event.id,
                event.timestamp.isoformat(),
                case,
                *[attr_map.get(name, "") for name in attr_names],
                str(event.label),
            ])
    return out.getvalue()


def write_xes_minimal(log: EventLog) -> str:
    """Serialize a log to the minimal XES subset read by parse_xes_minimal."""
    root = ET.Element("log")
    for trace in log:
        trace_el = ET.SubElement(root, "trace")
        ET.SubElement(trace_el, "string",
                      key=XES_NAME_KEY, value=render_case_id(trace.case_id))
        for event in trace:
            event_el = ET.SubElement(trace_el, "event")
            ET.SubElement(event_el, "string", key=XES_NAME_KEY, value=str(event.label))
            ET.SubElement(event_el, "date",
                          key=XES_TIME_KEY, value=event.timestamp.isoformat())
    ET.indent(root)
    return ET.tostring(root, encoding="unicode") + "\n"


def render_case_id(case_id: Any) -> str:
    if isinstance(case_id, tuple):
        return "|".join(str(part) for part in case_id)
    return str(case_id)
