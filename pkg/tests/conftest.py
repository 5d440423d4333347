from datetime import datetime, timedelta, timezone
from pathlib import Path

import pytest

from labelsplit import Event, EventLog, Label, PartitionKeySpec, Projection, Trace, partition

DATA_DIR = Path(__file__).parent / "data"

# The smart-home sample: five days of bedroom-motion events (refinable into
# tossing & turning before 08:30 vs getting up at/after it), each followed by
# one living-room-motion event.  (id, day, hh:mm, sensor, activity)
SAMPLE_ROWS = [
    (1, 11, "02:45", "Bedroom motion", "Tossing & turning", 74),
    (2, 11, "03:23", "Bedroom motion", "Tossing & turning", 72),
    (3, 11, "04:59", "Bedroom motion", "Tossing & turning", 71),
    (4, 11, "06:04", "Bedroom motion", "Tossing & turning", 73),
    (5, 11, "08:45", "Bedroom motion", "Getting up", 85),
    (6, 11, "09:10", "Living room motion", "Living room motion", 79),
    (7, 12, "01:01", "Bedroom motion", "Tossing & turning", 73),
    (8, 12, "03:13", "Bedroom motion", "Tossing & turning", 75),
    (9, 12, "07:24", "Bedroom motion", "Tossing & turning", 74),
    (10, 12, "08:34", "Bedroom motion", "Getting up", 79),
    (11, 12, "09:12", "Living room motion", "Living room motion", 76),
    (12, 13, "00:45", "Bedroom motion", "Tossing & turning", 75),
    (13, 13, "02:29", "Bedroom motion", "Tossing & turning", 75),
    (14, 13, "05:19", "Bedroom motion", "Tossing & turning", 74),
    (15, 13, "05:34", "Bedroom motion", "Tossing & turning", 79),
    (16, 13, "05:39", "Bedroom motion", "Tossing & turning", 77),
    (17, 13, "08:37", "Bedroom motion", "Getting up", 79),
    (18, 13, "08:52", "Living room motion", "Living room motion", 78),
    (19, 14, "03:41", "Bedroom motion", "Tossing & turning", 75),
    (20, 14, "05:00", "Bedroom motion", "Tossing & turning", 74),
    (21, 14, "08:52", "Bedroom motion", "Getting up", 75),
    (22, 14, "09:30", "Living room motion", "Living room motion", 74),
    (23, 15, "02:11", "Bedroom motion", "Tossing & turning", 77),
    (24, 15, "02:34", "Bedroom motion", "Tossing & turning", 76),
    (25, 15, "08:35", "Bedroom motion", "Getting up", 79),
    (26, 15, "08:57", "Living room motion", "Living room motion", 77),
]


def sample_events() -> list[Event]:
    events = []
    for event_id, day, hhmm, sensor, activity, rate in SAMPLE_ROWS:
        ts = datetime.fromisoformat(f"2015-03-{day:02d} {hhmm}:00+00:00")
        events.append(Event(event_id, ts, {
            "Address": "Mountain Rd. 7",
            "Sensor": sensor,
            "Heart rate": str(rate),
            "Activity": activity,
        }))
    return events


@pytest.fixture
def sample_log() -> EventLog:
    return partition(sample_events(), PartitionKeySpec(("Address",), "day"))


@pytest.fixture
def sensor_log(sample_log) -> EventLog:
    return Projection("Sensor").apply(sample_log)


@pytest.fixture
def activity_log(sample_log) -> EventLog:
    return Projection("Activity").apply(sample_log)


def log_from_rows(rows: list[list[str]], start=None) -> EventLog:
    """Build a log from label sequences; one trace per row, labels carried in
    an 'act' attribute, timestamps one minute apart."""
    start = start or datetime(2020, 1, 1, tzinfo=timezone.utc)
    traces = []
    next_id = 0
    for t_index, row in enumerate(rows):
        events = []
        for j, name in enumerate(row):
            next_id += 1
            events.append(Event(next_id, start + timedelta(minutes=j),
                                {"act": name}, label=Label(name)))
        traces.append(Trace(f"t{t_index}", events))
    return EventLog(traces)


def label_rows(log: EventLog) -> list[list[str]]:
    return [[str(e.label) for e in t] for t in log]
