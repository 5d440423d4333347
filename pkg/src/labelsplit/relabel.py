"""Relabeling functions and refinement checks.

A relabeling function rewrites every event's label while preserving trace
shape (all built-in kinds are equal-length and each output label depends
only on the event itself, so prefixes are preserved).  Refinement between
two labelings of the same base log is checked on the observed traces and
their prefixes; the split set collects the refined-label groups that share
a common coarse label.
"""

from __future__ import annotations

import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from datetime import time
from typing import Any
from zoneinfo import ZoneInfo

from .model import Event, EventLog, Label, Trace


class RefinementError(ValueError):
    pass


class ShapeMismatchError(RefinementError):
    """The two logs do not come from the same base log."""


class NotARefinementError(RefinementError):
    """The finer labeling does not refine the coarser one on this log."""

    def __init__(self, message: str, violations: tuple = ()):
        super().__init__(message)
        self.violations = violations


class RuleError(ValueError):
    pass


class RelabelingFn(ABC):
    """Base class for label rewriters.

    Subclasses map a single event to its new label; ``apply`` lifts that to
    whole logs, keeping ids, timestamps, attributes, and trace shape.
    """

    description: str = ""

    @abstractmethod
    def event_label(self, event: Event) -> Label:
        ...

    def apply(self, log: EventLog) -> EventLog:
        traces = []
        for trace in log:
            events = tuple(e.with_label(self.event_label(e)) for e in trace)
            traces.append(Trace(trace.case_id, events))
        return EventLog(traces)


def apply(fn: RelabelingFn, log: EventLog) -> EventLog:
    return fn.apply(log)


@dataclass(frozen=True)
class Projection(RelabelingFn):
    """Label each event by the values of the named attributes."""

    attribute_names: tuple[str, ...]

    def __init__(self, attribute_names):
        if isinstance(attribute_names, str):
            attribute_names = (attribute_names,)
        object.__setattr__(self, "attribute_names", tuple(attribute_names))

    @property
    def description(self) -> str:
        return "projection[" + ",".join(self.attribute_names) + "]"

    def event_label(self, event: Event) -> Label:
        return Label(tuple(event.attribute(n) for n in self.attribute_names))


@dataclass(frozen=True)
class TimeThreshold(RelabelingFn):
    """Split one label in two by local time of day.

    Events carrying ``base_label`` get ``low_label`` when their local time
    of day is strictly before the threshold and ``high_label`` at or after
    it; every other event keeps its label.
    """

    base_label: Label
    threshold: time
    low_label: Label
    high_label: Label
    timezone: str = "UTC"

    @property
    def description(self) -> str:
        return (f"time_threshold[{self.base_label}@"
                f"{self.threshold.isoformat(timespec='minutes')}"
                f"->{self.low_label}/{self.high_label}]")

    def event_label(self, event: Event) -> Label:
        if event.label != self.base_label:
            return event.label
        local = event.timestamp.astimezone(ZoneInfo(self.timezone))
        if local.time() < self.threshold:
            return self.low_label
        return self.high_label


_RULE_RE = re.compile(r"^(?P<attr>.+?)\s*(?P<op>!=|>=|=|<)\s*(?P<value>.*?)\s*->\s*(?P<label>.+)$")
_DEFAULT_RE = re.compile(r"^default\s*->\s*(?P<label>.+)$")
_TIME_RE = re.compile(r"^(\d{1,2}):(\d{2})(?::(\d{2}))?$")


def parse_time_of_day(text: str) -> time:
    """Parse H:MM or HH:MM[:SS] into a time of day."""
    m = _TIME_RE.match(text.strip())
    if not m:
        raise ValueError(f"not a time of day: {text!r}")
    hour, minute, second = int(m.group(1)), int(m.group(2)), int(m.group(3) or 0)
    return time(hour, minute, second)


def _coerce_pair(event_value: Any, rule_value: str):
    """Coerce both sides of an ordered comparison to numbers or times."""
    if _TIME_RE.match(rule_value):
        try:
            return parse_time_of_day(str(event_value)), parse_time_of_day(rule_value)
        except ValueError:
            return None
    try:
        return float(event_value), float(rule_value)
    except (TypeError, ValueError):
        return None


@dataclass(frozen=True)
class Rule:
    attribute: str
    op: str  # "=", "!=", "<", ">="
    value: str
    label: Label

    def matches(self, event: Event) -> bool:
        if not event.has_attribute(self.attribute):
            return False
        actual = event.attribute(self.attribute)
        if self.op == "=":
            return str(actual) == self.value
        if self.op == "!=":
            return str(actual) != self.value
        pair = _coerce_pair(actual, self.value)
        if pair is None:
            return False
        left, right = pair
        return left < right if self.op == "<" else left >= right


@dataclass(frozen=True)
class RuleBased(RelabelingFn):
    """First-match-wins relabeling from an ordered rule list.

    An event matching no rule is an error unless a default label is set.
    """

    rules: tuple[Rule, ...]
    default: Label | None = None
    name: str = "rules"

    @property
    def description(self) -> str:
        return f"rule_file[{self.name}]"

    def event_label(self, event: Event) -> Label:
        for rule in self.rules:
            if rule.matches(event):
                return rule.label
        if self.default is not None:
            return self.default
        raise RuleError(f"no rule matches event {event.id!r} and no default is set")

    @classmethod
    def from_text(cls, text: str, name: str = "rules") -> "RuleBased":
        """Parse the line-oriented rule format.

        Each line is ``ATTR <op> VALUE -> LABEL`` with op one of =, !=, <,
        >= (< and >= apply to numbers and HH:MM times); an optional final
        line ``default -> LABEL``.  Blank lines and #-comments are skipped.
        """
        rules: list[Rule] = []
        default: Label | None = None
        for line_no, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if default is not None:
                raise RuleError(f"line {line_no}: default must be the last rule")
            m = _DEFAULT_RE.match(line)
            if m:
                default = Label(m.group("label").strip())
                continue
            m = _RULE_RE.match(line)
            if not m:
                raise RuleError(f"line {line_no}: cannot parse rule {line!r}")
            rules.append(Rule(
                attribute=m.group("attr").strip(),
                op=m.group("op"),
                value=m.group("value"),
                label=Label(m.group("label").strip()),
            ))
        if not rules and default is None:
            raise RuleError("rule text contains no rules")
        return cls(tuple(rules), default, name)


@dataclass(frozen=True)
class Violation:
    """A pair of traces where equal refined sequences have unequal coarse ones."""

    case_a: Any
    case_b: Any
    position: int


@dataclass(frozen=True)
class RefinementCheck:
    is_equal_length_refinement: bool
    is_strict: bool
    violations: tuple[Violation, ...]


def _paired_label_rows(l1_log: EventLog, l2_log: EventLog) -> list[tuple[Any, tuple, tuple]]:
    """Position-wise pair the two logs; verify they share the base log."""
    if len(l1_log) != len(l2_log):
        raise ShapeMismatchError(
            f"trace counts differ: {len(l1_log)} vs {len(l2_log)}")
    rows = []
    for t1, t2 in zip(l1_log, l2_log):
        if len(t1) != len(t2):
            raise ShapeMismatchError(
                f"trace {t1.case_id!r}: lengths differ ({len(t1)} vs {len(t2)})")
        for e1, e2 in zip(t1, t2):
            if e1.id != e2.id:
                raise ShapeMismatchError(
                    f"trace {t1.case_id!r}: event ids differ ({e1.id!r} vs {e2.id!r})")
        rows.append((t1.case_id, t1.labels(), t2.labels()))
    return rows


def check_refinement(l1_log: EventLog, l2_log: EventLog,
                     max_violations: int = 10) -> RefinementCheck:
    """Check that the labeling of ``l2_log`` refines that of ``l1_log``.

    Both logs must come from the same base log (same traces, matching event
    ids position-wise).  The refinement implication -- equal refined label
    sequences imply equal coarse ones -- is checked over the observed traces
    and all their prefixes (truncation commutes with equal-length
    prefix-preserving relabelings, so this stays sound and catches
    positionwise disagreements full-trace comparison would miss).
    Strictness means some coarse label is actually split, i.e. it co-occurs
    with two or more refined labels.
    """
    rows = _paired_label_rows(l1_log, l2_log)

    violations: list[Violation] = []
    seen_pairs: set[tuple[Any, Any]] = set()
    # Partition traces by refined-label prefix, position by position; within
    # a class the coarse labels at the next position must agree.
    classes: list[list[int]] = [list(range(len(rows)))]
    position = 0
    while classes and len(violations) < max_violations:
        next_classes: list[list[int]] = []
        for members in classes:
            buckets: dict[Label, list[int]] = {}
            for idx in members:
                labels2 = rows[idx][2]
                if position < len(labels2):
                    buckets.setdefault(labels2[position], []).append(idx)
            for bucket in buckets.values():
                first = bucket[0]
                for idx in bucket[1:]:
                    if rows[idx][1][position] != rows[first][1][position]:
                        key = (rows[first][0], rows[idx][0])
                        if key not in seen_pairs:
                            seen_pairs.add(key)
                            violations.append(
                                Violation(rows[first][0], rows[idx][0], position))
                        if len(violations) >= max_violations:
                            break
                if len(bucket) > 1:
                    next_classes.append(bucket)
        classes = next_classes
        position += 1

    strict = bool(extract_split_set(l1_log, l2_log, _rows=rows))
    return RefinementCheck(
        is_equal_length_refinement=not violations,
        is_strict=strict,
        violations=tuple(violations),
    )


@dataclass(frozen=True)
class SplitPair:
    """A coarse label together with the refined labels observed under it."""

    parent: Label
    children: tuple[Label, ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(sorted(self.children)))


def extract_split_set(l1_log: EventLog, l2_log: EventLog,
                      _rows=None) -> list[SplitPair]:
    """Group refined labels by the coarse label at the same positions.

    Returns one SplitPair per coarse label that co-occurs with two or more
    refined labels, children sorted, parents in sorted order.
    """
    rows = _rows if _rows is not None else _paired_label_rows(l1_log, l2_log)
    children: dict[Label, set[Label]] = {}
    for _, labels1, labels2 in rows:
        for parent, child in zip(labels1, labels2):
            children.setdefault(parent, set()).add(child)
    return [SplitPair(parent, tuple(children[parent]))
            for parent in sorted(children, key=Label.sort_key)
            if len(children[parent]) >= 2]


def observed_parents(l1_log: EventLog, l2_log: EventLog) -> dict[Label, dict[Label, int]]:
    """For each refined label, how often each coarse label co-occurs with it."""
    parents: dict[Label, dict[Label, int]] = {}
    for _, labels1, labels2 in _paired_label_rows(l1_log, l2_log):
        for parent, child in zip(labels1, labels2):
            counts = parents.setdefault(child, {})
            counts[parent] = counts.get(parent, 0) + 1
    return parents
