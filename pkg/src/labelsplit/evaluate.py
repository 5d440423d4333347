"""Candidate evaluation: the full statistical pipeline over one refinement.

A candidate refinement is useful when every refined label pair differs
significantly from its sibling on at least one ordering statistic (Fisher
test at the corrected level); its score is then the relative information
gain over all its contingency tables, otherwise 0.  Median time-of-day
splits provide a simple candidate generator, and rank_candidates evaluates
and sorts a whole candidate set.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterable
from zoneinfo import ZoneInfo

from .gain import EntropyBreakdown, relative_information_gain
from .model import EventLog, Label
from .ordering import ContingencyTable, DEFAULT_RELATIONS, OrderingRelation, build_tables
from .relabel import (NotARefinementError, RelabelingFn, SplitPair, TimeThreshold,
                      check_refinement, extract_split_set)
from .stats import CorrectionPolicy, TestResult, fisher_test

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EvaluationConfig:
    alpha: float = 0.01
    relations: tuple[OrderingRelation, ...] = DEFAULT_RELATIONS
    correction: CorrectionPolicy = field(default_factory=CorrectionPolicy)
    context_labels: tuple[Label, ...] | None = None

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        object.__setattr__(self, "relations", tuple(self.relations))
        if self.context_labels is not None:
            object.__setattr__(self, "context_labels", tuple(self.context_labels))


@dataclass(frozen=True)
class EvaluationReport:
    """Everything the evaluation of one candidate produced."""

    candidate_description: str
    split_pairs: tuple[SplitPair, ...]
    tests: tuple[TestResult, ...]
    entropy: EntropyBreakdown
    useful: bool
    score: float
    m_tests: int
    corrected_alpha: float
    alpha: float
    notes: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "candidate": self.candidate_description,
            "split_pairs": [
                {"parent": sp.parent.json_parts(),
                 "children": [c.json_parts() for c in sp.children]}
                for sp in self.split_pairs
            ],
            "m_tests": self.m_tests,
            "corrected_alpha": self.corrected_alpha,
            "tests": [
                {"relation": t.relation.value,
                 "context": t.context_label.json_parts(),
                 "pair": [t.pair[0].json_parts(), t.pair[1].json_parts()],
                 "table": {
                     "a1": [t.table.col_a1.pos, t.table.col_a1.neg],
                     "a2": [t.table.col_a2.pos, t.table.col_a2.neg],
                     "parent": [t.table.parent_col.pos, t.table.parent_col.neg],
                 },
                 "p": t.p_value,
                 "significant": t.significant}
                for t in self.tests
            ],
            "entropy": {
                "total_before": self.entropy.total_before,
                "total_after": self.entropy.total_after,
                "rig": self.entropy.relative_information_gain,
            },
            "useful": self.useful,
            "score": self.score,
            "notes": list(self.notes),
        }


@dataclass
class _Collected:
    """Intermediate state shared by single and batch evaluation."""

    description: str
    split_pairs: tuple[SplitPair, ...]
    pair_tables: list[tuple[tuple[Label, Label], list[ContingencyTable]]]
    notes: list[str]

    @property
    def m_tests(self) -> int:
        return sum(len(tables) for _, tables in self.pair_tables)


def _collect(l1_log: EventLog, l2_log: EventLog, config: EvaluationConfig,
             description: str) -> _Collected:
    check = check_refinement(l1_log, l2_log)
    if not check.is_equal_length_refinement:
        first = check.violations[0]
        raise NotARefinementError(
            f"refined labeling does not refine the base one: traces "
            f"{first.case_a!r} and {first.case_b!r} agree on refined labels "
            f"but differ at position {first.position}",
            check.violations,
        )
    split_pairs = tuple(extract_split_set(l1_log, l2_log))
    notes: list[str] = []
    if not split_pairs:
        notes.append("refinement is not strict")

    pair_tables: list[tuple[tuple[Label, Label], list[ContingencyTable]]] = []
    skipped = 0
    for split in split_pairs:
        for a1, a2 in itertools.combinations(split.children, 2):
            tables = build_tables(l1_log, l2_log, split, a1, a2,
                                  relations=config.relations,
                                  context_labels=config.context_labels)
            usable = [t for t in tables if t.parent_col.total > 0]
            skipped += len(tables) - len(usable)
            pair_tables.append(((a1, a2), usable))
    if skipped:
        logger.info("skipped %d degenerate table(s) with empty parent column", skipped)
        notes.append(f"skipped {skipped} degenerate table(s)")
    return _Collected(description, split_pairs, pair_tables, notes)


def _finish(collected: _Collected, config: EvaluationConfig,
            family_m: int | None = None) -> EvaluationReport:
    m = collected.m_tests
    threshold = config.correction.threshold(config.alpha, family_m if family_m else m)

    tests: list[TestResult] = []
    all_significant = bool(collected.split_pairs)
    for _, tables in collected.pair_tables:
        pair_significant = False
        for table in tables:
            result = fisher_test(table, threshold)
            tests.append(result)
            pair_significant = pair_significant or result.significant
        all_significant = all_significant and pair_significant

    entropy = relative_information_gain(
        [t for _, tables in collected.pair_tables for t in tables])
    useful = all_significant
    return EvaluationReport(
        candidate_description=collected.description,
        split_pairs=collected.split_pairs,
        tests=tuple(tests),
        entropy=entropy,
        useful=useful,
        score=entropy.relative_information_gain if useful else 0.0,
        m_tests=m,
        corrected_alpha=threshold,
        alpha=config.alpha,
        notes=tuple(collected.notes),
    )


def evaluate(l1_log: EventLog, l2_log: EventLog,
             config: EvaluationConfig | None = None,
             description: str = "refined labeling") -> EvaluationReport:
    """Score one refined labeling against its base labeling.

    ``l2_log`` must be an equal-length refinement of ``l1_log`` over the
    observed traces (NotARefinementError otherwise).  Every refined child
    pair is tested against every context label on every configured ordering
    relation; the candidate is useful only if each pair is significant
    somewhere, and its score is then the relative information gain.
    """
    config = config or EvaluationConfig()
    return _finish(_collect(l1_log, l2_log, config, description), config)


def generate_median_time_candidates(
    log: EventLog,
    timezone: str = "UTC",
    skipped: list[str] | None = None,
) -> list[RelabelingFn]:
    """One time-threshold candidate per label, split at its median time of day.

    The threshold is the median of the label's occurrence times (lower of
    the two middle values for even counts); occurrences strictly below it go
    to the "_1" child, the rest to "_2".  Labels with fewer than two
    occurrences or a single distinct time of day are skipped and listed in
    ``skipped``.
    """
    tz = ZoneInfo(timezone)
    times_by_label: dict[Label, list] = {}
    for trace in log:
        for event in trace:
            times_by_label.setdefault(event.label, []).append(
                event.timestamp.astimezone(tz).time())

    candidates: list[RelabelingFn] = []
    for label in sorted(times_by_label):
        times = sorted(times_by_label[label])
        if len(times) < 2:
            _note_skip(skipped, f"{label}: fewer than 2 occurrences")
            continue
        if times[0] == times[-1]:
            _note_skip(skipped, f"{label}: all occurrences share one time of day")
            continue
        threshold = times[(len(times) - 1) // 2]
        below = sum(1 for t in times if t < threshold)
        if below < 2 or len(times) - below < 2:
            logger.warning("median split of %s leaves a child with <2 occurrences; "
                           "the tests will have little power", label)
        candidates.append(TimeThreshold(
            base_label=label,
            threshold=threshold,
            low_label=Label(f"{label}_1"),
            high_label=Label(f"{label}_2"),
            timezone=timezone,
        ))
    return candidates


def _note_skip(skipped: list[str] | None, message: str) -> None:
    logger.info("median-time candidate skipped: %s", message)
    if skipped is not None:
        skipped.append(message)


def rank_candidates(l1_log: EventLog, candidates: Iterable[RelabelingFn],
                    config: EvaluationConfig | None = None) -> list[EvaluationReport]:
    """Evaluate every candidate against the base log and sort by score.

    Sorting is score-descending with ties broken by candidate description.
    Under per_candidate_set correction the Bonferroni family spans all
    candidates' tests.
    """
    config = config or EvaluationConfig()
    collected = [
        _collect(l1_log, fn.apply(l1_log), config, fn.description)
        for fn in candidates
    ]
    family_m = None
    if config.correction.family_scope == "per_candidate_set":
        family_m = sum(c.m_tests for c in collected)
    reports = [_finish(c, config, family_m) for c in collected]
    reports.sort(key=lambda r: (-r.score, r.candidate_description))
    return reports
