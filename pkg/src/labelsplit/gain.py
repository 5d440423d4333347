"""Entropy and relative information gain over contingency tables.

Each table contributes a before-split entropy (binary entropy of the parent
column's pos proportion) and an after-split conditional entropy (the
occurrence-weighted average of the child columns' entropies).  Summing both
over every table of a candidate gives the total entropies; the information
gain is their difference and the relative information gain divides it by
the before-split total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import Label
from .ordering import ContingencyTable, OrderingRelation


def binary_entropy(p: float) -> float:
    """Binary entropy in bits, with the 0 * log2(0) = 0 convention."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must be in [0, 1], got {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def table_entropies(table: ContingencyTable) -> tuple[float, float]:
    """(before-split, after-split) entropy of one table, in bits.

    Before: binary entropy of the parent column's proportion.  After: the
    weighted average of the child-column entropies, weights being each
    child's share of the parent total.  A table whose parent column is
    empty contributes (0, 0); an empty child column contributes 0.
    """
    parent_total = table.parent_col.total
    if parent_total == 0:
        return 0.0, 0.0
    h_before = binary_entropy(table.parent_col.pos / parent_total)
    h_after = 0.0
    for col in (table.col_a1, table.col_a2):
        if col.total == 0:
            continue
        weight = col.total / parent_total
        h_after += weight * binary_entropy(col.pos / col.total)
    return h_before, h_after


@dataclass(frozen=True)
class TableEntropy:
    relation: OrderingRelation
    context_label: Label
    h_before: float
    h_after: float
    weight_a1: float
    weight_a2: float


@dataclass(frozen=True)
class EntropyBreakdown:
    """Entropy accounting for one candidate refinement."""

    per_table: tuple[TableEntropy, ...]
    total_before: float
    total_after: float
    information_gain: float
    relative_information_gain: float


def relative_information_gain(tables: list[ContingencyTable]) -> EntropyBreakdown:
    """Aggregate the entropies of all tables of one candidate.

    The relative information gain is (total_before - total_after) /
    total_before, defined as 0 when there is no before-split entropy to
    reduce.
    """
    per_table = []
    total_before = 0.0
    total_after = 0.0
    for table in tables:
        h_before, h_after = table_entropies(table)
        parent_total = table.parent_col.total
        per_table.append(TableEntropy(
            relation=table.relation,
            context_label=table.context_label,
            h_before=h_before,
            h_after=h_after,
            weight_a1=table.col_a1.total / parent_total if parent_total else 0.0,
            weight_a2=table.col_a2.total / parent_total if parent_total else 0.0,
        ))
        total_before += h_before
        total_after += h_after
    gain = total_before - total_after
    rig = gain / total_before if total_before > 0.0 else 0.0
    return EntropyBreakdown(
        per_table=tuple(per_table),
        total_before=total_before,
        total_after=total_after,
        information_gain=gain,
        relative_information_gain=rig,
    )
