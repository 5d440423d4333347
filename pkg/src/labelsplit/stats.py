"""Fisher's exact test on 2x2 tables and multiple-testing correction.

The two-sided p-value follows the sum-of-small-p definition: over all
tables with the observed margins, sum the hypergeometric point
probabilities that do not exceed the observed one (with a small relative
slack for float equality).  Probabilities are accumulated in log space so
large counts cannot overflow.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

from .model import Label
from .ordering import ContingencyTable, OrderingRelation

# Relative slack when comparing point probabilities for the two-sided sum.
_TIE_SLACK = 1e-7

# Log-factorial table, grown on demand; reads are lock-free once the index
# exists, growth is synchronized.
_log_fact: list[float] = [0.0]
_log_fact_lock = threading.Lock()


def _log_factorial(n: int) -> float:
    if n < len(_log_fact):
        return _log_fact[n]
    with _log_fact_lock:
        while len(_log_fact) <= n:
            _log_fact.append(_log_fact[-1] + math.log(len(_log_fact)))
    return _log_fact[n]


def _log_comb(n: int, k: int) -> float:
    return _log_factorial(n) - _log_factorial(k) - _log_factorial(n - k)


def fisher_exact_two_sided(a1_pos: int, a1_neg: int, a2_pos: int, a2_neg: int) -> float:
    """Two-sided Fisher exact p-value for the 2x2 table

        [[a1_pos, a2_pos],
         [a1_neg, a2_neg]]

    An all-zero table yields p = 1 by convention (no evidence either way).
    The result is clamped to [0, 1].
    """
    for value in (a1_pos, a1_neg, a2_pos, a2_neg):
        if value < 0:
            raise ValueError("counts must be nonnegative")
    n1 = a1_pos + a1_neg
    n2 = a2_pos + a2_neg
    r = a1_pos + a2_pos
    total = n1 + n2
    if total == 0:
        return 1.0

    log_denominator = _log_comb(total, r)

    def log_prob(x: int) -> float:
        return _log_comb(n1, x) + _log_comb(n2, r - x) - log_denominator

    cutoff = log_prob(a1_pos) + math.log1p(_TIE_SLACK)
    support = range(max(0, r - n2), min(r, n1) + 1)
    included = []
    for x in support:
        lp = log_prob(x)
        if lp <= cutoff:
            included.append(lp)
    if len(included) == len(support):
        return 1.0  # every table included: the sum is 1 by definition
    # sum smallest terms first to limit rounding error
    included.sort()
    p = sum(math.exp(lp) for lp in included)
    return min(1.0, max(0.0, p))


def bonferroni_threshold(alpha: float, m: int) -> float:
    """Per-test significance threshold keeping the familywise rate at alpha."""
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    if m < 1:
        raise ValueError(f"test count must be >= 1, got {m}")
    return alpha / m


@dataclass(frozen=True)
class CorrectionPolicy:
    """Multiple-testing correction: which kind and over which test family.

    ``per_candidate`` divides alpha by the number of tests run for one
    candidate refinement; ``per_candidate_set`` spans every test of a whole
    candidate scan.
    """

    kind: str = "bonferroni"  # "none" | "bonferroni"
    family_scope: str = "per_candidate"  # "per_candidate" | "per_candidate_set"

    def __post_init__(self):
        if self.kind not in ("none", "bonferroni"):
            raise ValueError(f"unknown correction kind {self.kind!r}")
        if self.family_scope not in ("per_candidate", "per_candidate_set"):
            raise ValueError(f"unknown family scope {self.family_scope!r}")

    def threshold(self, alpha: float, m: int) -> float:
        if self.kind == "bonferroni" and m >= 1:
            return bonferroni_threshold(alpha, m)
        return alpha


@dataclass(frozen=True)
class TestResult:
    """Outcome of one Fisher test on one contingency table."""

    relation: OrderingRelation
    context_label: Label
    pair: tuple[Label, Label]
    p_value: float
    corrected_alpha: float
    significant: bool
    table: ContingencyTable

    def __post_init__(self):
        if self.significant != (self.p_value < self.corrected_alpha):
            raise ValueError("significant must equal p_value < corrected_alpha")


def fisher_test(table: ContingencyTable, corrected_alpha: float) -> TestResult:
    p = fisher_exact_two_sided(table.col_a1.pos, table.col_a1.neg,
                               table.col_a2.pos, table.col_a2.neg)
    return TestResult(
        relation=table.relation,
        context_label=table.context_label,
        pair=(table.a1, table.a2),
        p_value=p,
        corrected_alpha=corrected_alpha,
        significant=p < corrected_alpha,
        table=table,
    )
