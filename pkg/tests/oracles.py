"""Independent reference implementations used to cross-check the library.

Everything here recomputes results from first principles (exact rational
arithmetic, direct quantifier scans over label sequences) and shares no
code with the package.
"""

from __future__ import annotations

import math
from fractions import Fraction

# Relative slack applied when comparing point probabilities, mirroring the
# two-sided definition under test but in exact arithmetic.
TIE_SLACK = Fraction(1, 10**7)


def fisher_two_sided_bruteforce(a1_pos: int, a1_neg: int,
                                a2_pos: int, a2_neg: int) -> float:
    """Two-sided Fisher p by exhaustive enumeration of the hypergeometric
    support, in exact rational arithmetic."""
    n1 = a1_pos + a1_neg
    n2 = a2_pos + a2_neg
    r = a1_pos + a2_pos
    total = n1 + n2
    if total == 0:
        return 1.0
    denominator = math.comb(total, r)

    def prob(x: int) -> Fraction:
        return Fraction(math.comb(n1, x) * math.comb(n2, r - x), denominator)

    observed = prob(a1_pos)
    cutoff = observed * (1 + TIE_SLACK)
    p = sum((prob(x) for x in range(max(0, r - n2), min(r, n1) + 1)
             if prob(x) <= cutoff), start=Fraction(0))
    return float(min(p, Fraction(1)))


def naive_count(label_rows: list[list[str]], relation: str, b: str, c: str) -> tuple[int, int]:
    """(pos, neg) for one ordering relation via direct quantifier scans."""
    pos = neg = 0
    for labels in label_rows:
        n = len(labels)
        for i in range(n):
            if labels[i] != b:
                continue
            if relation == "directly_precedes":
                hit = i + 1 < n and labels[i + 1] == c
            elif relation == "directly_follows":
                hit = i - 1 >= 0 and labels[i - 1] == c
            elif relation == "eventually_precedes":
                hit = any(labels[j] == c for j in range(i + 1, n))
            elif relation == "eventually_follows":
                hit = any(labels[j] == c for j in range(0, i))
            elif relation == "length_two_loop":
                hit = (b != c and i + 2 < n
                       and labels[i + 1] == c and labels[i + 2] == b)
            else:
                raise ValueError(relation)
            if hit:
                pos += 1
            else:
                neg += 1
    return pos, neg


def entropy_bits(p: float) -> float:
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def naive_rig(l1_rows: list[list[str]], l2_rows: list[list[str]],
              parent: str, a1: str, a2: str, relations: list[str],
              contexts: list[str]) -> float:
    """Relative information gain recomputed from raw label sequences."""
    total_before = 0.0
    total_after = 0.0
    for relation in relations:
        for ctx in contexts:
            p_pos, p_neg = naive_count(l1_rows, relation, parent, ctx)
            c1_pos, c1_neg = naive_count(l2_rows, relation, a1, ctx)
            c2_pos, c2_neg = naive_count(l2_rows, relation, a2, ctx)
            p_total = p_pos + p_neg
            if p_total == 0:
                continue
            total_before += entropy_bits(p_pos / p_total)
            for pos, neg in ((c1_pos, c1_neg), (c2_pos, c2_neg)):
                if pos + neg:
                    total_after += (pos + neg) / p_total * entropy_bits(pos / (pos + neg))
    if total_before == 0.0:
        return 0.0
    return (total_before - total_after) / total_before
