import random

from hypothesis import given, settings, strategies as st

from labelsplit import (Label, OrderingCounts, OrderingRelation, build_tables,
                        count, extract_split_set, relation_counts)

from conftest import label_rows, log_from_rows
from oracles import naive_count

DP = OrderingRelation.DIRECTLY_PRECEDES
DF = OrderingRelation.DIRECTLY_FOLLOWS
EP = OrderingRelation.EVENTUALLY_PRECEDES
EF = OrderingRelation.EVENTUALLY_FOLLOWS
LOOP = OrderingRelation.LENGTH_TWO_LOOP

GU = Label("Getting up")
TT = Label("Tossing & turning")
LRM = Label("Living room motion")


def test_getting_up_directly_precedes_living_room(activity_log):
    assert count(activity_log, DP, GU, LRM) == OrderingCounts(5, 0)


def test_tossing_never_directly_precedes_living_room(activity_log):
    assert count(activity_log, DP, TT, LRM) == OrderingCounts(0, 16)


def test_tossing_eventually_precedes_living_room(activity_log):
    assert count(activity_log, EP, TT, LRM) == OrderingCounts(16, 0)


def test_single_event_trace_is_negative():
    log = log_from_rows([["b"]])
    for relation in (DP, DF, EP, EF, LOOP):
        assert count(log, relation, Label("b"), Label("c")) == OrderingCounts(0, 1)


def test_length_two_loop_bcb():
    log = log_from_rows([["b", "c", "b"]])
    assert count(log, LOOP, Label("b"), Label("c")) == OrderingCounts(1, 1)


def test_absent_labels_count_zero(activity_log):
    assert count(activity_log, DP, Label("nope"), LRM) == OrderingCounts(0, 0)


def test_pos_plus_neg_equals_occurrences(activity_log):
    occurrences = sum(1 for t in activity_log for e in t if e.label == TT)
    for relation in (DP, DF, EP, EF, LOOP):
        oc = count(activity_log, relation, TT, LRM)
        assert oc.total == occurrences


def test_directly_precedes_sums_to_non_final_occurrences(activity_log):
    # summing pos over all context labels counts every non-final occurrence once
    total_pos = sum(count(activity_log, DP, TT, c).pos for c in activity_log.alphabet)
    occurrences = sum(1 for t in activity_log for e in t if e.label == TT)
    finals = sum(1 for t in activity_log if t.events[-1].label == TT)
    assert total_pos == occurrences - finals


def test_count_invariant_under_trace_reorder(activity_log):
    from labelsplit import EventLog
    reordered = EventLog(tuple(reversed(activity_log.traces)))
    for relation in (DP, DF, EP, EF):
        assert count(reordered, relation, TT, LRM) == count(activity_log, relation, TT, LRM)


def test_relation_counts_matches_single_counts(activity_log):
    for relation in (DP, DF, EP, EF, LOOP):
        bulk = relation_counts(activity_log, relation)
        for b in activity_log.alphabet:
            for c in activity_log.alphabet:
                assert bulk[(b, c)] == count(activity_log, relation, b, c)


def test_build_tables_reproduces_the_four_sample_tables(sensor_log, activity_log):
    splits = extract_split_set(sensor_log, activity_log)
    tables = build_tables(sensor_log, activity_log, splits[0],
                          splits[0].children[0], splits[0].children[1])
    assert len(tables) == 4  # one context label, four relations
    by_relation = {t.relation: t for t in tables}
    # children are sorted: a1 = Getting up, a2 = Tossing & turning
    def cells(t):
        return ((t.col_a1.pos, t.col_a1.neg), (t.col_a2.pos, t.col_a2.neg),
                (t.parent_col.pos, t.parent_col.neg))
    assert cells(by_relation[DF]) == ((0, 5), (0, 16), (0, 21))
    assert cells(by_relation[DP]) == ((5, 0), (0, 16), (5, 16))
    assert cells(by_relation[EF]) == ((0, 5), (0, 16), (0, 21))
    assert cells(by_relation[EP]) == ((5, 0), (16, 0), (21, 0))
    assert all(t.context_label == LRM for t in tables)


def test_build_tables_no_context_labels():
    # a log containing only the two children yields no tables
    l1 = log_from_rows([["a", "a"], ["a", "a"]])
    l2 = log_from_rows([["a1", "a2"], ["a2", "a1"]])
    splits = extract_split_set(l1, l2)
    tables = build_tables(l1, l2, splits[0], Label("a1"), Label("a2"))
    assert tables == []


def test_build_tables_explicit_context_excludes_siblings(sensor_log, activity_log):
    splits = extract_split_set(sensor_log, activity_log)
    tables = build_tables(sensor_log, activity_log, splits[0], GU, TT,
                          context_labels=[LRM, GU, TT])
    assert {t.context_label for t in tables} == {LRM}


def random_refined_logs(rng: random.Random):
    """A random log over 3-5 labels plus a random binary split of one label."""
    alphabet = [f"L{i}" for i in range(rng.randint(3, 5))]
    rows = [[rng.choice(alphabet) for _ in range(rng.randint(1, 8))]
            for _ in range(rng.randint(1, 8))]
    target = rng.choice(sorted({name for row in rows for name in row}))
    refined = [[(name + rng.choice(["_1", "_2"])) if name == target else name
                for name in row] for row in rows]
    return log_from_rows(rows), log_from_rows(refined), target


def test_column_additivity_against_naive_scanner():
    rng = random.Random(42)
    for _ in range(60):
        l1, l2, target = random_refined_logs(rng)
        splits = extract_split_set(l1, l2)
        split = next((s for s in splits if s.parent == Label(target)), None)
        if split is None:
            continue
        a1, a2 = split.children[0], split.children[1]
        tables = build_tables(l1, l2, split, a1, a2)
        rows1, rows2 = label_rows(l1), label_rows(l2)
        for t in tables:
            # independent recount of all three columns
            assert (t.col_a1.pos, t.col_a1.neg) == naive_count(
                rows2, t.relation.value, str(a1), str(t.context_label))
            assert (t.col_a2.pos, t.col_a2.neg) == naive_count(
                rows2, t.relation.value, str(a2), str(t.context_label))
            assert (t.parent_col.pos, t.parent_col.neg) == naive_count(
                rows1, t.relation.value, target, str(t.context_label))
            # additivity: the parent column is the sum of the child columns
            assert t.parent_col == t.col_a1 + t.col_a2


@settings(max_examples=120)
@given(st.lists(st.lists(st.sampled_from(["a", "b", "c", "d"]), min_size=1, max_size=7),
                min_size=1, max_size=6),
       st.sampled_from([DP, DF, EP, EF, LOOP]))
def test_count_matches_naive_scan(rows, relation):
    log = log_from_rows(rows)
    for b in ("a", "b"):
        for c in ("a", "c"):
            expected = naive_count(rows, relation.value, b, c)
            actual = count(log, relation, Label(b), Label(c))
            assert (actual.pos, actual.neg) == expected
