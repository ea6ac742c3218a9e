from hypothesis import given, settings
from hypothesis import strategies as st

from mdus.matching import (
    MultiDimPattern,
    itemset_contained,
    matches,
    max_match_utility,
    mdim_contained,
    pattern_utility,
    qitemset_contained,
    seq_max_utility,
    sequence_contained,
)
from mdus.model import QItemset, QSequence, Transaction, make_pattern, money
from mdus.oracle import oracle_match_utility

P = MultiDimPattern.of


def test_itemset_containment():
    assert itemset_contained(("a", "b"), ("a", "b", "c"))
    assert not itemset_contained(("a", "b", "c"), ("a", "b"))
    assert itemset_contained(("a",), ("a",))


def test_qitemset_containment():
    v = QItemset.of(("a", 1), ("c", 3))
    assert qitemset_contained(v, QItemset.of(("a", 1), ("b", 1), ("c", 3)))
    assert not qitemset_contained(v, QItemset.of(("a", 4), ("c", 3), ("d", 4)))
    assert qitemset_contained(v, v)


def test_sequence_containment(ex):
    s1 = ex.transactions[0].seq
    assert sequence_contained(make_pattern([["a"], ["c"]]), make_pattern([["a"], ["c"], ["d"]]))
    assert sequence_contained(QSequence.of([("a", 1)], [("c", 1)]), s1)
    assert not sequence_contained(QSequence.of([("a", 1)], [("c", 3)]), s1)
    assert not sequence_contained(make_pattern([["c"], ["a"], ["a"]]), s1)


def test_mdim_containment(ex):
    t = P(("Male", "Young", "Doctor"), "a", "b")
    assert mdim_contained(t, P(("Male", "Young", "*"), "a", "b"))
    assert not mdim_contained(t, P(("*", "Middle", "Doctor"), "a", "b"))
    assert mdim_contained(t, t)
    assert mdim_contained(P(("Male", "*", "*"), "a", "c"), ex.transactions[0])
    assert not mdim_contained(P(("Female", "*", "*"), "a"), ex.transactions[0])


def test_matches(ex):
    s1 = ex.transactions[0].seq
    assert matches(make_pattern([["a", "c"], ["a", "c", "e"], ["c"], ["b"]]), s1)
    assert not matches(make_pattern([["a"], ["c"]]), s1)
    assert matches(make_pattern([["a", "c"]]), QSequence.of([("a", 1), ("c", 3)]))


def test_max_match_utility(ex):
    s1 = ex.transactions[0]
    pt = ex.profits
    assert max_match_utility(P(("Male", "Young", "Doctor"), "a", "c"), s1, pt) == money(30)
    assert max_match_utility(P(("Female", "Young", "Doctor"), "a", "c"), s1, pt) == 0
    assert max_match_utility(P(("*", "*", "*"), "a c"), s1, pt) == money(25)


def test_pattern_utility(ex):
    assert pattern_utility(P(("Male", "Young", "*"), "a", "c"), ex) == money(52)
    assert pattern_utility(P(("*", "*", "*"), "a"), ex) == money(108)
    assert pattern_utility(P(("*", "*", "*"), "z"), ex) == 0


def test_sort_key_wildcard_last():
    a = P(("Male", "*"), "a")
    b = P(("*", "Young"), "a")
    c = P(("Male", "Young"), "a")
    assert sorted([a, b, c], key=MultiDimPattern.sort_key) == [c, a, b]


# -- DP vs brute-force backtracking ------------------------------------------

@st.composite
def seq_and_pattern(draw):
    items = ["a", "b", "c", "d"]
    sets = draw(st.lists(st.lists(st.sampled_from(items), min_size=1, max_size=4, unique=True),
                         min_size=1, max_size=6))
    seq = QSequence.of(*[[(i, draw(st.integers(1, 5))) for i in w] for w in sets])
    pat = draw(st.lists(st.lists(st.sampled_from(items), min_size=1, max_size=3, unique=True),
                        min_size=1, max_size=4))
    return seq, make_pattern(pat)


@settings(max_examples=300, deadline=None)
@given(seq_and_pattern(), st.dictionaries(st.sampled_from("abcd"), st.integers(0, 9),
                                          min_size=4, max_size=4))
def test_dp_equals_backtracking(sp, prof):
    from mdus.model import ProfitTable
    seq, pat = sp
    pt = ProfitTable.from_amounts(prof)
    tx = Transaction("T", (), seq)
    best, _ = oracle_match_utility(MultiDimPattern((), pat), tx, pt)
    assert seq_max_utility(pat, seq, pt) == best
