import numpy as np
import pytest

from mdus.model import ProfitTable, QSequence, ValidationError, make_pattern, money
from mdus.oracle import OracleBounds, sequence_utilities
from mdus.seqminer import (
    I_EXT,
    S_EXT,
    SeqDatabase,
    SeqMineResult,
    build_ullist,
    concatenate,
    judge,
    mine_husps,
    peu,
    project,
    swu,
    transaction_utilities,
)

pat = make_pattern


def seqs_of(db):
    return [t.seq for t in db]


def test_ullist_s4(ex):
    ul = build_ullist(ex.transactions[3].seq, ex.profits)
    first, last = ul.cells[0], ul.cells[-1]
    assert (first.item, first.util, first.rutil) == ("a", money(12), money(41))
    b = ul.cell_at((0, 1))
    assert (b.item, b.util, b.next) == ("b", money(12), (1, 0))
    assert (last.item, last.util, last.rutil, last.next) == ("c", money(10), 0, None)
    assert sum(c.util for c in ul.cells) == money(53)
    assert [c.position for c in ul.occurrences("b")] == [(0, 1), (1, 0)]


def test_ullist_edge_cases():
    ul = build_ullist(QSequence.of([("a", 2)]), ProfitTable.from_amounts({"a": 4}))
    assert len(ul.cells) == 1
    c = ul.cells[0]
    assert (c.util, c.rutil, c.next) == (money(8), 0, None)
    empty = build_ullist(QSequence(()), ProfitTable({}))
    assert empty.header == {} and empty.cells == ()


def test_flattened_ullists_agree(ex):
    db = SeqDatabase(seqs_of(ex), ex.profits)
    for i, t in enumerate(ex):
        assert db.ullist(i) == build_ullist(t.seq, ex.profits)


def test_swu(ex):
    sd = list(zip(seqs_of(ex), transaction_utilities(seqs_of(ex), ex.profits)))
    assert swu(pat([["a"]]), sd) == money(301)
    assert swu(pat([["e"]]), sd) == money(344)
    assert swu(pat([["z"]]), sd) == 0


def _peu_single(ex, row, p):
    db = SeqDatabase([ex.transactions[row].seq], ex.profits)
    return peu(p, project(db, p))


def test_peu_examples(ex):
    assert _peu_single(ex, 4, pat([["e"]])) == money(137)
    assert _peu_single(ex, 2, pat([["a"]])) == money(50)
    # match ending at the last cell: only the match utility remains
    assert _peu_single(ex, 3, pat([["c"]])) == money(10)


def test_peu_requires_matching_projection(ex):
    db = SeqDatabase(seqs_of(ex), ex.profits)
    with pytest.raises(ValidationError):
        peu(pat([["b"]]), project(db, pat([["a"]])))


def test_concatenate():
    p = pat([["a"], ["b"]])
    assert concatenate(p, "c", I_EXT) == pat([["a"], ["b", "c"]])
    assert concatenate(p, "c", S_EXT) == pat([["a"], ["b"], ["c"]])
    assert concatenate((), "a", S_EXT) == pat([["a"]])
    with pytest.raises(ValidationError):
        concatenate(p, "a", I_EXT)


def test_mine_husps_running_example(ex, backend):
    res = mine_husps(seqs_of(ex), ex.profits, money("39.4"))
    u = res.utilities()
    assert u[pat([["a"]])] == money(108)
    assert u[pat([["a"], ["c"]])] == money(52)
    assert mine_husps(seqs_of(ex), ex.profits, money(394)).utilities() == {}


def test_mine_husps_single_transaction_everything(ex, backend):
    one = [ex.transactions[0].seq]
    got = mine_husps(one, ex.profits, 1).utilities()
    sub = type(ex)(ex.schema, ex.profits, ex.transactions[:1])
    table = sequence_utilities(sub, OracleBounds(4, 4))
    want = {p: row[0] for p, row in table.items() if row.get(0, 0) > 0}
    assert got == want


def test_mine_husps_records_per_tx(ex):
    res = mine_husps(seqs_of(ex), ex.profits, money("39.4"))
    rec = res.patterns[pat([["a"]])]
    assert rec.per_tx() == {0: money(20), 2: money(40), 3: money(12), 4: money(36)}


def test_judge_accepts_s_extension(ex):
    db = SeqDatabase(seqs_of(ex), ex.profits)
    acc = SeqMineResult()
    judge(pat([["a"], ["c"]]), project(db, pat([["a"]])), acc, money("39.4"))
    assert acc.utilities()[pat([["a"], ["c"]])] == money(52)
    assert acc.candidates >= 1


def test_judge_prunes_on_peu(ex):
    db = SeqDatabase(seqs_of(ex), ex.profits)
    parent = project(db, pat([["a"]]))
    child = pat([["a"], ["b"]])
    bound = peu(child, project(db, child))
    acc = SeqMineResult()
    judge(child, parent, acc, bound + 1)
    assert acc.patterns == {} and acc.candidates == 1


def test_judge_explores_below_low_utility_prefix():
    pt = ProfitTable.from_amounts({"w": 1, "x": 1, "y": 100})
    db = SeqDatabase([QSequence.of([("w", 1)], [("x", 1)], [("y", 1)])], pt)
    acc = SeqMineResult()
    judge(pat([["w"], ["x"]]), project(db, pat([["w"]])), acc, money(50))
    u = acc.utilities()
    assert pat([["w"], ["x"]]) not in u
    assert u[pat([["w"], ["x"], ["y"]])] == money(102)


def test_judge_rejects_non_extension(ex):
    db = SeqDatabase(seqs_of(ex), ex.profits)
    with pytest.raises(ValidationError):
        judge(pat([["b"], ["c"]]), project(db, pat([["a"]])), SeqMineResult(), 1)


def test_threads_deterministic(ex):
    one = mine_husps(seqs_of(ex), ex.profits, money("10"), threads=1)
    four = mine_husps(seqs_of(ex), ex.profits, money("10"), threads=4)
    assert list(one.patterns) == list(four.patterns)
    assert one.utilities() == four.utilities()
    assert one.candidates == four.candidates


def test_restrict_keeps_utilities(ex):
    db = SeqDatabase(seqs_of(ex), ex.profits)
    keep = np.array([n != "e" for n in db.names])
    r = db.restrict(keep)
    assert "e" not in r.names
    assert project(r, pat([["a"], ["c"]])).utility() == project(db, pat([["a"], ["c"]])).utility()
