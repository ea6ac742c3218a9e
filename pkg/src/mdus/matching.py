"""Containment, matching and max-over-matches pattern utility."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .model import (
    WILDCARD,
    Money,
    Pattern,
    ProfitTable,
    QItemset,
    QSDatabase,
    QSequence,
    Transaction,
    ValidationError,
    make_pattern,
    pattern_text,
)


@dataclass(frozen=True)
class MultiDimPattern:
    dims: tuple
    seq: Pattern

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(self.dims))
        object.__setattr__(self, "seq", make_pattern(self.seq))

    @classmethod
    def of(cls, dims, *itemsets) -> "MultiDimPattern":
        """``MultiDimPattern.of(("Male", "*"), "a", "c d")`` - itemsets as strings."""
        return cls(tuple(dims), make_pattern([w.split() for w in itemsets]))

    def dims_text(self) -> str:
        return "(" + ",".join(self.dims) + ")"

    def __str__(self):
        return f"{self.dims_text()}\t{pattern_text(self.seq)}"

    def sort_key(self):
        # '*' sorts after every concrete value in its slot
        return (tuple((1, "") if v == WILDCARD else (0, v) for v in self.dims),
                pattern_text(self.seq))


def _items_of(w) -> frozenset:
    if isinstance(w, QItemset):
        return frozenset(w.items)
    return frozenset(w)


def itemset_contained(w, w2) -> bool:
    return _items_of(w) <= _items_of(w2)


def qitemset_contained(v: QItemset, v2: QItemset) -> bool:
    return all(v2.quantity(e.item) == e.quantity for e in v)


def _as_itemsets(s):
    return s.itemsets if isinstance(s, QSequence) else s


def sequence_contained(s: Union[Pattern, QSequence], s2: Union[Pattern, QSequence]) -> bool:
    """Greedy leftmost embedding; quantity-exact when ``s`` carries quantities."""
    quantitative = isinstance(s, QSequence)
    if quantitative and not isinstance(s2, QSequence):
        raise ValidationError("a q-sequence can only be contained in a q-sequence")
    container = _as_itemsets(s2)
    j = 0
    for w in _as_itemsets(s):
        while j < len(container):
            hit = (qitemset_contained(w, container[j]) if quantitative
                   else itemset_contained(w, container[j]))
            j += 1
            if hit:
                break
        else:
            return False
    return True


def _dims_ok(pattern_dims, tx_dims) -> bool:
    if len(pattern_dims) != len(tx_dims):
        raise ValidationError(
            f"schema mismatch: {len(pattern_dims)} vs {len(tx_dims)} dimensions")
    return all(p == WILDCARD or p == d for p, d in zip(pattern_dims, tx_dims))


def mdim_contained(t: MultiDimPattern, t2: Union[MultiDimPattern, Transaction]) -> bool:
    if isinstance(t2, Transaction):
        # data rows are concrete; a wildcard on the pattern side matches anything
        dims_ok = _dims_ok(t.dims, t2.dims)
    else:
        dims_ok = _dims_ok(t2.dims, t.dims)
    return dims_ok and sequence_contained(t.seq, t2.seq)


def matches(s: Pattern, sq: QSequence) -> bool:
    if len(s) != len(sq):
        return False
    return all(frozenset(w) == frozenset(v.items) for w, v in zip(s, sq))


def _matched_utility(w, v: QItemset, pt: ProfitTable) -> Money:
    return sum(v.quantity(i) * pt[i] for i in w)


def seq_max_utility(s: Pattern, sq: QSequence, pt: ProfitTable) -> Money:
    """Max over embeddings of ``s`` in ``sq`` of the matched items' utility; 0 if none.

    best[i][j]: best utility of the first i pattern itemsets placed within the
    first j transaction itemsets (None = impossible).
    """
    n, m = len(s), len(sq)
    if n == 0:
        return 0
    prev = [0] * (m + 1)
    for i in range(1, n + 1):
        w = frozenset(s[i - 1])
        cur = [None] * (m + 1)
        for j in range(1, m + 1):
            best = cur[j - 1]
            v = sq[j - 1]
            if prev[j - 1] is not None and w <= frozenset(v.items):
                cand = prev[j - 1] + _matched_utility(w, v, pt)
                if best is None or cand > best:
                    best = cand
            cur[j] = best
        prev = cur
    return prev[m] or 0


def max_match_utility(t: MultiDimPattern, tx: Transaction, pt: ProfitTable) -> Money:
    if not _dims_ok(t.dims, tx.dims):
        return 0
    return seq_max_utility(t.seq, tx.seq, pt)


def pattern_utility(t: MultiDimPattern, db: QSDatabase) -> Money:
    return sum(max_match_utility(t, tx, db.profits) for tx in db)
