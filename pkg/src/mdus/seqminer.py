"""Depth-first LS-tree search for high-utility sequential patterns.

The whole database is flattened into one run of UL-list cells (item, utility,
remaining utility, next occurrence). A projected database is a set of match
ends ``(tx, cell, best utility ending there)``; one kernel call grows every
I- and S-extension of a node at once, a second one reduces them to utility,
PEU and projected SWU per extension.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from . import _kernels as kernels
from .model import (
    Money,
    ParameterError,
    Pattern,
    ProfitTable,
    QSequence,
    ValidationError,
    sequence_utility,
    token_key,
)
from .matching import sequence_contained

I_EXT = "I"
S_EXT = "S"


# -- per-transaction UL-list ---------------------------------------------------

@dataclass(frozen=True)
class ULCell:
    item: str
    position: tuple  # (itemset index, slot index)
    util: Money
    rutil: Money
    next: Optional[tuple]


@dataclass(frozen=True)
class ULList:
    header: dict
    cells: tuple

    def cell_at(self, position) -> ULCell:
        for c in self.cells:
            if c.position == position:
                return c
        raise KeyError(position)

    def occurrences(self, item: str):
        """Follow the next-links of ``item`` from its header entry."""
        pos = self.header.get(item)
        index = {c.position: c for c in self.cells}
        while pos is not None:
            cell = index[pos]
            yield cell
            pos = cell.next


def build_ullist(sq: QSequence, pt: ProfitTable) -> ULList:
    flat = []
    for k, v in enumerate(sq):
        for slot, e in enumerate(v):
            flat.append((e.item, (k, slot), e.quantity * pt[e.item]))
    rest = 0
    nxt = {}
    cells = []
    for item, pos, util in reversed(flat):
        cells.append(ULCell(item, pos, util, rest, nxt.get(item)))
        rest += util
        nxt[item] = pos
    cells.reverse()
    return ULList(header=nxt, cells=tuple(cells))


# -- flattened database --------------------------------------------------------

class SeqDatabase:
    """All transactions' UL-lists as parallel int64 arrays.

    Items are coded ``0..n_items-1`` in canonical token order so that the
    in-itemset cell order equals the I-extension order.
    """

    def __init__(self, seqs: Iterable[QSequence], pt: ProfitTable):
        seqs = list(seqs)
        names = sorted({e.item for sq in seqs for v in sq for e in v}, key=token_key)
        code = {n: i for i, n in enumerate(names)}
        tx_start = [0]
        c_item, c_util, c_iset = [], [], []
        for sq in seqs:
            for k, v in enumerate(sq):
                for e in v:
                    c_item.append(code[e.item])
                    c_util.append(e.quantity * pt[e.item])
                    c_iset.append(k)
            tx_start.append(len(c_item))
        self._build(names, np.array(tx_start, np.int64), np.array(c_item, np.int64),
                    np.array(c_util, np.int64), np.array(c_iset, np.int64))

    @classmethod
    def _from_arrays(cls, names, tx_start, c_item, c_util, c_iset):
        self = cls.__new__(cls)
        self._build(names, tx_start, c_item, c_util, c_iset)
        return self

    def _build(self, names, tx_start, c_item, c_util, c_iset):
        self.names = list(names)
        self.n_items = len(self.names)
        self.tx_start = tx_start
        self.tx_end = tx_start[1:]
        self.n_tx = len(tx_start) - 1
        self.cell_item = c_item
        self.cell_util = c_util
        self.cell_iset = c_iset
        n = len(c_item)
        self.cell_tx = np.repeat(np.arange(self.n_tx, dtype=np.int64), np.diff(tx_start))
        csum = np.concatenate([[0], np.cumsum(c_util)])
        self.tx_util = csum[tx_start[1:]] - csum[tx_start[:-1]]
        # remaining utility: everything strictly after the cell in its transaction
        self.cell_rutil = csum[self.tx_end[self.cell_tx]] - csum[1:n + 1]
        # first cell of the following itemset (or the transaction end)
        boundary = np.ones(n, bool)
        if n:
            boundary[:-1] = (self.cell_tx[1:] != self.cell_tx[:-1]) | (c_iset[1:] != c_iset[:-1])
        last_of_iset = np.flatnonzero(boundary)
        self.iset_end = np.empty(n, np.int64)
        if n:
            grp = np.searchsorted(last_of_iset, np.arange(n))
            self.iset_end[:] = last_of_iset[grp] + 1
        # next occurrence of the same item in the same transaction
        order = np.lexsort((np.arange(n), c_item, self.cell_tx))
        self.cell_next = np.full(n, -1, np.int64)
        if n > 1:
            same = (self.cell_tx[order[1:]] == self.cell_tx[order[:-1]]) & \
                   (c_item[order[1:]] == c_item[order[:-1]])
            self.cell_next[order[:-1][same]] = order[1:][same]

    @property
    def n_cells(self) -> int:
        return len(self.cell_item)

    def item_swu(self) -> np.ndarray:
        """SWU of every single item: summed utility of transactions holding it."""
        width = max(self.n_items, 1)
        tx, item = np.divmod(np.unique(self.cell_tx * width + self.cell_item), width)
        out = np.zeros(self.n_items, np.int64)
        np.add.at(out, item, self.tx_util[tx])
        return out

    def restrict(self, keep_items: np.ndarray) -> "SeqDatabase":
        """Drop every cell whose item is not flagged in ``keep_items``."""
        mask = keep_items[self.cell_item]
        new_code = np.cumsum(keep_items) - 1
        names = [n for n, k in zip(self.names, keep_items) if k]
        counts = np.bincount(self.cell_tx[mask], minlength=self.n_tx)
        tx_start = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        return SeqDatabase._from_arrays(names, tx_start, new_code[self.cell_item[mask]],
                                        self.cell_util[mask], self.cell_iset[mask])

    def ullist(self, tx: int) -> ULList:
        """Materialize transaction ``tx`` as a :class:`ULList` (0-based positions)."""
        a, b = int(self.tx_start[tx]), int(self.tx_start[tx + 1])
        pos_of = {}
        slot = 0
        for c in range(a, b):
            if c > a and self.cell_iset[c] != self.cell_iset[c - 1]:
                slot = 0
            pos_of[c] = (int(self.cell_iset[c]), slot)
            slot += 1
        cells = []
        header = {}
        for c in range(a, b):
            name = self.names[self.cell_item[c]]
            header.setdefault(name, pos_of[c])
            nxt = int(self.cell_next[c])
            cells.append(ULCell(name, pos_of[c], int(self.cell_util[c]), int(self.cell_rutil[c]),
                                pos_of[nxt] if nxt >= 0 else None))
        return ULList(header, tuple(cells))

    def decode(self, codes) -> Pattern:
        return tuple(tuple(self.names[c] for c in w) for w in codes)

    def encode(self, p: Pattern):
        code = {n: i for i, n in enumerate(self.names)}
        return tuple(tuple(code[i] for i in w) for w in p)


# -- projections ---------------------------------------------------------------

@dataclass
class ProjectedDB:
    db: SeqDatabase
    pattern: Pattern
    tx: np.ndarray
    pos: np.ndarray
    util: np.ndarray

    def entries(self) -> list:
        """``[(tx, {cell: best utility ending at cell}), ...]``"""
        out = []
        for t, p, u in zip(self.tx.tolist(), self.pos.tolist(), self.util.tolist()):
            if not out or out[-1][0] != t:
                out.append((t, {}))
            out[-1][1][p] = u
        return out

    def per_tx(self):
        """Pattern utility in each transaction that contains it."""
        return _per_tx(self.tx, self.util)

    def utility(self) -> Money:
        return int(self.per_tx()[1].sum())


def _per_tx(tx, util):
    if len(tx) == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    starts = np.flatnonzero(np.r_[True, tx[1:] != tx[:-1]])
    return tx[starts], np.maximum.reduceat(util, starts)


def _level1(db: SeqDatabase, item: int):
    cells = np.flatnonzero(db.cell_item == item)
    return db.cell_tx[cells], cells.astype(np.int64), db.cell_util[cells]


def _children(db: SeqDatabase, tx, pos, util):
    key, t, p, u = kernels.grow(tx, pos, util, db.tx_end, db.iset_end,
                                db.cell_item, db.cell_util, db.n_items)
    order = np.argsort(key, kind="stable")
    key, t, p, u = key[order], t[order], p[order], u[order]
    groups = kernels.summarize(key, t, p, u, db.cell_rutil, db.tx_util)
    return (t, p, u), groups


def _extend(db: SeqDatabase, tx, pos, util, item: int, mode: str):
    key, t, p, u = kernels.grow(tx, pos, util, db.tx_end, db.iset_end,
                                db.cell_item, db.cell_util, db.n_items)
    sel = key == (item if mode == I_EXT else db.n_items + item)
    return t[sel], p[sel], u[sel]


def concatenate(p: Pattern, item: str, mode: str) -> Pattern:
    if mode == S_EXT:
        return tuple(p) + ((item,),)
    if mode != I_EXT:
        raise ParameterError(f"unknown extension mode {mode!r}")
    if not p:
        raise ValidationError("I-extension of an empty pattern")
    last = p[-1]
    if token_key(item) <= token_key(last[-1]):
        raise ValidationError(f"I-extension item {item!r} must follow {last[-1]!r}")
    return tuple(p[:-1]) + (last + (item,),)


def project(db: SeqDatabase, p: Pattern) -> ProjectedDB:
    """Projected database of ``p`` built by replaying its concatenations."""
    empty = np.empty(0, np.int64)
    if not p:
        raise ValidationError("cannot project the empty pattern")
    code = {n: i for i, n in enumerate(db.names)}
    if any(i not in code for w in p for i in w):
        return ProjectedDB(db, tuple(p), empty, empty, empty)
    tx, pos, util = _level1(db, code[p[0][0]])
    for k, w in enumerate(p):
        for j, item in enumerate(w):
            if k == 0 and j == 0:
                continue
            tx, pos, util = _extend(db, tx, pos, util, code[item], I_EXT if j else S_EXT)
    return ProjectedDB(db, tuple(p), tx, pos, util)


def swu(p: Pattern, seq_db) -> Money:
    """Summed transaction utility of the sequences containing ``p``.

    ``seq_db`` is a list of ``(QSequence, transaction utility)`` pairs.
    """
    return sum(tu for sq, tu in seq_db if sequence_contained(p, sq))


def peu(p: Pattern, pd: ProjectedDB) -> Money:
    if tuple(p) != pd.pattern:
        raise ValidationError("projection does not belong to this pattern")
    if len(pd.tx) == 0:
        return 0
    _, best = _per_tx(pd.tx, pd.util + pd.db.cell_rutil[pd.pos])
    return int(best.sum())


# -- search --------------------------------------------------------------------

@dataclass
class HuspRecord:
    utility: Money
    tx: np.ndarray
    tx_utils: np.ndarray

    def per_tx(self) -> dict:
        return dict(zip(self.tx.tolist(), self.tx_utils.tolist()))


@dataclass
class SeqMineResult:
    patterns: dict = field(default_factory=dict)  # Pattern -> HuspRecord
    candidates: int = 0

    def utilities(self) -> dict:
        return {p: r.utility for p, r in self.patterns.items()}

    def merge(self, other: "SeqMineResult") -> None:
        self.patterns.update(other.patterns)
        self.candidates += other.candidates


class _Search:
    def __init__(self, db: SeqDatabase, minutil: Money, acc: SeqMineResult):
        self.db = db
        self.minutil = minutil
        self.acc = acc

    def judge(self, codes, tx, pos, util, u, peu_):
        self.acc.candidates += 1
        if u >= self.minutil:
            t, ut = _per_tx(tx, util)
            self.acc.patterns[self.db.decode(codes)] = HuspRecord(int(u), t, ut)
        return peu_ >= self.minutil

    def grow_from(self, codes, tx, pos, util):
        """Explore the subtree under a node whose PEU cleared the threshold."""
        db = self.db
        stack = [(codes, tx, pos, util)]
        while stack:
            codes, tx, pos, util = stack.pop()
            (t, p, u), (g_start, g_key, g_u, g_peu, g_swu) = _children(db, tx, pos, util)
            todo = []
            for g in range(len(g_key)):
                if g_swu[g] < self.minutil:
                    continue
                k = int(g_key[g])
                if k < db.n_items:
                    child = codes[:-1] + (codes[-1] + (k,),)
                else:
                    child = codes + ((k - db.n_items,),)
                a, b = g_start[g], g_start[g + 1]
                if self.judge(child, t[a:b], p[a:b], u[a:b], int(g_u[g]), int(g_peu[g])):
                    todo.append((child, t[a:b], p[a:b], u[a:b]))
            stack.extend(reversed(todo))


def _mine_subtree(db, minutil, node):
    acc = SeqMineResult()
    _Search(db, minutil, acc).grow_from(*node)
    return acc


def mine_encoded(db: SeqDatabase, minutil: Money, threads: int = 1) -> SeqMineResult:
    if minutil <= 0:
        raise ParameterError("minutil must be positive")
    # items whose SWU misses the threshold cannot occur in any result
    keep = db.item_swu() >= minutil
    if not keep.all():
        db = db.restrict(keep)
    acc = SeqMineResult()
    search = _Search(db, minutil, acc)
    key = db.cell_item
    order = np.argsort(key, kind="stable")
    groups = kernels.summarize(key[order], db.cell_tx[order], order.astype(np.int64),
                               db.cell_util[order], db.cell_rutil, db.tx_util)
    g_start, g_key, g_u, g_peu, g_swu = groups
    roots = []
    for g in range(len(g_key)):
        if g_swu[g] < minutil:
            continue
        a, b = g_start[g], g_start[g + 1]
        sel = order[a:b]
        node = (((int(g_key[g]),),), db.cell_tx[sel], sel.astype(np.int64), db.cell_util[sel])
        if search.judge(*node, int(g_u[g]), int(g_peu[g])):
            roots.append(node)
    if threads > 1 and len(roots) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for part in pool.map(lambda n: _mine_subtree(db, minutil, n), roots):
                acc.merge(part)
    else:
        for node in roots:
            search.grow_from(*node)
    return acc


def as_sequences(seq_db) -> list:
    return [s[0] if isinstance(s, tuple) else s for s in seq_db]


def mine_husps(seq_db, pt: ProfitTable, minutil: Money, threads: int = 1) -> SeqMineResult:
    """All sequences with utility >= ``minutil``.

    ``seq_db`` holds ``QSequence`` objects or ``(QSequence, utility)`` pairs;
    utilities are recomputed from ``pt``. Record transaction indices follow
    the input order.
    """
    return mine_encoded(SeqDatabase(as_sequences(seq_db), pt), minutil, threads)


def judge(prefix2: Pattern, parent_pd: ProjectedDB, acc: SeqMineResult, minutil: Money) -> None:
    """Evaluate one extension of ``parent_pd.pattern`` and grow it if promising."""
    parent = parent_pd.pattern
    db = parent_pd.db
    if len(prefix2) == len(parent):
        mode, item = I_EXT, prefix2[-1][-1]
    elif len(prefix2) == len(parent) + 1 and len(prefix2[-1]) == 1:
        mode, item = S_EXT, prefix2[-1][0]
    else:
        raise ValidationError("prefix2 is not a one-item extension of the parent pattern")
    if concatenate(parent, item, mode) != tuple(prefix2):
        raise ValidationError("prefix2 is not a one-item extension of the parent pattern")
    if item not in db.names:
        acc.candidates += 1
        return
    code = db.names.index(item)
    tx, pos, util = _extend(db, parent_pd.tx, parent_pd.pos, parent_pd.util, code, mode)
    child = ProjectedDB(db, tuple(prefix2), tx, pos, util)
    local = SeqMineResult()
    search = _Search(db, minutil, local)
    codes = db.encode(prefix2)
    if search.judge(codes, tx, pos, util, child.utility() if len(tx) else 0,
                    peu(prefix2, child)):
        search.grow_from(codes, tx, pos, util)
    acc.merge(local)


def sequence_only_utility(p: Pattern, seqs, pt: ProfitTable) -> Money:
    db = SeqDatabase(as_sequences(seqs), pt)
    return project(db, p).utility()


def transaction_utilities(seqs, pt: ProfitTable) -> list:
    return [sequence_utility(sq, pt) for sq in as_sequences(seqs)]
