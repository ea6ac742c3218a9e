"""Brute-force reference answers for micro databases.

Nothing here prunes. ``oracle_match_utility`` lists every embedding by
backtracking; ``oracle_mine`` lists every sub-q-sequence of every
transaction, so each (pattern, transaction) utility is a plain maximum over
all of its matches.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations, product

from .matching import MultiDimPattern
from .model import (
    WILDCARD,
    MdusError,
    Money,
    ProfitTable,
    QSDatabase,
    Transaction,
    check_delta,
    database_utility,
    make_pattern,
    min_utility,
)
from .report import MiningReport


class OracleRefusal(MdusError):
    """The input is too large for exhaustive enumeration."""


@dataclass(frozen=True)
class OracleBounds:
    max_pattern_itemsets: int = 4
    max_items_per_itemset: int = 3
    max_transactions: int = 12
    max_items: int = 6
    max_dims: int = 3


def oracle_match_utility(t: MultiDimPattern, tx: Transaction, pt: ProfitTable):
    """Return ``(max utility, [(embedding, utility), ...])`` over all embeddings."""
    if any(p != WILDCARD and p != d for p, d in zip(t.dims, tx.dims)):
        return 0, []
    found = []
    seq = tx.seq

    def walk(i, start, chosen, acc):
        if i == len(t.seq):
            found.append((tuple(chosen), acc))
            return
        w = t.seq[i]
        for j in range(start, len(seq)):
            v = seq[j]
            if set(w) <= set(v.items):
                gain = sum(v.quantity(x) * pt[x] for x in w)
                walk(i + 1, j + 1, chosen + [j], acc + gain)

    if t.seq:
        walk(0, 0, [], 0)
    return (max(u for _, u in found) if found else 0), found


def _check_bounds(db: QSDatabase, bounds: OracleBounds) -> None:
    problems = []
    if len(db) > bounds.max_transactions:
        problems.append(f"{len(db)} transactions > {bounds.max_transactions}")
    if len(db.items()) > bounds.max_items:
        problems.append(f"{len(db.items())} items > {bounds.max_items}")
    if len(db.schema) > bounds.max_dims:
        problems.append(f"{len(db.schema)} dimensions > {bounds.max_dims}")
    for t in db:
        if len(t.seq) > bounds.max_pattern_itemsets:
            problems.append(f"{t.sid} has {len(t.seq)} itemsets > {bounds.max_pattern_itemsets}")
        for v in t.seq:
            if len(v) > bounds.max_items_per_itemset:
                problems.append(f"{t.sid} has an itemset of {len(v)} items "
                                f"> {bounds.max_items_per_itemset}")
    if problems:
        raise OracleRefusal("; ".join(problems))


def _subsets(v, pt):
    """Every nonempty sub-itemset of ``v`` with its utility."""
    entries = [(e.item, e.quantity * pt[e.item]) for e in v]
    for k in range(1, len(entries) + 1):
        for combo in combinations(entries, k):
            yield tuple(i for i, _ in combo), sum(u for _, u in combo)


def sequence_utilities(db: QSDatabase, bounds: OracleBounds = OracleBounds()) -> dict:
    """``{pattern: {row: max utility}}`` for every pattern occurring in ``db``."""
    _check_bounds(db, bounds)
    table = {}
    for r, t in enumerate(db):
        options = [list(_subsets(v, db.profits)) for v in t.seq]
        n = len(options)
        for k in range(1, min(n, bounds.max_pattern_itemsets) + 1):
            for idx in combinations(range(n), k):
                for pick in product(*(options[i] for i in idx)):
                    p = make_pattern([w for w, _ in pick])
                    u = sum(x for _, x in pick)
                    row = table.setdefault(p, {})
                    if u > row.get(r, -1):
                        row[r] = u
    return table


def oracle_patterns(db: QSDatabase, minutil: Money, bounds: OracleBounds = OracleBounds(),
                    table: dict = None) -> dict:
    if table is None:
        table = sequence_utilities(db, bounds)
    dims = [t.dims for t in db]
    m = len(db.schema)
    out = {}
    for p, row in table.items():
        cands = set()
        for r, u in row.items():
            if u > 0:
                for mask in product((False, True), repeat=m):
                    cands.add(tuple(WILDCARD if w else d for w, d in zip(mask, dims[r])))
        for dv in cands:
            total = sum(u for r, u in row.items()
                        if all(x == WILDCARD or x == d for x, d in zip(dv, dims[r])))
            if total >= minutil:
                out[MultiDimPattern(dv, p)] = total
    return out


def oracle_mine(db: QSDatabase, delta, bounds: OracleBounds = OracleBounds()) -> MiningReport:
    check_delta(delta)
    t0 = time.perf_counter()
    _check_bounds(db, bounds)
    db_util = database_utility(db)
    minutil = min_utility(db_util, delta)
    found = oracle_patterns(db, minutil, bounds) if minutil > 0 else {}
    runtime = (time.perf_counter() - t0) * 1000
    n = len(found)
    return MiningReport(list(found.items()), {
        "algo": "oracle", "delta": float(delta), "min_util": minutil, "db_util": db_util,
        "candidates_seq": 0, "candidates_dim": 0, "candidates_total": 0,
        "pattern_count": n, "runtime_ms": round(runtime, 3),
    })
