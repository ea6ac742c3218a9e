"""Mining through database transformation.

Each transaction's dimension values become one leading itemset of zero-profit
tokens ``"<dim index>:<value>"``; an ordinary high-utility sequential pattern
search over that database then yields the multi-dimensional patterns
directly.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

from .matching import MultiDimPattern
from .model import (
    WILDCARD,
    Pattern,
    ProfitTable,
    QItem,
    QItemset,
    QSDatabase,
    QSequence,
    ValidationError,
    check_delta,
    database_utility,
    min_utility,
    token_key,
)
from .report import MiningReport
from .seqminer import SeqDatabase, mine_encoded


def dim_token(index: int, value: str) -> str:
    return f"{index}:{value}"


def parse_dim_token(token: str):
    """``"1:Young" -> (1, "Young")``; ``None`` for ordinary items."""
    key = token_key(token)
    if key[0] == 0:
        return key[1], key[2]
    return None


@dataclass(frozen=True)
class TransformedDB:
    seq_db: tuple          # QSequence per transaction, dimension itemset first
    dim_marker: frozenset  # every dimension token that occurs
    profits: ProfitTable   # original profits plus 0 for each dimension token
    n_dims: int


def transform_transaction(dims, sq: QSequence) -> QSequence:
    if not dims:
        return sq
    lead = QItemset(tuple(QItem(dim_token(i, v), 1) for i, v in enumerate(dims)))
    return QSequence((lead,) + sq.itemsets)


def transform_db(db: QSDatabase) -> TransformedDB:
    seqs = tuple(transform_transaction(t.dims, t.seq) for t in db)
    marker = frozenset(dim_token(i, v) for t in db for i, v in enumerate(t.dims))
    return TransformedDB(seqs, marker, db.profits.with_zero(marker), len(db.schema))


def inverse_transform(p: Pattern, marker, n_dims: int) -> MultiDimPattern:
    """Turn a pattern over the transformed database back into (dims, sequence).

    ``marker`` is the dimension-token set (or anything supporting ``in``).
    """
    dims = [WILDCARD] * n_dims
    seq = []
    dim_itemsets = 0
    for w in p:
        tokens = [i for i in w if i in marker]
        if not tokens:
            seq.append(w)
            continue
        if len(tokens) != len(w):
            raise ValidationError(f"itemset mixes dimension values and items: {w}")
        dim_itemsets += 1
        if dim_itemsets > 1:
            raise ValidationError("dimension values spread over several itemsets")
        for tok in tokens:
            idx, value = parse_dim_token(tok)
            if idx >= n_dims:
                raise ValidationError(f"dimension token {tok!r} outside the schema")
            if dims[idx] != WILDCARD:
                raise ValidationError(f"two values for dimension {idx}")
            dims[idx] = value
    return MultiDimPattern(tuple(dims), tuple(seq))


def mine_em(db: QSDatabase, delta, threads: int = 1) -> MiningReport:
    check_delta(delta)
    t0 = time.perf_counter()
    tdb = transform_db(db)
    db_util = database_utility(db)
    minutil = min_utility(db_util, delta)
    patterns = []
    candidates = 0
    if minutil > 0:
        res = mine_encoded(SeqDatabase(tdb.seq_db, tdb.profits), minutil, threads)
        candidates = res.candidates
        for p, rec in res.patterns.items():
            patterns.append((inverse_transform(p, tdb.dim_marker, tdb.n_dims), rec.utility))
    runtime = (time.perf_counter() - t0) * 1000
    return MiningReport(patterns, {
        "algo": "em", "delta": float(delta), "min_util": minutil, "db_util": db_util,
        "candidates_seq": candidates, "candidates_dim": 0, "candidates_total": candidates,
        "runtime_ms": round(runtime, 3),
    })
