"""High-utility dimension-value itemsets for one sequential pattern.

Given the utility a pattern reaches in every transaction, the utility of a
set of dimension values is the summed utility over the transactions carrying
all of them. That measure only shrinks as the set grows, so a depth-first
utility-list join with threshold pruning finds every qualifying set.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels as kernels
from .em import dim_token, parse_dim_token
from .matching import MultiDimPattern
from .model import (
    WILDCARD,
    Money,
    ParameterError,
    Pattern,
    QSDatabase,
    ValidationError,
    token_key,
)


class DimIndex:
    """Row lists per dimension token, shared by every pattern of one database."""

    def __init__(self, db: QSDatabase):
        self.sids = tuple(t.sid for t in db)
        self.n_dims = len(db.schema)
        rows = {}
        for r, t in enumerate(db):
            for i, v in enumerate(t.dims):
                rows.setdefault(dim_token(i, v), []).append(r)
        self.tokens = sorted(rows, key=token_key)
        self.rows = {k: np.array(rows[k], np.int64) for k in self.tokens}
        self.row_tokens = [frozenset(dim_token(i, v) for i, v in enumerate(t.dims)) for t in db]


@dataclass(frozen=True)
class DimTransaction:
    sid: str
    values: frozenset
    tu: Money


@dataclass
class DimDatabase:
    husp: Pattern
    index: DimIndex
    tu: np.ndarray  # utility of ``husp`` per row, 0 where it does not occur

    @property
    def total(self) -> Money:
        return int(self.tu.sum())

    @property
    def rows(self) -> list:
        return [DimTransaction(s, v, int(u))
                for s, v, u in zip(self.index.sids, self.index.row_tokens, self.tu)]


@dataclass
class UtilityList:
    name: tuple
    rows: np.ndarray
    utils: np.ndarray
    sids: tuple = field(repr=False, default=())

    @property
    def sutil(self) -> Money:
        return int(self.utils.sum())

    @property
    def records(self) -> list:
        return [(self.sids[r], int(u)) for r, u in zip(self.rows, self.utils)]


@dataclass
class DimMineResult:
    patterns: dict = field(default_factory=dict)  # MultiDimPattern -> utility
    itemsets: dict = field(default_factory=dict)  # token tuple -> sutil
    candidates: int = 0


def build_dim_db(husp: Pattern, per_tx_utils, db: QSDatabase, index: DimIndex = None) -> DimDatabase:
    """``per_tx_utils``: ``{row: utility}`` or a ``(rows, utilities)`` pair."""
    index = index or DimIndex(db)
    tu = np.zeros(len(db), np.int64)
    if isinstance(per_tx_utils, dict):
        for r, u in per_tx_utils.items():
            tu[r] = u
    else:
        rows, utils = per_tx_utils
        tu[np.asarray(rows, np.int64)] = utils
    return DimDatabase(tuple(husp), index, tu)


def build_utility_list(token: str, dimdb: DimDatabase) -> UtilityList:
    rows = dimdb.index.rows.get(token, np.empty(0, np.int64))
    return UtilityList((token,), rows, dimdb.tu[rows], dimdb.index.sids)


def _dim_of(token: str) -> int:
    parsed = parse_dim_token(token)
    if parsed is None:
        raise ValidationError(f"{token!r} is not a dimension token")
    return parsed[0]


def construct_ul(x: UtilityList, y: UtilityList) -> UtilityList:
    if x.name[:-1] != y.name[:-1] or x.name[-1] == y.name[-1]:
        raise ValidationError(f"cannot join {x.name} with {y.name}: prefixes differ")
    name = tuple(sorted(x.name + y.name[-1:], key=token_key))
    rows, utils = kernels.intersect(x.rows, x.utils, y.rows, y.utils)
    return UtilityList(name, rows, utils, x.sids)


def dim_itemset_utility(x, dimdb: DimDatabase) -> Money:
    x = frozenset(x)
    if not x:
        raise ParameterError("empty dimension itemset")
    return int(sum(int(u) for toks, u in zip(dimdb.index.row_tokens, dimdb.tu) if x <= toks))


def dminer(uls: list, minutil: Money, acc: DimMineResult) -> None:
    """Join each list with every later one; keep and extend those that qualify."""
    for i, x in enumerate(uls):
        ext = []
        dx = _dim_of(x.name[-1])
        for y in uls[i + 1:]:
            # one value per dimension: such joins are always empty
            if _dim_of(y.name[-1]) == dx:
                continue
            z = construct_ul(x, y)
            acc.candidates += 1
            sutil = z.sutil
            if sutil >= minutil:
                acc.itemsets[z.name] = sutil
                ext.append(z)
        if ext:
            dminer(ext, minutil, acc)


def combine(x, husp: Pattern, schema) -> MultiDimPattern:
    n = len(schema) if not isinstance(schema, int) else schema
    dims = [WILDCARD] * n
    for tok in x:
        idx = _dim_of(tok)
        if idx >= n:
            raise ValidationError(f"{tok!r} outside a {n}-dimension schema")
        if dims[idx] != WILDCARD:
            raise ValidationError(f"two values for dimension {idx}")
        dims[idx] = parse_dim_token(tok)[1]
    return MultiDimPattern(tuple(dims), husp)


def dhui_mine(husp: Pattern, dimdb: DimDatabase, minutil: Money, schema) -> DimMineResult:
    if minutil <= 0:
        raise ParameterError("minutil must be positive")
    acc = DimMineResult()
    frontier = []
    for token in dimdb.index.tokens:
        ul = build_utility_list(token, dimdb)
        acc.candidates += 1
        if ul.sutil >= minutil:
            acc.itemsets[ul.name] = ul.sutil
            frontier.append(ul)
    dminer(frontier, minutil, acc)
    for name, sutil in acc.itemsets.items():
        acc.patterns[combine(name, husp, schema)] = sutil
    total = dimdb.total
    if total >= minutil:
        # the sequence on its own, every dimension a wildcard
        acc.patterns[combine((), husp, schema)] = total
    return acc
