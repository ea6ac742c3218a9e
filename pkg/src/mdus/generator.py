"""Seeded synthetic multi-dimensional quantitative sequence databases.

Quantities are uniform in 1..5, unit profits log-normal clamped to
[0.01, 1000.00] and quantized to the money grid, dimension values uniform per
slot. Item popularity is skewed (weight 1/rank) so that frequent patterns
exist at realistic thresholds.
"""
from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal

import numpy as np

from .model import (
    DimensionSchema,
    ParameterError,
    ProfitTable,
    QItem,
    QItemset,
    QSDatabase,
    QSequence,
    Transaction,
    money,
)

PROFIT_MIN = money("0.01")
PROFIT_MAX = money("1000.00")


@dataclass(frozen=True)
class GenParams:
    num_transactions: int
    num_items: int
    values_per_dim: tuple = (3, 3, 3)
    avg_itemsets_per_seq: int = 4
    avg_items_per_itemset: int = 3
    seed: int = 0
    profit_mu: float = 1.0
    profit_sigma: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "values_per_dim", tuple(int(v) for v in self.values_per_dim))
        for name in ("num_transactions", "num_items", "avg_itemsets_per_seq",
                     "avg_items_per_itemset"):
            if getattr(self, name) < 1:
                raise ParameterError(f"{name} must be positive")
        if any(v < 1 for v in self.values_per_dim):
            raise ParameterError("every dimension needs at least one value")

    @property
    def schema(self) -> DimensionSchema:
        return DimensionSchema(tuple(f"d{i + 1}" for i in range(len(self.values_per_dim))))


def parse_dims_spec(spec: str) -> tuple:
    """``"4x5"`` -> five values in each of four dimensions; ``"2,3"`` -> explicit."""
    spec = spec.strip()
    try:
        if not spec or spec == "0":
            return ()
        if "x" in spec:
            m, k = spec.split("x")
            return (int(k),) * int(m)
        return tuple(int(v) for v in spec.split(","))
    except ValueError:
        raise ParameterError(f"bad dimension spec {spec!r}; use MxK or K1,K2,...") from None


def _item_names(n: int) -> list:
    width = len(str(n))
    return [f"i{k:0{width}d}" for k in range(1, n + 1)]


def draw_profits(rng: np.random.Generator, n: int, mu: float, sigma: float) -> list:
    raw = rng.lognormal(mu, sigma, size=n)
    out = []
    for x in raw:
        p = money(Decimal(f"{float(x):.4f}"))
        out.append(min(max(p, PROFIT_MIN), PROFIT_MAX))
    return out


def gen_synthetic(p: GenParams) -> QSDatabase:
    rng = np.random.default_rng(p.seed)
    items = _item_names(p.num_items)
    profits = dict(zip(items, draw_profits(rng, p.num_items, p.profit_mu, p.profit_sigma)))
    weights = 1.0 / np.arange(1, p.num_items + 1)
    weights /= weights.sum()
    txs = []
    width = len(str(p.num_transactions))
    for t in range(p.num_transactions):
        dims = tuple(f"v{int(rng.integers(1, k + 1))}" for k in p.values_per_dim)
        n_sets = 1 + int(rng.poisson(p.avg_itemsets_per_seq - 1))
        itemsets = []
        for _ in range(n_sets):
            size = min(1 + int(rng.poisson(p.avg_items_per_itemset - 1)), p.num_items)
            chosen = np.sort(rng.choice(p.num_items, size=size, replace=False, p=weights))
            qty = rng.integers(1, 6, size=size)
            itemsets.append(QItemset(tuple(QItem(items[c], int(q)) for c, q in zip(chosen, qty))))
        txs.append(Transaction(f"S{t + 1:0{width}d}", dims, QSequence(tuple(itemsets))))
    used = {e.item for tx in txs for v in tx.seq for e in v}
    return QSDatabase(p.schema, ProfitTable({k: v for k, v in profits.items() if k in used}),
                      tuple(txs))


def gen_micro(seed: int, max_tx: int = 8, max_items: int = 5, max_dims: int = 3,
              max_values: int = 3, max_qty: int = 3, max_itemsets: int = 4,
              max_itemset_size: int = 3) -> QSDatabase:
    """Tiny random database for exhaustive cross-checks."""
    rng = np.random.default_rng(seed)
    n_items = int(rng.integers(1, max_items + 1))
    items = [chr(ord("a") + k) for k in range(n_items)]
    # a few zero profits and fractional cents keep the arithmetic honest
    choices = [0, 1, 2, 3, 5, 7, 10, Decimal("0.5"), Decimal("2.25")]
    profits = {i: money(choices[int(rng.integers(len(choices)))]) for i in items}
    m = int(rng.integers(0, max_dims + 1))
    n_vals = [int(rng.integers(1, max_values + 1)) for _ in range(m)]
    txs = []
    for t in range(int(rng.integers(1, max_tx + 1))):
        dims = tuple(f"x{int(rng.integers(n_vals[d]))}" for d in range(m))
        sets = []
        for _ in range(int(rng.integers(1, max_itemsets + 1))):
            size = int(rng.integers(1, min(max_itemset_size, n_items) + 1))
            chosen = sorted(rng.choice(n_items, size=size, replace=False))
            sets.append(QItemset(tuple(QItem(items[c], int(rng.integers(1, max_qty + 1)))
                                       for c in chosen)))
        txs.append(Transaction(f"T{t}", dims, QSequence(tuple(sets))))
    schema = DimensionSchema(tuple(f"D{d}" for d in range(m)))
    return QSDatabase(schema, ProfitTable(profits), tuple(txs))
