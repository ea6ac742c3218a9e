"""Core domain types and utility arithmetic.

Money is kept as an ``int`` count of 1/10000 units so every sum is exact and
threshold comparisons do not depend on summation order.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import ROUND_DOWN, Decimal, InvalidOperation
from typing import Iterable, Mapping, Sequence, Union

SCALE = 10_000
MONEY_MAX = 2**63 - 1
WILDCARD = "*"
RESERVED_TOKENS = frozenset({"-1", "-2", "|", WILDCARD})

Money = int
Pattern = tuple  # tuple[tuple[str, ...], ...]


class MdusError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(MdusError):
    pass


class MissingProfitError(ValidationError, KeyError):
    def __str__(self):
        return f"no profit for item {self.args[0]!r}"


class ParameterError(MdusError, ValueError):
    pass


_TOKEN_RE = re.compile(r"^\S+$")


def check_token(name: str, what: str = "item") -> str:
    if not isinstance(name, str) or not _TOKEN_RE.match(name):
        raise ValidationError(f"invalid {what} token {name!r}")
    if name in RESERVED_TOKENS:
        raise ValidationError(f"{what} token {name!r} is reserved")
    return name


def check_item(name: str) -> str:
    check_token(name)
    # ':' separates item from quantity in the file format and namespaces
    # dimension tokens in transformed databases
    if ":" in name:
        raise ValidationError(f"item {name!r} may not contain ':'")
    return name


# -- money -------------------------------------------------------------------

def money(value: Union[int, str, Decimal, float]) -> Money:
    """Convert a human amount (``39.4``, ``"0.0001"``, ``52``) to ticks.

    Amounts with more than four fractional digits are rejected rather than
    rounded.
    """
    if isinstance(value, bool):
        raise ParameterError(f"not an amount: {value!r}")
    if isinstance(value, int):
        ticks = value * SCALE
    else:
        try:
            d = Decimal(str(value)) if isinstance(value, float) else Decimal(value)
        except (InvalidOperation, TypeError):
            raise ParameterError(f"not an amount: {value!r}") from None
        if not d.is_finite():
            raise ParameterError(f"not an amount: {value!r}")
        scaled = d * SCALE
        if scaled != scaled.to_integral_value():
            raise ParameterError(f"{value!r} has more than 4 fractional digits")
        ticks = int(scaled)
    if abs(ticks) > MONEY_MAX:
        raise ParameterError(f"amount {value!r} exceeds 64-bit range")
    return ticks


def format_money(ticks: Money) -> str:
    """Shortest exact decimal text: ``520000 -> '52'``, ``394000 -> '39.4'``."""
    sign = "-" if ticks < 0 else ""
    whole, frac = divmod(abs(ticks), SCALE)
    if frac == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:04d}".rstrip("0")


def to_decimal(ticks: Money) -> Decimal:
    return Decimal(ticks) / SCALE


# -- types -------------------------------------------------------------------

@dataclass(frozen=True)
class ProfitTable:
    entries: Mapping[str, Money]

    def __post_init__(self):
        entries = dict(self.entries)
        for item, p in entries.items():
            if not isinstance(p, int) or isinstance(p, bool):
                raise ValidationError(f"profit of {item!r} must be integer ticks, got {p!r}")
            if p < 0:
                raise ValidationError(f"profit of {item!r} is negative")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_amounts(cls, amounts: Mapping[str, Union[int, str, Decimal]]) -> "ProfitTable":
        return cls({k: money(v) for k, v in amounts.items()})

    def __getitem__(self, item: str) -> Money:
        try:
            return self.entries[item]
        except KeyError:
            raise MissingProfitError(item) from None

    def __contains__(self, item) -> bool:
        return item in self.entries

    def __len__(self):
        return len(self.entries)

    def items(self):
        return self.entries.items()

    def with_zero(self, tokens: Iterable[str]) -> "ProfitTable":
        d = dict(self.entries)
        d.update((t, 0) for t in tokens)
        return ProfitTable(d)


def token_key(token: str):
    """Canonical order: namespaced dimension tokens first, then items by name."""
    if ":" in token:
        idx, value = token.split(":", 1)
        if idx.isdigit():
            return (0, int(idx), value)
    return (1, 0, token)


@dataclass(frozen=True)
class QItem:
    item: str
    quantity: int

    def __post_init__(self):
        if not isinstance(self.quantity, int) or self.quantity < 1:
            raise ValidationError(f"quantity of {self.item!r} must be a positive integer")


@dataclass(frozen=True)
class QItemset:
    entries: tuple

    def __post_init__(self):
        entries = tuple(self.entries)
        if not entries:
            raise ValidationError("empty q-itemset")
        keys = [token_key(e.item) for e in entries]
        if any(a >= b for a, b in zip(keys, keys[1:])):
            raise ValidationError(
                "q-itemset items must be strictly increasing: "
                + " ".join(e.item for e in entries))
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, *pairs) -> "QItemset":
        """``QItemset.of(("a", 1), ("c", 3))``; items are sorted for you."""
        items = sorted(pairs, key=lambda p: token_key(p[0]))
        return cls(tuple(QItem(i, q) for i, q in items))

    @property
    def items(self) -> tuple:
        return tuple(e.item for e in self.entries)

    def quantity(self, item: str) -> int:
        for e in self.entries:
            if e.item == item:
                return e.quantity
        return 0

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class QSequence:
    itemsets: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "itemsets", tuple(self.itemsets))

    @classmethod
    def of(cls, *itemsets) -> "QSequence":
        """``QSequence.of([("a", 1), ("c", 3)], [("b", 1)])``"""
        return cls(tuple(QItemset.of(*s) for s in itemsets))

    def __iter__(self):
        return iter(self.itemsets)

    def __len__(self):
        return len(self.itemsets)

    def __getitem__(self, i):
        return self.itemsets[i]

    def items(self) -> set:
        return {e.item for v in self.itemsets for e in v}


@dataclass(frozen=True)
class DimensionSchema:
    names: tuple = ()

    def __post_init__(self):
        names = tuple(self.names)
        for n in names:
            check_token(n, "dimension name")
        if len(set(names)) != len(names):
            raise ValidationError("duplicate dimension names")
        object.__setattr__(self, "names", names)

    def __len__(self):
        return len(self.names)


@dataclass(frozen=True)
class Transaction:
    sid: str
    dims: tuple
    seq: QSequence

    def __post_init__(self):
        check_token(self.sid, "sid")
        object.__setattr__(self, "dims", tuple(self.dims))
        for v in self.dims:
            check_token(v, "dimension value")


@dataclass(frozen=True)
class QSDatabase:
    schema: DimensionSchema
    profits: ProfitTable
    transactions: tuple = field(default=())

    def __post_init__(self):
        txs = tuple(self.transactions)
        object.__setattr__(self, "transactions", txs)
        seen = set()
        m = len(self.schema)
        for t in txs:
            if t.sid in seen:
                raise ValidationError(f"duplicate SID {t.sid!r}")
            seen.add(t.sid)
            if len(t.dims) != m:
                raise ValidationError(
                    f"{t.sid}: {len(t.dims)} dimension values for a {m}-dimension schema")
            for item in t.seq.items():
                if item not in self.profits:
                    raise MissingProfitError(item)

    def __len__(self):
        return len(self.transactions)

    def __iter__(self):
        return iter(self.transactions)

    def items(self) -> list:
        found = set()
        for t in self.transactions:
            found |= t.seq.items()
        return sorted(found, key=token_key)


# -- utility arithmetic -------------------------------------------------------

def item_utility(qi: QItem, pt: ProfitTable) -> Money:
    return qi.quantity * pt[qi.item]


def qitemset_utility(v: QItemset, pt: ProfitTable) -> Money:
    return sum(item_utility(e, pt) for e in v)


def sequence_utility(sq: QSequence, pt: ProfitTable) -> Money:
    return sum(qitemset_utility(v, pt) for v in sq)


def transaction_utility(t: Transaction, pt: ProfitTable) -> Money:
    # dimensions carry no utility
    return sequence_utility(t.seq, pt)


def database_utility(db: QSDatabase) -> Money:
    return sum(transaction_utility(t, db.profits) for t in db)


def check_delta(delta) -> Decimal:
    try:
        d = Decimal(str(delta)) if isinstance(delta, float) else Decimal(delta)
    except (InvalidOperation, TypeError):
        raise ParameterError(f"delta must be a ratio in (0, 1], got {delta!r}") from None
    if not d.is_finite() or d <= 0 or d > 1:
        raise ParameterError(f"delta must be a ratio in (0, 1], got {delta!r}")
    return d


def min_utility(db_util: Money, delta) -> Money:
    """``db_util * delta`` truncated onto the money grid."""
    d = check_delta(delta)
    return int((Decimal(db_util) * d).to_integral_value(rounding=ROUND_DOWN))


def make_pattern(itemsets: Sequence[Iterable[str]]) -> Pattern:
    """Canonical pattern: a tuple of itemsets, each a key-sorted tuple."""
    out = []
    for w in itemsets:
        w = tuple(sorted(set(w), key=token_key))
        if not w:
            raise ValidationError("empty itemset in pattern")
        out.append(w)
    return tuple(out)


def pattern_text(p: Pattern) -> str:
    return "<" + "".join("[" + " ".join(w) + "]" for w in p) + ">"
