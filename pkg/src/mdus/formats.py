"""Text formats for databases, profit tables and mining results.

Database (UTF-8, tab separated)::

    #DIMS<TAB>Sex<TAB>Age
    S1<TAB>Male<TAB>Young<TAB>|<TAB>a:1 c:3 -1 b:2 -2

Profit table: ``item<TAB>profit`` per line. Results: a ``#DIMS`` header and
one ``(v1,...,vM)<TAB><[a c][b]><TAB>#UTIL:52`` line per pattern; stats are
a single JSON object.
"""
from __future__ import annotations

import json
import os
from pathlib import Path

from .matching import MultiDimPattern
from .model import (
    DimensionSchema,
    MdusError,
    ProfitTable,
    QItem,
    QItemset,
    QSDatabase,
    QSequence,
    Transaction,
    ValidationError,
    check_item,
    format_money,
    money,
    pattern_text,
    token_key,
)
from .report import STATS_KEYS, MiningReport


class ParseError(ValidationError):
    def __init__(self, path, lineno, msg):
        super().__init__(f"{path}:{lineno}: {msg}")
        self.path, self.lineno = path, lineno


def _lines(path):
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if line.strip():
                yield n, line


def parse_profits(path) -> ProfitTable:
    entries = {}
    for n, line in _lines(path):
        parts = line.split("\t")
        if len(parts) != 2:
            raise ParseError(path, n, "expected 'item<TAB>profit'")
        item, amount = parts[0].strip(), parts[1].strip()
        try:
            check_item(item)
            p = money(amount)
        except MdusError as e:
            raise ParseError(path, n, str(e)) from None
        if p < 0:
            raise ParseError(path, n, f"negative profit for {item!r}")
        if item in entries:
            raise ParseError(path, n, f"duplicate item {item!r}")
        entries[item] = p
    return ProfitTable(entries)


def parse_sequence(text: str) -> QSequence:
    tokens = text.split()
    if not tokens or tokens[-1] != "-2":
        raise ValidationError("sequence must end with -2")
    itemsets, cur = [], []
    for tok in tokens[:-1]:
        if tok == "-2":
            raise ValidationError("-2 before the end of the sequence")
        if tok == "-1":
            if not cur:
                raise ValidationError("empty itemset")
            itemsets.append(cur)
            cur = []
            continue
        item, sep, qty = tok.rpartition(":")
        if not sep or not qty.isdigit():
            raise ValidationError(f"bad entry {tok!r}, expected item:quantity")
        check_item(item)
        if int(qty) < 1:
            raise ValidationError(f"quantity of {item!r} must be >= 1")
        cur.append(QItem(item, int(qty)))
    if cur:
        itemsets.append(cur)
    out = []
    for v in itemsets:
        v.sort(key=lambda e: token_key(e.item))
        if len({e.item for e in v}) != len(v):
            raise ValidationError("item repeated inside an itemset")
        out.append(QItemset(tuple(v)))
    return QSequence(tuple(out))


def parse_database(db_file, utab_file) -> QSDatabase:
    profits = parse_profits(utab_file)
    lines = iter(_lines(db_file))
    try:
        n, header = next(lines)
    except StopIteration:
        raise ParseError(db_file, 1, "missing #DIMS header") from None
    head = header.split("\t")
    if head[0] != "#DIMS":
        raise ParseError(db_file, n, "first line must start with #DIMS")
    try:
        schema = DimensionSchema(tuple(h for h in head[1:]))
    except MdusError as e:
        raise ParseError(db_file, n, str(e)) from None
    m = len(schema)
    txs, seen = [], set()
    for n, line in lines:
        parts = line.split("\t")
        try:
            bar = parts.index("|")
        except ValueError:
            raise ParseError(db_file, n, "missing '|' separator") from None
        if bar != m + 1:
            raise ParseError(db_file, n, f"{bar - 1} dimension values for a {m}-dimension schema")
        if len(parts) != bar + 2:
            raise ParseError(db_file, n, "expected exactly one sequence field after '|'")
        sid = parts[0]
        if sid in seen:
            raise ParseError(db_file, n, f"duplicate SID {sid!r}")
        seen.add(sid)
        try:
            seq = parse_sequence(parts[bar + 1])
            for item in seq.items():
                if item not in profits:
                    raise ValidationError(f"unknown item {item!r} (not in the profit table)")
            txs.append(Transaction(sid, tuple(parts[1:bar]), seq))
        except MdusError as e:
            raise ParseError(db_file, n, str(e)) from None
    return QSDatabase(schema, profits, tuple(txs))


def format_sequence(sq: QSequence) -> str:
    parts = []
    for v in sq:
        parts.append(" ".join(f"{e.item}:{e.quantity}" for e in v))
    return " -1 ".join(parts) + (" -2" if parts else "-2")


def write_database(db: QSDatabase, db_file, utab_file) -> None:
    with open(db_file, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(("#DIMS",) + db.schema.names) + "\n")
        for t in db:
            fh.write("\t".join((t.sid,) + t.dims + ("|", format_sequence(t.seq))) + "\n")
    with open(utab_file, "w", encoding="utf-8", newline="\n") as fh:
        for item in sorted(db.profits.entries, key=token_key):
            fh.write(f"{item}\t{format_money(db.profits[item])}\n")


# -- results -------------------------------------------------------------------

def pattern_line(p: MultiDimPattern, utility) -> str:
    return f"{p.dims_text()}\t{pattern_text(p.seq)}\t#UTIL:{format_money(utility)}"


def stats_record(report: MiningReport) -> dict:
    s = report.stats
    out = {}
    for k in STATS_KEYS:
        v = s.get(k)
        if k in ("min_util", "db_util"):
            v = format_money(v)
        out[k] = v
    return out


def write_results(report: MiningReport, out_file, stats_file=None, dim_names=()) -> None:
    with open(out_file, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(("#DIMS",) + tuple(dim_names)) + "\n")
        for p, u in report.patterns:
            fh.write(pattern_line(p, u) + "\n")
    if stats_file is not None:
        write_stats(report, stats_file)


def write_stats(report: MiningReport, stats_file) -> None:
    with open(stats_file, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(stats_record(report), fh, sort_keys=False)
        fh.write("\n")


def _parse_pattern_text(text: str):
    if not (text.startswith("<") and text.endswith(">")):
        raise ValidationError(f"bad pattern {text!r}")
    body = text[1:-1]
    if not (body.startswith("[") and body.endswith("]")):
        raise ValidationError(f"bad pattern {text!r}")
    return [w.split() for w in body[1:-1].split("][")]


def parse_results(path) -> list:
    out = []
    lines = iter(_lines(path))
    try:
        n, header = next(lines)
    except StopIteration:
        raise ParseError(path, 1, "missing #DIMS header") from None
    if not header.startswith("#DIMS"):
        raise ParseError(path, n, "first line must start with #DIMS")
    for n, line in lines:
        parts = line.split("\t")
        try:
            if len(parts) != 3 or not parts[2].startswith("#UTIL:"):
                raise ValidationError("expected '(dims)<TAB><pattern><TAB>#UTIL:<amount>'")
            dims = parts[0]
            if not (dims.startswith("(") and dims.endswith(")")):
                raise ValidationError(f"bad dimension vector {dims!r}")
            dims = tuple(dims[1:-1].split(",")) if dims != "()" else ()
            out.append((MultiDimPattern(dims, _parse_pattern_text(parts[1])),
                        money(parts[2][len("#UTIL:"):])))
        except MdusError as e:
            raise ParseError(path, n, str(e)) from None
    return out


def first_divergence(a, b):
    """First pattern (canonical order) on which two result lists disagree, or ``None``."""
    da, db_ = dict(a), dict(b)
    diff = [p for p in set(da) | set(db_) if da.get(p) != db_.get(p)]
    if not diff:
        return None
    p = min(diff, key=MultiDimPattern.sort_key)
    return p, da.get(p), db_.get(p)


def ensure_dir(path) -> Path:
    path = Path(path)
    os.makedirs(path, exist_ok=True)
    return path

