"""The five-transaction running example, with Sex/Age/Occupation dimensions."""
from __future__ import annotations

from .model import DimensionSchema, ProfitTable, QSDatabase, QSequence, Transaction

RUNNING_PROFITS = {"a": 4, "b": 3, "c": 5, "d": 2, "e": 1}

RUNNING_ROWS = [
    ("S1", ("Male", "Young", "Doctor"),
     [[("a", 1), ("c", 3)], [("a", 5), ("c", 1), ("e", 4)], [("c", 2)], [("b", 1)]]),
    ("S2", ("Female", "Middle", "Lawyer"),
     [[("c", 1)], [("b", 4)], [("b", 9), ("d", 8)], [("b", 9), ("e", 6)]]),
    ("S3", ("Male", "Child", "Driver"),
     [[("a", 10), ("d", 5)]]),
    ("S4", ("Male", "Young", "Writer"),
     [[("a", 3), ("b", 4), ("d", 2), ("e", 6)], [("b", 3), ("c", 2)]]),
    ("S5", ("Female", "Old", "Artist"),
     [[("e", 4)], [("d", 7)], [("c", 5)], [("a", 9), ("b", 3), ("c", 7), ("d", 7)]]),
]


def running_example() -> QSDatabase:
    return QSDatabase(
        DimensionSchema(("Sex", "Age", "Occupation")),
        ProfitTable.from_amounts(RUNNING_PROFITS),
        tuple(Transaction(sid, dims, QSequence.of(*seq)) for sid, dims, seq in RUNNING_ROWS),
    )
