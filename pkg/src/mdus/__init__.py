"""Multi-dimensional high-utility sequential pattern mining."""
from .model import (
    SCALE,
    WILDCARD,
    DimensionSchema,
    MdusError,
    MissingProfitError,
    ParameterError,
    ProfitTable,
    QItem,
    QItemset,
    QSDatabase,
    QSequence,
    Transaction,
    ValidationError,
    database_utility,
    format_money,
    item_utility,
    make_pattern,
    min_utility,
    money,
    qitemset_utility,
    transaction_utility,
)
from .matching import MultiDimPattern, max_match_utility, pattern_utility
from .report import MiningReport
from .em import mine_em
from .sd import mine_sd
from .oracle import OracleBounds, OracleRefusal, oracle_mine
from .datasets import running_example

__version__ = "0.1.0"

__all__ = [
    "SCALE", "WILDCARD", "DimensionSchema", "MdusError", "MissingProfitError",
    "ParameterError", "ProfitTable", "QItem", "QItemset", "QSDatabase", "QSequence",
    "Transaction", "ValidationError", "database_utility", "format_money", "item_utility",
    "make_pattern", "min_utility", "money", "qitemset_utility", "transaction_utility",
    "MultiDimPattern", "max_match_utility", "pattern_utility", "MiningReport", "mine_em",
    "mine_sd", "OracleBounds", "OracleRefusal", "oracle_mine", "running_example",
]
