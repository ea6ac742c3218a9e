"""Run several miners over a threshold sweep and check they agree."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .em import mine_em
from .formats import first_divergence, pattern_line, write_results
from .model import QSDatabase, check_delta
from .oracle import OracleBounds, oracle_mine
from .sd import mine_sd

ALGOS = ("em", "sd", "oracle")


def run_algo(algo: str, db: QSDatabase, delta, threads: int = 1,
             bounds: OracleBounds = OracleBounds()):
    if algo == "em":
        return mine_em(db, delta, threads)
    if algo == "sd":
        return mine_sd(db, delta, threads)
    if algo == "oracle":
        return oracle_mine(db, delta, bounds)
    raise ValueError(f"unknown algorithm {algo!r}")


@dataclass
class CompareResult:
    reports: dict = field(default_factory=dict)      # (delta, algo) -> MiningReport
    divergences: list = field(default_factory=list)  # (delta, algo_a, algo_b, pattern, ua, ub)

    @property
    def equal(self) -> bool:
        return not self.divergences

    def verdict_lines(self) -> list:
        lines = []
        for (delta, algo), rep in self.reports.items():
            s = rep.stats
            lines.append(f"delta={delta} algo={algo} patterns={s['pattern_count']} "
                         f"candidates={s['candidates_total']} runtime_ms={s['runtime_ms']}")
        if self.equal:
            lines.append("verdict: equal")
        for delta, a, b, p, ua, ub in self.divergences:
            lines.append(f"verdict: DIVERGENT at delta={delta}: {a} vs {b} first differ on "
                         f"{pattern_line(p, ua if ua is not None else ub)} "
                         f"({a}={ua}, {b}={ub})")
        return lines


def run_compare(db: QSDatabase, deltas, algos=("em", "sd"), threads: int = 1,
                out_dir=None, bounds: OracleBounds = OracleBounds()) -> CompareResult:
    """Mine ``db`` with every algorithm at every threshold.

    With ``out_dir`` each run writes ``<algo>_<delta>.txt`` and ``.json``.
    Oracle bound refusals propagate as :class:`~mdus.oracle.OracleRefusal`.
    """
    for d in deltas:
        check_delta(d)
    res = CompareResult()
    for delta in deltas:
        first = None
        for algo in algos:
            rep = run_algo(algo, db, delta, threads, bounds)
            res.reports[(str(delta), algo)] = rep
            if out_dir is not None:
                d = Path(out_dir)
                write_results(rep, d / f"{algo}_{delta}.txt", d / f"{algo}_{delta}.json",
                              db.schema.names)
            if first is None:
                first = (algo, rep)
                continue
            div = first_divergence(first[1].patterns, rep.patterns)
            if div is not None:
                res.divergences.append((str(delta), first[0], algo) + div)
    return res
