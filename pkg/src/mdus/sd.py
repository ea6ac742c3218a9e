"""Mining the sequential part first, then dimensions per sequential pattern."""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor

from .dimminer import DimIndex, build_dim_db, dhui_mine
from .model import QSDatabase, check_delta, database_utility, min_utility
from .report import MiningReport
from .seqminer import SeqDatabase, mine_encoded


def mine_sd(db: QSDatabase, delta, threads: int = 1) -> MiningReport:
    check_delta(delta)
    t0 = time.perf_counter()
    db_util = database_utility(db)
    minutil = min_utility(db_util, delta)
    patterns = {}
    cand_seq = cand_dim = 0
    if minutil > 0:
        seq = mine_encoded(SeqDatabase((t.seq for t in db), db.profits), minutil, threads)
        cand_seq = seq.candidates
        index = DimIndex(db)
        # sequences that miss the threshold never reach dimensional mining
        husps = sorted(seq.patterns.items())

        def one(item):
            husp, rec = item
            dimdb = build_dim_db(husp, (rec.tx, rec.tx_utils), db, index)
            return dhui_mine(husp, dimdb, minutil, db.schema)

        if threads > 1 and len(husps) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                parts = list(pool.map(one, husps))
        else:
            parts = [one(h) for h in husps]
        for part in parts:
            patterns.update(part.patterns)
            cand_dim += part.candidates
    runtime = (time.perf_counter() - t0) * 1000
    return MiningReport(list(patterns.items()), {
        "algo": "sd", "delta": float(delta), "min_util": minutil, "db_util": db_util,
        "candidates_seq": cand_seq, "candidates_dim": cand_dim,
        "candidates_total": cand_seq + cand_dim, "runtime_ms": round(runtime, 3),
    })
