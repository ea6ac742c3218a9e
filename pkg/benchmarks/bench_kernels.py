"""Numba vs numpy kernels: per-kernel timings and end-to-end mining.

    python3 benchmarks/bench_kernels.py [--transactions N] [--repeat R]

Both backends must give identical output; the script checks that too.
"""
import argparse
import time

import numpy as np

from mdus import _kernels, mine_em, mine_sd
from mdus.generator import GenParams, gen_synthetic
from mdus.seqminer import SeqDatabase


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def kernel_inputs(db: SeqDatabase, rng):
    # a level-1 style projection: every occurrence of the most common item
    item = int(np.bincount(db.cell_item).argmax())
    cells = np.flatnonzero(db.cell_item == item).astype(np.int64)
    util = db.cell_util[cells]
    key, tx, pos, u = _kernels._grow_numba(db.cell_tx[cells], cells, util, db.tx_end,
                                           db.iset_end, db.cell_item, db.cell_util, db.n_items)
    order = np.argsort(key, kind="stable")
    a = np.sort(rng.choice(db.n_tx, db.n_tx // 2, replace=False)).astype(np.int64)
    b = np.sort(rng.choice(db.n_tx, db.n_tx // 2, replace=False)).astype(np.int64)
    return {
        "grow": (db.cell_tx[cells], cells, util, db.tx_end, db.iset_end, db.cell_item,
                 db.cell_util, db.n_items),
        "summarize": (key[order], tx[order], pos[order], u[order], db.cell_rutil, db.tx_util),
        "intersect": (a, rng.integers(0, 10**6, len(a)), b, rng.integers(0, 10**6, len(b))),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--transactions", type=int, default=10_000)
    ap.add_argument("--items", type=int, default=100)
    ap.add_argument("--delta", default="0.005")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    qdb = gen_synthetic(GenParams(args.transactions, args.items, (5, 5, 5, 5), seed=1))
    db = SeqDatabase([t.seq for t in qdb], qdb.profits)
    inputs = kernel_inputs(db, np.random.default_rng(0))

    print(f"{'kernel':<12}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}")
    for name, args_ in inputs.items():
        nb = getattr(_kernels, f"_{name}_numba")
        npy = getattr(_kernels, f"_{name}_numpy")
        nb(*args_)  # compile
        t_nb, out_nb = best_of(lambda: nb(*args_), args.repeat)
        t_np, out_np = best_of(lambda: npy(*args_), args.repeat)
        assert all(np.array_equal(x, y) for x, y in zip(out_nb, out_np)), name
        print(f"{name:<12}{t_nb * 1e3:>12.3f}{t_np * 1e3:>12.3f}{t_np / t_nb:>9.1f}x")

    print(f"\nend to end, {args.transactions} transactions, delta={args.delta}")
    print(f"{'algo':<12}{'numba s':>12}{'numpy s':>12}{'speedup':>10}")
    for f in (mine_em, mine_sd):
        res = {}
        for backend in ("numba", "numpy"):
            prev = _kernels.set_backend(backend)
            try:
                res[backend] = best_of(lambda: f(qdb, args.delta), 1)
            finally:
                _kernels.set_backend(prev)
        assert res["numba"][1].patterns == res["numpy"][1].patterns
        t_nb, t_np = res["numba"][0], res["numpy"][0]
        print(f"{f.__name__:<12}{t_nb:>12.2f}{t_np:>12.2f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
