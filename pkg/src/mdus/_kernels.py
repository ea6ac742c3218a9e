"""Hot inner loops of the miners.

Every kernel exists twice: a numba ``@njit`` loop and a vectorized numpy
version. ``MDUS_NO_NUMBA=1`` (or a missing numba) selects the numpy path at
import time; :func:`set_backend` switches at runtime for tests and benchmarks.
Both paths must return identical arrays.

Projection layout shared by all kernels: three parallel arrays ``(tx, pos,
util)`` sorted by ``(tx, pos)`` where ``pos`` is an absolute cell index into
the flattened database and ``util`` is the best embedding utility ending at
that cell.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False


def _env_wants_numba() -> bool:
    return os.environ.get("MDUS_NO_NUMBA", "").strip().lower() in ("", "0", "false", "no")


def njit(*args, **kwargs):
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)

    def deco(fn):
        return fn
    return deco


# -- numba ------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _grow_numba(p_tx, p_pos, p_util, tx_end, iset_end, cell_item, cell_util, n_items):
    n = p_tx.shape[0]
    # exact output size: the rest of each entry's itemset, plus every cell
    # after the first entry's itemset once per transaction
    cap = 0
    i = 0
    while i < n:
        t = p_tx[i]
        j = i
        while j < n and p_tx[j] == t:
            cap += iset_end[p_pos[j]] - p_pos[j] - 1
            j += 1
        cap += tx_end[t] - iset_end[p_pos[i]]
        i = j

    o_key = np.empty(cap, np.int64)
    o_tx = np.empty(cap, np.int64)
    o_pos = np.empty(cap, np.int64)
    o_util = np.empty(cap, np.int64)
    k = 0
    i = 0
    while i < n:
        t = p_tx[i]
        j = i
        while j < n and p_tx[j] == t:
            j += 1
        # I-extensions: later cells of the same itemset
        for e in range(i, j):
            pos = p_pos[e]
            u = p_util[e]
            for c in range(pos + 1, iset_end[pos]):
                o_key[k] = cell_item[c]
                o_tx[k] = t
                o_pos[k] = c
                o_util[k] = u + cell_util[c]
                k += 1
        # S-extensions: any cell of a later itemset, on top of the best
        # embedding that ends in an earlier itemset
        e = i
        best = np.int64(-1)
        c = iset_end[p_pos[i]]
        end = tx_end[t]
        while c < end:
            while e < j and iset_end[p_pos[e]] <= c:
                if p_util[e] > best:
                    best = p_util[e]
                e += 1
            o_key[k] = n_items + cell_item[c]
            o_tx[k] = t
            o_pos[k] = c
            o_util[k] = best + cell_util[c]
            k += 1
            c += 1
        i = j
    return o_key, o_tx, o_pos, o_util


@njit(cache=True, nogil=True)
def _summarize_numba(key, tx, pos, util, cell_rutil, tx_util):
    n = key.shape[0]
    g_start = np.empty(n + 1, np.int64)
    g_key = np.empty(n, np.int64)
    g_u = np.zeros(n, np.int64)
    g_peu = np.zeros(n, np.int64)
    g_swu = np.zeros(n, np.int64)
    g = -1
    cur_tx = -1
    bu = np.int64(0)
    bp = np.int64(0)
    for idx in range(n):
        new_group = idx == 0 or key[idx] != key[idx - 1]
        if new_group or tx[idx] != cur_tx:
            if cur_tx >= 0:
                g_u[g] += bu
                g_peu[g] += bp
                g_swu[g] += tx_util[cur_tx]
            if new_group:
                g += 1
                g_start[g] = idx
                g_key[g] = key[idx]
            cur_tx = tx[idx]
            bu = util[idx]
            bp = util[idx] + cell_rutil[pos[idx]]
        else:
            if util[idx] > bu:
                bu = util[idx]
            v = util[idx] + cell_rutil[pos[idx]]
            if v > bp:
                bp = v
    if cur_tx >= 0:
        g_u[g] += bu
        g_peu[g] += bp
        g_swu[g] += tx_util[cur_tx]
    ng = g + 1
    g_start[ng] = n
    return g_start[:ng + 1], g_key[:ng], g_u[:ng], g_peu[:ng], g_swu[:ng]


@njit(cache=True, nogil=True)
def _intersect_numba(a_idx, a_util, b_idx, b_util):
    na = a_idx.shape[0]
    nb = b_idx.shape[0]
    cap = min(na, nb)
    o_idx = np.empty(cap, np.int64)
    o_util = np.empty(cap, np.int64)
    i = 0
    j = 0
    k = 0
    while i < na and j < nb:
        if a_idx[i] < b_idx[j]:
            i += 1
        elif a_idx[i] > b_idx[j]:
            j += 1
        else:
            o_idx[k] = a_idx[i]
            o_util[k] = min(a_util[i], b_util[j])
            k += 1
            i += 1
            j += 1
    return o_idx[:k], o_util[:k]


# -- numpy ------------------------------------------------------------------

def _ranges(starts, counts):
    """Concatenate ``arange(s, s + c)`` for every (s, c) without a Python loop."""
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    owner = np.repeat(np.arange(len(starts)), counts)
    offsets = np.cumsum(counts) - counts
    return owner, starts[owner] + (np.arange(total) - offsets[owner])


def _grow_numpy(p_tx, p_pos, p_util, tx_end, iset_end, cell_item, cell_util, n_items):
    empty = np.empty(0, np.int64)
    if len(p_tx) == 0:
        return empty, empty, empty, empty

    owner, c = _ranges(p_pos + 1, iset_end[p_pos] - p_pos - 1)
    i_key = cell_item[c].astype(np.int64)
    i_tx = p_tx[owner]
    i_util = p_util[owner] + cell_util[c]

    first = np.flatnonzero(np.r_[True, p_tx[1:] != p_tx[:-1]])
    s_start = iset_end[p_pos[first]]
    s_owner, sc = _ranges(s_start, tx_end[p_tx[first]] - s_start)
    s_tx = p_tx[first][s_owner]
    # running max of entry utilities within each transaction, then look up the
    # last entry whose itemset ends at or before the extension cell
    seg_len = np.diff(np.r_[first, len(p_tx)])
    span = int(p_util.max()) + 1
    if span * len(first) < 2**62:
        # offset each transaction above the previous one so one accumulate
        # cannot leak a maximum across transactions
        seg = np.repeat(np.arange(len(first), dtype=np.int64), seg_len) * span
        runmax = np.maximum.accumulate(p_util + seg) - seg
    else:
        runmax = np.concatenate([np.maximum.accumulate(p_util[f:f + m])
                                 for f, m in zip(first, seg_len)])
    width = np.int64(len(cell_item) + 1)
    entry_key = p_tx * width + iset_end[p_pos]
    at = np.searchsorted(entry_key, s_tx * width + sc, side="right") - 1
    s_util = runmax[at] + cell_util[sc]
    s_key = n_items + cell_item[sc].astype(np.int64)

    # the numba kernel emits, per transaction, I-extensions then S-extensions
    key = np.concatenate([i_key, s_key])
    tx = np.concatenate([i_tx, s_tx])
    pos = np.concatenate([c, sc])
    util = np.concatenate([i_util, s_util])
    order = np.lexsort((np.r_[np.zeros(len(c), np.int8), np.ones(len(sc), np.int8)], tx),)
    return key[order], tx[order], pos[order], util[order]


def _summarize_numpy(key, tx, pos, util, cell_rutil, tx_util):
    n = len(key)
    if n == 0:
        z = np.empty(0, np.int64)
        return np.zeros(1, np.int64), z, z, z, z
    g_first = np.r_[True, key[1:] != key[:-1]]
    pair_first = g_first | np.r_[True, tx[1:] != tx[:-1]]
    p_start = np.flatnonzero(pair_first)
    pu = np.maximum.reduceat(util, p_start)
    pp = np.maximum.reduceat(util + cell_rutil[pos], p_start)
    ps = tx_util[tx[p_start]]
    g_start = np.flatnonzero(g_first)
    g_of_pair = np.cumsum(g_first[p_start]) - 1
    ng = len(g_start)
    g_u = np.zeros(ng, np.int64)
    g_peu = np.zeros(ng, np.int64)
    g_swu = np.zeros(ng, np.int64)
    np.add.at(g_u, g_of_pair, pu)
    np.add.at(g_peu, g_of_pair, pp)
    np.add.at(g_swu, g_of_pair, ps)
    return np.r_[g_start, n].astype(np.int64), key[g_start], g_u, g_peu, g_swu


def _intersect_numpy(a_idx, a_util, b_idx, b_util):
    common, ia, ib = np.intersect1d(a_idx, b_idx, assume_unique=True, return_indices=True)
    return common.astype(np.int64), np.minimum(a_util[ia], b_util[ib])


# -- dispatch ---------------------------------------------------------------

_BACKENDS = {
    "numba": (_grow_numba, _summarize_numba, _intersect_numba),
    "numpy": (_grow_numpy, _summarize_numpy, _intersect_numpy),
}

backend = "numba" if HAVE_NUMBA and _env_wants_numba() else "numpy"
grow, summarize, intersect = _BACKENDS[backend]


def set_backend(name: str) -> str:
    """Select ``"numba"`` or ``"numpy"``; returns the previous backend name."""
    global backend, grow, summarize, intersect
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    prev = backend
    backend = name
    grow, summarize, intersect = _BACKENDS[name]
    return prev
