"""Dynamic-programming baselines.

``dp_folklore`` fills the O(dk) table DP[i][j] = best j-subset of [i].
``dp_improved`` indexes states by slack instead of position: state (i, j)
fixes the j-th selected index to lie at or before pos(i, j), which leaves only
(k+1)(s+1) states for slack s = d - ((k-1)*delta + 1).

Both keep values in a small rolling buffer and store one choice bit per state
for backtracking. Ties go to not taking the current index.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from .core import Support, as_instance

NEG = -(1 << 62)
# int64 kernels are used when k * max(c) stays below this bound
_KERNEL_LIMIT = 1 << 61


# ---------------------------------------------------------------------------
# folklore O(dk)

def _folklore_py(c, delta, k):
    d = len(c)
    # rows i = 0..d, row 0 and "negative" rows: DP[.][0] = 0, DP[.][j>0] = -inf
    base = [0] + [None] * k
    rows = [base]
    take = [[False] * (k + 1) for _ in range(d + 1)]
    for i in range(1, d + 1):
        prev = rows[i - 1]
        back = rows[i - delta] if i - delta >= 0 else base
        cur = [0] * (k + 1)
        for j in range(1, k + 1):
            skip = prev[j]
            b = back[j - 1]
            cand = None if b is None else b + c[i - 1]
            if cand is not None and (skip is None or cand > skip):
                cur[j] = cand
                take[i][j] = True
            else:
                cur[j] = skip
        rows.append(cur)
    out = []
    i, j = d, k
    while j > 0:
        if take[i][j]:
            out.append(i)
            i -= delta
            j -= 1
        else:
            i -= 1
    return Support(tuple(reversed(out))), rows[d][k]


@njit(cache=True)
def _folklore_kernel(c, delta, k, bits, words):
    d = c.size
    ring = delta + 1
    buf = np.empty((ring, k + 1), dtype=np.int64)
    base = np.empty(k + 1, dtype=np.int64)
    base[:] = NEG
    base[0] = 0
    buf[0, :] = base
    one = np.uint64(1)
    for i in range(1, d + 1):
        prev = buf[(i - 1) % ring]
        cur = buf[i % ring]
        if i - delta >= 0:
            back = buf[(i - delta) % ring]
        else:
            back = base
        ci = c[i - 1]
        cur[0] = 0
        row = i * words
        for j in range(1, k + 1):
            cand = back[j - 1] + ci
            skip = prev[j]
            if cand > skip and back[j - 1] > NEG:
                cur[j] = cand
                bits[row + (j >> 6)] |= one << np.uint64(j & 63)
            else:
                cur[j] = skip
    return buf[d % ring, k]


@njit(cache=True)
def _folklore_backtrack(bits, words, d, delta, k, out):
    i = d
    j = k
    m = 0
    while j > 0:
        if (bits[i * words + (j >> 6)] >> np.uint64(j & 63)) & np.uint64(1):
            out[m] = i
            m += 1
            i -= delta
            j -= 1
        else:
            i -= 1
    return m


def dp_folklore(c, delta: int, k: int) -> tuple[Support, int]:
    """Exact projection by the O(dk) position-indexed DP."""
    inst = as_instance(c, delta, k)
    inst.require_feasible()
    d, k, delta = inst.d, inst.k, inst.delta
    if k == 0:
        return Support(()), 0
    arr = inst.costs.int64()
    if arr is not None and k * max(inst.costs.max(), 1) < _KERNEL_LIMIT:
        words = k // 64 + 1
        bits = np.zeros((d + 1) * words, dtype=np.uint64)
        _folklore_kernel(arr, delta, k, bits, words)
        out = np.empty(k, dtype=np.int64)
        _folklore_backtrack(bits, words, d, delta, k, out)
        sup = Support(tuple(out[::-1].tolist()))
    else:
        sup, _ = _folklore_py(inst.costs.values, delta, k)
    return sup, inst.value_of(sup)


# ---------------------------------------------------------------------------
# slack-indexed O(ks)

def _improved_py(c, delta, k, stats=None):
    d = len(c)
    s = d - ((k - 1) * delta + 1)
    prev = None  # row i - 1
    take = [[False] * (k + 1) for _ in range(s + 1)]
    touched = 0
    for i in range(s + 1):
        cur = [0] * (k + 1)
        touched += 1
        for j in range(1, k + 1):
            touched += 1
            pos = d - (s - i) - (k - j) * delta
            cand = c[pos - 1] + cur[j - 1]
            skip = None if prev is None else prev[j]
            if skip is None or cand > skip:
                cur[j] = cand
                take[i][j] = True
            else:
                cur[j] = skip
        prev = cur
    if stats is not None:
        stats["states"] = touched
    out = []
    i, j = s, k
    while j > 0:
        if take[i][j]:
            out.append(d - (s - i) - (k - j) * delta)
            j -= 1
        else:
            i -= 1
    return Support(tuple(reversed(out))), prev[k]


@njit(cache=True)
def _improved_kernel(c, delta, k, s, bits, words):
    d = c.size
    prev = np.empty(k + 1, dtype=np.int64)
    cur = np.empty(k + 1, dtype=np.int64)
    one = np.uint64(1)
    touched = 0
    for i in range(s + 1):
        cur[0] = 0
        touched += 1
        row = i * words
        for j in range(1, k + 1):
            touched += 1
            pos = d - (s - i) - (k - j) * delta
            cand = c[pos - 1] + cur[j - 1]
            if i == 0 or cand > prev[j]:
                cur[j] = cand
                bits[row + (j >> 6)] |= one << np.uint64(j & 63)
            else:
                cur[j] = prev[j]
        prev, cur = cur, prev
    return prev[k], touched


@njit(cache=True)
def _improved_backtrack(bits, words, d, delta, k, s, out):
    i = s
    j = k
    while j > 0:
        if (bits[i * words + (j >> 6)] >> np.uint64(j & 63)) & np.uint64(1):
            out[j - 1] = d - (s - i) - (k - j) * delta
            j -= 1
        else:
            i -= 1


def dp_improved(c, delta: int, k: int, stats: dict | None = None) -> tuple[Support, int]:
    """Exact projection by the slack-indexed DP.

    If ``stats`` is a dict, the number of table states visited is stored
    under ``"states"``; it is always (k + 1) * (s + 1).
    """
    inst = as_instance(c, delta, k)
    inst.require_feasible()
    d, k, delta = inst.d, inst.k, inst.delta
    if k == 0:
        if stats is not None:
            stats["states"] = 0
        return Support(()), 0
    s = inst.slack
    arr = inst.costs.int64()
    if arr is not None and k * max(inst.costs.max(), 1) < _KERNEL_LIMIT:
        words = k // 64 + 1
        bits = np.zeros((s + 1) * words, dtype=np.uint64)
        _, touched = _improved_kernel(arr, delta, k, s, bits, words)
        out = np.empty(k, dtype=np.int64)
        _improved_backtrack(bits, words, d, delta, k, s, out)
        sup = Support(tuple(out.tolist()))
        if stats is not None:
            stats["states"] = int(touched)
    else:
        sup, _ = _improved_py(inst.costs.values, delta, k, stats)
    return sup, inst.value_of(sup)
