"""Projection onto k blocks of b consecutive indices.

Block starts must be at least delta + b - 1 apart. Replacing every index by
the sum of the b costs starting there turns the problem into a plain
separated projection with separation delta + b - 1 on d - b + 1 window sums.
"""
from __future__ import annotations

from typing import Callable

import numpy as np

from .core import Infeasible, ProjectionInstance, Support, as_instance, check_feasible
from .wide import WideArray


def window_sums(c, b: int) -> WideArray:
    """``c^b_i = c_i + ... + c_{i+b-1}`` for i = 1..d-b+1, exact."""
    cw = WideArray.coerce(c)
    d = len(cw)
    if b < 1 or b > d:
        raise Infeasible(f"block length {b} does not fit in d={d}")
    arr = cw.int64()
    if arr is not None and (cw.max() + 1) * b < 1 << 62:
        cs = np.concatenate(([0], np.cumsum(arr)))
        return WideArray.coerce(cs[b:] - cs[:-b])
    vals = cw.values
    cur = sum(vals[:b])
    out = [cur]
    for i in range(b, d):
        cur += vals[i] - vals[i - b]
        out.append(cur)
    return WideArray(out)


def blocks_feasible(d: int, k: int, delta: int, b: int) -> bool:
    return k == 0 or (k - 1) * (delta + b - 1) + b <= d


def _engine(name: str) -> Callable:
    if name == "recover":
        from .deterministic import recover
        return recover
    if name == "lassp":
        from .lagrangian import lassp

        def run(c, delta, k):
            res = lassp(ProjectionInstance(c, k, delta), 0)
            return res.support, res.value
        return run
    if name in ("dp", "dp_improved", "dp-fast"):
        from .dp import dp_improved
        return dp_improved
    if name == "dp_folklore":
        from .dp import dp_folklore
        return dp_folklore
    raise ValueError(f"unknown engine {name!r}")


def project_blocks(c, delta: int, b: int, k: int, engine: str = "recover") -> tuple[Support, int]:
    """Best k block starts and the total cost covered by their blocks."""
    inst = as_instance(c, delta, k)
    d = inst.d
    if b < 1:
        raise Infeasible("block length must be >= 1")
    if not blocks_feasible(d, k, delta, b):
        raise Infeasible(f"{k} blocks of length {b} with delta={delta} do not fit in d={d}")
    if k == 0:
        return Support(()), 0
    cb = window_sums(inst.costs, b)
    starts, _ = _engine(engine)(cb, delta + b - 1, k)
    return starts, blocks_value(inst.costs, starts, b) - k * b * inst.offset


def blocks_value(c, starts, b: int) -> int:
    vals = WideArray.coerce(c).values
    return sum(sum(vals[p - 1:p - 1 + b]) for p in starts)


def enumerate_block_starts(d: int, k: int, delta: int, b: int):
    """All start tuples in lexicographic order, by direct recursion on starts."""
    gap = delta + b - 1

    def rec(first, left):
        if left == 0:
            yield ()
            return
        for p in range(first, d - b + 2):
            for rest in rec(p + gap, left - 1):
                yield (p,) + rest

    yield from rec(1, k)


def brute_force_blocks(c, delta: int, b: int, k: int) -> tuple[Support, int]:
    """Block-aware oracle: every start tuple, blocks summed directly."""
    vals = WideArray.coerce(c).values
    d = len(vals)
    if not blocks_feasible(d, k, delta, b):
        raise Infeasible("infeasible block instance")
    best, best_val = None, None
    for starts in enumerate_block_starts(d, k, delta, b):
        v = sum(vals[p - 1 + j] for p in starts for j in range(b))
        if best_val is None or v > best_val:
            best, best_val = starts, v
    return Support(best), best_val
