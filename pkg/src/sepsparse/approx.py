"""Parity-block 2-approximation of the separated projection.

Cut [d] into blocks of length delta and keep each block's heaviest index.
Indices from blocks of equal parity are at least delta + 1 apart, so the k
heaviest picks from the odd blocks, or from the even blocks, form a feasible
set. The better of the two carries at least half the optimum, but it may hold
fewer than k indices.
"""
from __future__ import annotations

from .core import InvalidInput, Support, as_instance


def block_argmax(c, delta: int) -> list[int]:
    """1-based argmax of each length-delta block; ties go to the smaller index."""
    out = []
    for start in range(0, len(c), delta):
        block = c[start:start + delta]
        best = max(range(len(block)), key=lambda j: (block[j], -j))
        out.append(start + best + 1)
    return out


def head_approx_2(c, delta: int, k: int) -> tuple[Support, int]:
    if delta < 1 or k < 0:
        raise InvalidInput(f"need delta >= 1 and k >= 0, got delta={delta} k={k}")
    inst = as_instance(c, delta, k)
    if k == 0:
        return Support(()), 0
    vals = inst.costs.values
    picks = block_argmax(vals, delta)
    groups = []
    for parity in (0, 1):
        chosen = picks[parity::2]
        chosen = sorted(chosen, key=lambda i: (-vals[i - 1], i))[:k]
        groups.append(Support(tuple(chosen)))
    g, h = groups
    best = g if g.value(vals) >= h.value(vals) else h
    assert best.is_separated(delta)
    return best, inst.value_of(best)
