"""Deterministic divide and conquer projection.

Only optimal *values* are available cheaply (from the dual), so the support is
reconstructed by masking. Making an index set unattractive and checking
whether the optimum drops tells whether some optimum avoids that set. One
recursion level fixes at most one index r near the middle, decides how many
of the remaining indices go left and right of the window around it, and
recurses on both sides.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .core import Infeasible, Support, as_instance, is_feasible
from .dual import active_constraints, default_bounds, dual_greedy, opt_value_of_dual, slope_search
from .wide import WideArray, affine_mask


@dataclass(frozen=True)
class SparsitySplit:
    """How many indices an optimum puts left of s and right of e."""

    k_left: int
    k_right: int
    s: int
    e: int
    active_low: tuple[int, ...] = ()
    active_high: tuple[int, ...] = ()


@dataclass
class RecoverStats:
    nodes: int = 0
    max_depth: int = 0
    splits: list = field(default_factory=list)


def _opt(c: WideArray, delta: int, k: int, lb=None, ub=None, dual: str = "slope") -> tuple[int, int]:
    """(optimal dual value, a minimizing w0) on [lb, ub]."""
    dlb, dub = default_bounds(c, k)
    lb = dlb if lb is None else lb
    ub = dub if ub is None else ub
    if dual == "slope":
        lam, val = slope_search(c, delta, k, lb, ub)
        return val, lam
    sol = opt_value_of_dual(c, delta, k, lb, ub)
    return sol.objective, sol.w0


def _window(d: int, j_s: int, delta: int) -> tuple[int, int]:
    return j_s, min(j_s + delta - 1, d)


def delta_recovery(c, delta: int, k: int, j_s: int, dual: str = "slope") -> int:
    """An index in [j_s, j_s + delta - 1] used by some optimum, or -1.

    -1 means some optimum avoids the whole window. Costs are raised by one
    before masking so that a masked index always loses value; with a zero
    cost the masking test could not tell a support using it from one that
    avoids it.
    """
    inst = as_instance(c, delta, k)
    inst.require_feasible()
    d = inst.d
    if not 1 <= j_s <= d:
        raise Infeasible(f"j_s={j_s} outside [1, {d}]")
    if k == 0:
        return -1
    c = inst.costs
    j_s, j_e = _window(d, j_s, delta)
    plus = affine_mask(c, 1)
    target = _opt(plus, delta, k, dual=dual)[0] + k

    def avoids(windows):
        masked = affine_mask(c, 2, [(a - 1, b - 1) for a, b in windows])
        return _opt(masked, delta, k, dual=dual)[0] == target

    if avoids([(j_s, j_e)]):
        return -1
    s, e = j_s, j_e
    while s < e:
        mid = (s + e) // 2
        windows = [w for w in ((j_s, s - 1), (mid + 1, j_e)) if w[0] <= w[1]]
        if avoids(windows):
            e = mid
        else:
            s = mid + 1
    return s


def _side_capacity(length: int, delta: int) -> int:
    return -(-length // delta) if length > 0 else 0


def distribute_sparsity(c, delta: int, k_pp: int, s: int, e: int, dual: str = "ternary") -> SparsitySplit:
    """Split k_pp between [1, s-1] and [e+1, d] as some masked optimum does.

    Indices in [s, e] get cost 1 and every other cost is raised by a shift
    large enough that no optimum touches the window. The active sets at an
    optimal w0 and at w0 + 1 bracket the number of left indices.
    """
    cw = WideArray.coerce(c)
    d = len(cw)
    if not (1 <= s <= e <= d):
        raise Infeasible(f"bad window [{s}, {e}] for d={d}")
    if e - s + 1 < delta and e != d:
        raise Infeasible(f"window [{s}, {e}] shorter than delta={delta} and not at the end")
    if k_pp == 0:
        return SparsitySplit(0, 0, s, e)
    if _side_capacity(s - 1, delta) + _side_capacity(d - e, delta) < k_pp:
        raise Infeasible(f"no {delta}-separated {k_pp}-set avoids [{s}, {e}]")
    cmax = cw.max()
    shift = 1 + (k_pp * cmax + 1)
    masked = affine_mask(cw, shift, [(s - 1, e - 1)])
    lb = -(k_pp - 1) * cmax + shift
    ub = cmax + shift
    _, w0 = _opt(masked, delta, k_pp, lb, ub, dual=dual)
    act1 = active_constraints(masked, delta, dual_greedy(masked, delta, w0)).indices
    act2 = active_constraints(masked, delta, dual_greedy(masked, delta, w0 + 1)).indices
    k1_left = sum(1 for i in act1 if i < s)
    k2_left = sum(1 for i in act2 if i < s)
    k2_right = sum(1 for i in act2 if i > e)
    k_left = k2_left + min(k1_left - k2_left, k_pp - k2_left - k2_right)
    return SparsitySplit(k_left, k_pp - k_left, s, e, act1, act2)


def recover(c, delta: int, k: int, dual: str = "slope", stats: RecoverStats | None = None) -> tuple[Support, int]:
    """Exact projection by recursive masking.

    ``dual`` selects the solver used for optimal dual values: "slope" (active
    set bracketing) or "ternary". Both are exact. ``stats`` collects node
    counts, recursion depth and every split for inspection.
    """
    inst = as_instance(c, delta, k)
    inst.require_feasible()
    delta = inst.delta
    out: list[int] = []

    def rec(cw: WideArray, kk: int, base: int, depth: int):
        if kk == 0:
            return
        d = len(cw)
        assert d > 0 and is_feasible(d, kk, delta), (d, kk, delta)
        if stats is not None:
            stats.nodes += 1
            stats.max_depth = max(stats.max_depth, depth)
        j_s = (d + 1) // 2
        r = delta_recovery(cw, delta, kk, j_s, dual=dual)
        if r == -1:
            s, e = _window(d, j_s, delta)
            k_pp = kk
        else:
            s, e = max(r - delta + 1, 1), min(r + delta - 1, d)
            k_pp = kk - 1
        split = distribute_sparsity(cw, delta, k_pp, s, e, dual=dual)
        if stats is not None:
            stats.splits.append((base, d, kk, r, split.k_left, split.k_right))
        rec(cw[: s - 1], split.k_left, base, depth + 1)
        if r != -1:
            out.append(base + r)
        rec(cw[e:], split.k_right, base + e, depth + 1)

    rec(inst.costs, inst.k, 0, 0)
    sup = Support(tuple(out))
    return sup, inst.value_of(sup)
