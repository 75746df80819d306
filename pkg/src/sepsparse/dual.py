"""The dual of the separated projection LP and its fixed-w0 restriction.

For a fixed value ``lam`` of the free variable w0 the remaining variables are
found by one left-to-right greedy sweep. The objective ``k*lam + sum(w)`` is
convex and piecewise linear in ``lam``; on [lam-1, lam] its slope equals
``k - |active(lam)|``, which gives a fast search for the best integer w0.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .core import Infeasible, as_instance, check_feasible
from .wide import (
    WideArray,
    _ZERO,
    add128,
    fits128,
    is_pos128,
    join,
    split,
    sub128,
)

# below this length the pure-Python sweep beats the kernel call overhead
PY_CUTOFF = 64


@dataclass(frozen=True)
class DualSolution:
    w0: int
    w: WideArray
    objective: int


@dataclass(frozen=True)
class ActiveSet:
    indices: tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __eq__(self, other):
        if isinstance(other, ActiveSet):
            return self.indices == other.indices
        try:
            return self.indices == tuple(other)
        except TypeError:
            return NotImplemented

    __hash__ = None


# ---------------------------------------------------------------------------
# sweeps

def _sweep_py(c, delta, lam):
    d = len(c)
    w = [0] * d
    window = 0
    total = 0
    last = -delta
    active = []
    for i in range(d):
        diff = c[i] - lam - window
        if diff >= 0:
            if diff:
                w[i] = diff
                window += diff
                total += diff
            if last <= i - delta:
                active.append(i + 1)
                last = i
        j = i - delta + 1
        if j >= 0:
            window -= w[j]
    return w, total, active


@njit(cache=True)
def _sweep_kernel(ch, cl, delta, lh, ll, wh, wl, act):
    d = ch.size
    sh = _ZERO
    sl = _ZERO
    th = _ZERO
    tl = _ZERO
    n_act = 0
    last = -delta
    ovf = False
    for i in range(d):
        bh, bl, o1 = add128(lh, ll, sh, sl)
        dh, dl, o2 = sub128(ch[i], cl[i], bh, bl)
        ovf = ovf or o1 or o2
        if is_pos128(dh, dl):
            wh[i] = dh
            wl[i] = dl
            tight = True
        else:
            wh[i] = _ZERO
            wl[i] = _ZERO
            tight = (dh | dl) == _ZERO
        if tight and last <= i - delta:
            act[n_act] = i + 1
            n_act += 1
            last = i
        sh, sl, o3 = add128(sh, sl, wh[i], wl[i])
        th, tl, o4 = add128(th, tl, wh[i], wl[i])
        ovf = ovf or o3 or o4
        j = i - delta + 1
        if j >= 0:
            sh, sl, o5 = sub128(sh, sl, wh[j], wl[j])
            ovf = ovf or o5
    return th, tl, n_act, ovf


def _sweep(c: WideArray, delta: int, lam: int, want_w: bool = True):
    """Return (w, sum of w, active indices); w is None when not wanted."""
    d = len(c)
    limbs = c.limbs if d >= PY_CUTOFF and fits128(lam) else None
    if limbs is not None:
        hi, lo = limbs
        wh = np.empty(d, dtype=np.uint64)
        wl = np.empty(d, dtype=np.uint64)
        act = np.empty(d, dtype=np.int64)
        lh, ll = split(lam)
        th, tl, n_act, ovf = _sweep_kernel(hi, lo, delta, lh, ll, wh, wl, act)
        if not ovf:
            w = WideArray(limbs=(wh, wl)) if want_w else None
            return w, join(th, tl), act[:n_act]
    w, total, active = _sweep_py(c.values, delta, lam)
    return (WideArray(w) if want_w else None), total, np.asarray(active, dtype=np.int64)


def dual_eval(c, delta: int, k: int, lam: int) -> tuple[int, int]:
    """Objective of the restricted dual at w0 = lam and the active-set size."""
    c = WideArray.coerce(c)
    _, total, active = _sweep(c, delta, lam, want_w=False)
    return k * lam + total, len(active)


def dual_greedy(c, delta: int, lam: int, k: int = 0) -> DualSolution:
    """Lazy greedy solution of the dual with w0 fixed to ``lam``.

    Each constraint i covers w_j for i - delta < j <= i. Scanning left to
    right, w_i is raised just enough to satisfy constraint i given the last
    delta - 1 variables. ``k`` only enters the reported objective.
    """
    c = WideArray.coerce(c)
    lam = int(lam)
    w, total, _ = _sweep(c, delta, lam)
    return DualSolution(lam, w, k * lam + total)


def active_constraints(c, delta: int, sol: DualSolution) -> ActiveSet:
    """Tight constraints picked left to right with gaps of at least delta."""
    c = WideArray.coerce(c).values
    w = sol.w.values
    lam = sol.w0
    window = 0
    last = -delta
    out = []
    for i in range(len(c)):
        window += w[i]
        if c[i] == lam + window and last <= i - delta:
            out.append(i + 1)
            last = i
        j = i - delta + 1
        if j >= 0:
            window -= w[j]
    return ActiveSet(tuple(out))


def is_dual_feasible(c, delta: int, sol: DualSolution) -> bool:
    c = WideArray.coerce(c).values
    w = sol.w.values
    if any(v < 0 for v in w):
        return False
    window = 0
    for i in range(len(c)):
        window += w[i]
        if sol.w0 + window < c[i]:
            return False
        j = i - delta + 1
        if j >= 0:
            window -= w[j]
    return True


# ---------------------------------------------------------------------------
# minimizing over w0

def default_bounds(c: WideArray, k: int) -> tuple[int, int]:
    cmax = c.max()
    return -(k - 1) * cmax, cmax


def _prepare(c, delta, k):
    inst = as_instance(c, delta, k)
    inst.require_feasible()
    if inst.offset:
        raise Infeasible("dual solvers expect non-negative costs")
    return inst.costs


def opt_value_of_dual(c, delta: int, k: int, lb: int | None = None, ub: int | None = None) -> DualSolution:
    """Ternary search for the integer w0 minimizing the dual objective."""
    c = _prepare(c, delta, k)
    dlb, dub = default_bounds(c, k)
    s = dlb if lb is None else int(lb)
    e = dub if ub is None else int(ub)
    if s > e:
        raise Infeasible(f"empty search interval [{s}, {e}]")
    memo: dict[int, int] = {}

    def f(lam):
        if lam not in memo:
            memo[lam] = dual_eval(c, delta, k, lam)[0]
        return memo[lam]

    best = s
    while s <= e:
        third = (e - s) // 3
        left, right = s + third, e - third
        if f(left) <= f(right):
            e = right - 1
            best = left
        else:
            s = left + 1
            best = right
    return dual_greedy(c, delta, best, k)


def _plateau_right_end(c, delta, k, lam0, opt, ub):
    lo, hi = lam0, ub
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if dual_eval(c, delta, k, mid)[0] == opt:
            lo = mid
        else:
            hi = mid - 1
    return lo


def slope_search(c, delta: int, k: int, lb: int, ub: int) -> tuple[int, int]:
    """Largest integer minimizer of the dual objective on [lb, ub] and its value.

    Keeps ``lo`` with ``|active| >= k`` (slope to its left <= 0) and ``hi``
    with ``|active| < k`` (slope to its left > 0). The next probe is where
    the two supporting lines meet; a bisection step is forced whenever the
    bracket fails to halve.
    """
    c = WideArray.coerce(c)
    f_lo, n_lo = dual_eval(c, delta, k, lb)
    if n_lo < k:
        return lb, f_lo
    f_hi, n_hi = dual_eval(c, delta, k, ub + 1)
    if n_hi >= k:
        return ub, dual_eval(c, delta, k, ub)[0]
    lo, hi = lb, ub + 1
    bisect = False
    while hi - lo > 1:
        width = hi - lo
        if bisect:
            m = (lo + hi) // 2
        else:
            a = k - n_lo
            b = k - n_hi
            m = (f_hi - f_lo + a * lo - b * hi) // (a - b)
            m = min(max(m, lo + 1), hi - 1)
        f_m, n_m = dual_eval(c, delta, k, m)
        if n_m >= k:
            lo, f_lo, n_lo = m, f_m, n_m
        else:
            hi, f_hi, n_hi = m, f_m, n_m
        bisect = 2 * (hi - lo) > width
    return lo, f_lo


def max_integer_minimizer_lambda(
    c, delta: int, k: int, method: str = "ternary", lb: int | None = None, ub: int | None = None
) -> int:
    """Largest integer w0 minimizing the restricted dual objective.

    ``method="ternary"`` runs the ternary search and then a binary search to
    the right end of the minimizing plateau. ``method="slope"`` brackets the
    answer with active-set counts instead; both return the same integer.
    """
    c = _prepare(c, delta, k)
    dlb, dub = default_bounds(c, k)
    lb = dlb if lb is None else int(lb)
    ub = dub if ub is None else int(ub)
    if method == "slope":
        return slope_search(c, delta, k, lb, ub)[0]
    if method != "ternary":
        raise ValueError(f"unknown method {method!r}")
    sol = opt_value_of_dual(c, delta, k, lb, ub)
    return _plateau_right_end(c, delta, k, sol.w0, sol.objective, ub)


def dual_optimum(c, delta: int, k: int, lb: int | None = None, ub: int | None = None) -> int:
    """Optimal dual value over integer w0 in [lb, ub] via the slope search."""
    c = _prepare(c, delta, k)
    dlb, dub = default_bounds(c, k)
    lb = dlb if lb is None else int(lb)
    ub = dub if ub is None else int(ub)
    return slope_search(c, delta, k, lb, ub)[1]
