"""Lagrangian relaxation of the cardinality constraint and the Las Vegas solver.

``proj_lagr`` drops the sparsity constraint and charges ``lam`` per selected
index; a linear-time DP solves it. ``lassp`` perturbs the costs so that the
relaxation evaluated just below its best integer multiplier returns exactly k
indices with high probability, and retries otherwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numba import njit

from .core import IterationLimitExceeded, ProjectionInstance, Support
from .dual import PY_CUTOFF, default_bounds, max_integer_minimizer_lambda, slope_search
from .wide import (
    WideArray,
    _ZERO,
    add128,
    fits128,
    lt128,
    mul128_u64,
    split,
    sub128,
)


@dataclass(frozen=True)
class LagrangianQuery:
    """Relaxation with multiplier ``lambda_num / lambda_den``."""

    costs: WideArray
    delta: int
    lambda_num: int
    lambda_den: int = 1

    def __post_init__(self):
        object.__setattr__(self, "costs", WideArray.coerce(self.costs))
        if int(self.lambda_den) < 1:
            raise ValueError("lambda_den must be >= 1")
        if int(self.delta) < 1:
            raise ValueError("delta must be >= 1")


@dataclass(frozen=True, eq=False)
class PerturbedInstance:
    base: ProjectionInstance
    x: WideArray
    tilde_c: WideArray
    seed: int | None = None


class LasspResult(NamedTuple):
    support: Support
    value: int
    iterations: int


# ---------------------------------------------------------------------------
# relaxation DP

def _lagr_py(c, delta, num, den, take_ties=False):
    d = len(c)
    s = [0] * (d + 1)
    take = [False] * (d + 1)
    for i in range(1, d + 1):
        cand = s[max(i - delta, 0)] + den * c[i - 1] - num
        if cand > s[i - 1] or (take_ties and cand == s[i - 1]):
            s[i] = cand
            take[i] = True
        else:
            s[i] = s[i - 1]
    return s[d], _backtrack(take, delta)


def _backtrack(take, delta):
    out = []
    i = len(take) - 1
    while i > 0:
        if take[i]:
            out.append(i)
            i -= delta
        else:
            i -= 1
    return Support(tuple(reversed(out)))


@njit(cache=True)
def _lagr_kernel(ch, cl, delta, qh, ql, use_count, take):
    # maximize (sum of c_i - q, |S|) lexicographically (or the sum alone)
    d = ch.size
    ah = np.zeros(d + 1, dtype=np.uint64)
    al = np.zeros(d + 1, dtype=np.uint64)
    n = np.zeros(d + 1, dtype=np.int64)
    ovf = False
    for i in range(1, d + 1):
        xh, xl, o1 = sub128(ch[i - 1], cl[i - 1], qh, ql)
        p = i - delta
        if p < 0:
            p = 0
        yh, yl, o2 = add128(ah[p], al[p], xh, xl)
        ovf = ovf or o1 or o2
        yn = n[p] + 1
        if lt128(ah[i - 1], al[i - 1], yh, yl):
            better = True
        elif use_count and ah[i - 1] == yh and al[i - 1] == yl:
            better = yn > n[i - 1]
        else:
            better = False
        take[i] = better
        if better:
            ah[i] = yh
            al[i] = yl
            n[i] = yn
        else:
            ah[i] = ah[i - 1]
            al[i] = al[i - 1]
            n[i] = n[i - 1]
    return ah[d], al[d], n[d], ovf


@njit(cache=True)
def _backtrack_kernel(take, delta, out):
    i = take.size - 1
    m = 0
    while i > 0:
        if take[i]:
            out[m] = i
            m += 1
            i -= delta
        else:
            i -= 1
    return m


def proj_lagr(q: LagrangianQuery, take_ties: bool = False) -> tuple[Support, int]:
    """Best delta-separated support for ``sum(den*c_i - num)``, any size.

    Returns the support and the achieved value of that scaled sum. Ties in
    the DP go to leaving index i out unless ``take_ties`` is set.
    """
    c, delta, num, den = q.costs, q.delta, int(q.lambda_num), int(q.lambda_den)
    d = len(c)
    # num = den*t - r with 0 <= r < den; the objective is den*A + r*|S| where
    # A = sum(c_i - t). If r*d < den it is ordered lexicographically by (A, |S|).
    t = -((-num) // den)
    r = den * t - num
    if not take_ties and d >= PY_CUTOFF and r * d < den and fits128(t):
        limbs = c.limbs
        if limbs is not None:
            hi, lo = limbs
            take = np.zeros(d + 1, dtype=np.bool_)
            th, tl = split(t)
            sh, sl, n, ovf = _lagr_kernel(hi, lo, delta, th, tl, r > 0, take)
            if not ovf:
                out = np.empty(d // delta + 1, dtype=np.int64)
                m = _backtrack_kernel(take, delta, out)
                a = (int(sh) << 64) | int(sl)
                if a >> 127:
                    a -= 1 << 128
                return Support(tuple(out[:m][::-1].tolist())), den * a + r * int(n)
    value, sup = _lagr_py(c.values, delta, num, den, take_ties)
    return sup, value


# ---------------------------------------------------------------------------
# perturbation

def _uniform_below(rng: np.random.Generator, n: int, size: int) -> list[int]:
    if n <= 1 << 63:
        return rng.integers(0, n, size=size, dtype=np.int64).tolist()
    nbytes = (n.bit_length() + 7) // 8
    shift = 8 * nbytes - n.bit_length()
    out = []
    while len(out) < size:
        v = int.from_bytes(rng.bytes(nbytes), "little") >> shift
        if v < n:
            out.append(v)
    return out


@njit(cache=True)
def _perturb_kernel(ch, cl, m, x, oh, ol):
    ovf = False
    for i in range(ch.size):
        h, l, o1 = mul128_u64(ch[i], cl[i], m)
        h, l, o2 = mul128_u64(h, l, m)
        h, l, o3 = add128(h, l, _ZERO, np.uint64(x[i]))
        oh[i] = h
        ol[i] = l
        ovf = ovf or o1 or o2 or o3
    return ovf


def perturb(inst: ProjectionInstance, rng: np.random.Generator, seed: int | None = None) -> PerturbedInstance:
    """``d^4 * c + X`` with X_i uniform on {0, ..., d^3 - 1}."""
    d = inst.d
    n = d ** 3
    if n <= 1 << 63 and d * d < 1 << 64:
        xa = rng.integers(0, n, size=d, dtype=np.int64)
        x = WideArray.coerce(xa)
        limbs = inst.costs.limbs
        if limbs is not None:
            oh = np.empty(d, dtype=np.uint64)
            ol = np.empty(d, dtype=np.uint64)
            if not _perturb_kernel(limbs[0], limbs[1], np.uint64(d * d), xa, oh, ol):
                return PerturbedInstance(inst, x, WideArray(limbs=(oh, ol)), seed)
        xs = xa.tolist()
    else:
        xs = _uniform_below(rng, n, d)
        x = WideArray(xs)
    m = d ** 4
    tilde = WideArray([m * v + xi for v, xi in zip(inst.costs.values, xs)])
    return PerturbedInstance(inst, x, tilde, seed)


# ---------------------------------------------------------------------------
# LASSP

def default_max_iterations(d: int) -> int:
    return 64 * max(1, math.ceil(math.log2(d))) if d > 1 else 64


def _as_rng(rng) -> tuple[np.random.Generator, int | None]:
    if isinstance(rng, np.random.Generator):
        return rng, None
    return np.random.default_rng(rng), (None if rng is None else int(rng))


def lassp(
    inst: ProjectionInstance,
    rng=None,
    max_iterations: int | None = None,
    search: str = "slope",
) -> LasspResult:
    """Exact projection by perturbed Lagrangian relaxation (Las Vegas).

    ``rng`` is a numpy Generator or a seed. ``search`` picks how the best
    integer multiplier is located ("slope" or "ternary"); both give the same
    multiplier. The returned value is measured on the original costs.
    """
    inst.require_feasible()
    k, delta, d = inst.k, inst.delta, inst.d
    if k == 0:
        return LasspResult(Support(()), 0, 0)
    gen, seed = _as_rng(rng)
    limit = default_max_iterations(d) if max_iterations is None else max_iterations
    for it in range(1, limit + 1):
        pert = perturb(inst, gen, seed)
        ct = pert.tilde_c
        lb, ub = default_bounds(ct, k)
        if search == "slope":
            lam = slope_search(ct, delta, k, lb, ub)[0]
        else:
            lam = max_integer_minimizer_lambda(ct, delta, k, method=search)
        sup, _ = proj_lagr(LagrangianQuery(ct, delta, (d + 1) * lam - 1, d + 1))
        if len(sup) == k:
            return LasspResult(sup, inst.value_of(sup), it)
    raise IterationLimitExceeded(f"LASSP did not reach |S| = {k} in {limit} iterations")


def lassp_value_only(inst: ProjectionInstance) -> int:
    """Optimal value from the dual alone, without building a support."""
    inst.require_feasible()
    if inst.k == 0:
        return 0
    c = inst.costs
    lb, ub = default_bounds(c, inst.k)
    return slope_search(c, inst.delta, inst.k, lb, ub)[1] - inst.k * inst.offset
