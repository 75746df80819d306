"""Problem representation shared by every projection engine.

A projection instance asks for the heaviest k-subset of [d] whose indices are
pairwise at least ``delta`` apart. Costs are exact integers; real signals are
first quantized with :func:`quantize_signal`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .wide import WideArray, as_ints


class SepSparseError(Exception):
    """Base class for errors raised by this package."""


class InvalidInput(SepSparseError, ValueError):
    pass


class Infeasible(SepSparseError, ValueError):
    pass


class InstanceTooLarge(SepSparseError, ValueError):
    pass


class IterationLimitExceeded(SepSparseError, RuntimeError):
    pass


class InvalidParams(SepSparseError, ValueError):
    pass


DEFAULT_BRUTE_FORCE_CAP = 24


def is_feasible(d: int, k: int, delta: int) -> bool:
    """Does [d] contain k indices with pairwise gaps >= delta?"""
    return k == 0 or (k - 1) * delta + 1 <= d


def check_feasible(d: int, k: int, delta: int) -> None:
    if d < 0 or k < 0 or delta < 1:
        raise Infeasible(f"bad parameters d={d} k={k} delta={delta}")
    if not is_feasible(d, k, delta):
        raise Infeasible(f"no {delta}-separated support of size {k} in [{d}]")


@dataclass(frozen=True)
class Support:
    """Sorted 1-based index set."""

    indices: tuple[int, ...] = ()

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if any(b <= a for a, b in zip(idx, idx[1:])):
            idx = tuple(sorted(set(idx)))
        object.__setattr__(self, "indices", idx)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, i) -> bool:
        return i in self.indices

    def separation(self) -> int | None:
        """Smallest gap between consecutive indices, None for fewer than two."""
        idx = self.indices
        if len(idx) < 2:
            return None
        return min(b - a for a, b in zip(idx, idx[1:]))

    def is_separated(self, delta: int) -> bool:
        sep = self.separation()
        return sep is None or sep >= delta

    def in_model(self, d: int, k: int, delta: int) -> bool:
        idx = self.indices
        if len(idx) != k or not self.is_separated(delta):
            return False
        return not idx or (idx[0] >= 1 and idx[-1] <= d)

    def value(self, costs) -> int:
        c = costs if isinstance(costs, WideArray) else as_ints(costs)
        return sum(c[i - 1] for i in self.indices)

    def mask(self, d: int) -> np.ndarray:
        m = np.zeros(d, dtype=bool)
        if self.indices:
            m[np.asarray(self.indices) - 1] = True
        return m


@dataclass(frozen=True)
class QuantizationConfig:
    gamma: int = 32

    def __post_init__(self):
        if int(self.gamma) != self.gamma or self.gamma < 1:
            raise InvalidParams(f"gamma must be a positive integer, got {self.gamma}")


@dataclass(frozen=True, eq=False)
class ProjectionInstance:
    """Costs, sparsity and separation of one projection problem.

    Negative costs are shifted up so that the smallest becomes zero. Every
    feasible support has exactly k elements, so the shift changes all
    objective values by ``k * offset`` and leaves the maximizers alone.
    ``value_of`` reports values on the costs as given.
    """

    costs: WideArray
    k: int
    delta: int
    d: int = field(init=False)
    offset: int = field(init=False)

    def __post_init__(self):
        c = WideArray.coerce(self.costs)
        if len(c) < 1:
            raise InvalidInput("cost vector must be non-empty")
        if int(self.delta) < 1 or int(self.k) < 0:
            raise InvalidInput(f"need delta >= 1 and k >= 0, got delta={self.delta} k={self.k}")
        lo = c.min()
        offset = 0
        if lo < 0:
            offset = -lo
            c = WideArray([v + offset for v in c.values])
        object.__setattr__(self, "costs", c)
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "delta", int(self.delta))
        object.__setattr__(self, "d", len(c))
        object.__setattr__(self, "offset", offset)

    @property
    def feasible(self) -> bool:
        return is_feasible(self.d, self.k, self.delta)

    def require_feasible(self) -> None:
        check_feasible(self.d, self.k, self.delta)

    @property
    def slack(self) -> int:
        return self.d - ((self.k - 1) * self.delta + 1)

    def value_of(self, support: Support) -> int:
        return support.value(self.costs) - len(support) * self.offset


def as_instance(c, delta: int, k: int) -> ProjectionInstance:
    if isinstance(c, ProjectionInstance):
        return c
    return ProjectionInstance(c, k, delta)


# ---------------------------------------------------------------------------
# quantization

def _square_ratio(x: float, m: float, gamma: int) -> int:
    # round(x^2 / m^2 * 2^gamma), exact, ties to even
    if x == 0.0:
        return 0
    q = (Fraction(x) / Fraction(m)) ** 2 * (1 << gamma)
    return round(q)


def quantize_signal(x: Sequence[float], cfg: QuantizationConfig | None = None) -> WideArray:
    """Integer costs ``round(x_i^2 * 2^gamma / max_j x_j^2)``.

    The ratio is evaluated exactly on the binary values of ``x``, so scaling
    the signal by a power of two never changes the result.
    """
    cfg = cfg or QuantizationConfig()
    arr = np.asarray(x, dtype=float).ravel()
    if arr.size == 0:
        raise InvalidInput("empty signal")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput("signal contains non-finite entries")
    a = np.abs(arr)
    m = float(a.max())
    if m == 0.0:
        return WideArray.coerce(np.zeros(arr.size, dtype=np.int64))
    gamma = cfg.gamma
    out = [_square_ratio(float(v), m, gamma) for v in a]
    if gamma <= 62:
        return WideArray.coerce(np.array(out, dtype=np.int64))
    return WideArray(out)


# ---------------------------------------------------------------------------
# enumeration and counting

def enumerate_supports(d: int, k: int, delta: int, start: int = 1) -> Iterator[tuple[int, ...]]:
    """All delta-separated k-subsets of [start, d] in lexicographic order."""
    if k == 0:
        yield ()
        return
    last_first = d - (k - 1) * delta
    for i in range(start, last_first + 1):
        for rest in enumerate_supports(d, k - 1, delta, i + delta):
            yield (i,) + rest


def count_supports(d: int, k: int, delta: int, b: int = 1) -> int:
    """Number of k block starts in [d] with start gaps >= delta + b - 1.

    For ``b == 1`` this is the size of the separated sparsity model. Blocks of
    length b must fit inside [d], so starts range over [1, d - b + 1].
    """
    if k < 0 or d < 0 or delta < 1 or b < 1:
        return 0
    if k == 0:
        return 1
    span = d - b + 1
    gap = delta + b - 1
    top = span - (k - 1) * gap - 1 + k
    if top < k:
        return 0
    return math.comb(top, k)


def brute_force_project(inst: ProjectionInstance, cap: int = DEFAULT_BRUTE_FORCE_CAP) -> tuple[Support, int]:
    """Exhaustive oracle. Ties go to the lexicographically smallest support."""
    inst.require_feasible()
    if inst.d > cap:
        raise InstanceTooLarge(f"d={inst.d} exceeds brute force cap {cap}")
    c = inst.costs.values
    best = None
    best_val = None
    for s in enumerate_supports(inst.d, inst.k, inst.delta):
        v = 0
        for i in s:
            v += c[i - 1]
        if best_val is None or v > best_val:
            best, best_val = s, v
    sup = Support(best)
    return sup, inst.value_of(sup)


def sample_support(d: int, k: int, delta: int, rng: np.random.Generator) -> Support:
    """Uniform element of the separated model via stars and bars."""
    check_feasible(d, k, delta)
    if k == 0:
        return Support(())
    slack = d - (k - 1) * delta - 1
    bars = np.sort(rng.choice(slack + k, size=k, replace=False))
    j = np.arange(k)
    pos = 1 + bars + j * (delta - 1)
    return Support(tuple(int(p) for p in pos))
