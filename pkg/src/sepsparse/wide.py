"""Exact integer vectors with a 128-bit fast path.

Python ints are the reference representation: every algorithm in the package
has a plain-Python implementation that is exact for any magnitude. Hot loops
additionally run as numba kernels on signed 128-bit integers stored as two
``uint64`` limbs (``hi``, ``lo``). Each kernel reports overflow, and callers
rerun the Python implementation when it does, so results never wrap.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
from numba import njit

U64 = np.uint64
_SIGN = np.uint64(1 << 63)
_ZERO = np.uint64(0)
_ONE = np.uint64(1)
_M32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)
_S63 = np.uint64(63)

MASK64 = (1 << 64) - 1
INT128_MAX = (1 << 127) - 1
INT128_MIN = -(1 << 127)
INT64_MAX = (1 << 63) - 1


class WideOverflow(ArithmeticError):
    """A value left the range of the 128-bit fast path."""


# ---------------------------------------------------------------------------
# scalar conversions

def fits128(x: int) -> bool:
    return INT128_MIN <= x <= INT128_MAX


def split(x: int) -> tuple[np.uint64, np.uint64]:
    if not fits128(x):
        raise WideOverflow(x)
    x &= (1 << 128) - 1
    return np.uint64(x >> 64), np.uint64(x & MASK64)


def join(hi, lo) -> int:
    x = (int(hi) << 64) | int(lo)
    if x >> 127:
        x -= 1 << 128
    return x


# ---------------------------------------------------------------------------
# numba primitives; all arguments and results are uint64 limbs

@njit(inline="always")
def add128(ah, al, bh, bl):
    lo = al + bl
    hi = ah + bh
    if lo < al:
        hi += _ONE
    ovf = ((~(ah ^ bh)) & (ah ^ hi)) >> _S63
    return hi, lo, ovf != _ZERO


@njit(inline="always")
def sub128(ah, al, bh, bl):
    lo = al - bl
    hi = ah - bh
    if al < bl:
        hi -= _ONE
    ovf = ((ah ^ bh) & (ah ^ hi)) >> _S63
    return hi, lo, ovf != _ZERO


@njit(inline="always")
def lt128(ah, al, bh, bl):
    ah ^= _SIGN
    bh ^= _SIGN
    return ah < bh or (ah == bh and al < bl)


@njit(inline="always")
def is_neg128(ah):
    return (ah >> _S63) != _ZERO


@njit(inline="always")
def is_pos128(ah, al):
    return (ah >> _S63) == _ZERO and (ah | al) != _ZERO


@njit(inline="always")
def mul64(a, b):
    """Full 64x64 -> 128 bit unsigned product."""
    a0 = a & _M32
    a1 = a >> _S32
    b0 = b & _M32
    b1 = b >> _S32
    p0 = a0 * b0
    p1 = a0 * b1
    p2 = a1 * b0
    p3 = a1 * b1
    mid = (p0 >> _S32) + (p1 & _M32) + (p2 & _M32)
    lo = (p0 & _M32) | (mid << _S32)
    hi = p3 + (p1 >> _S32) + (p2 >> _S32) + (mid >> _S32)
    return hi, lo


@njit(inline="always")
def mul128_u64(ah, al, m):
    """Signed 128-bit value times an unsigned 64-bit factor."""
    neg = is_neg128(ah)
    if neg:
        ah, al, _ = sub128(_ZERO, _ZERO, ah, al)
    h1, lo = mul64(al, m)
    h2, l2 = mul64(ah, m)
    hi = h1 + l2
    ovf = h2 != _ZERO or hi < h1 or (hi >> _S63) != _ZERO
    if neg:
        hi, lo, _ = sub128(_ZERO, _ZERO, hi, lo)
    return hi, lo, ovf


# ---------------------------------------------------------------------------
# vectors

def _int64_to_limbs(arr: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    arr = np.ascontiguousarray(arr, dtype=np.int64)
    lo = arr.view(np.uint64).copy()
    hi = np.where(arr < 0, np.uint64(MASK64), np.uint64(0)).astype(np.uint64)
    return hi, lo


class WideArray:
    """Immutable vector of exact integers.

    Either the Python-int tuple or the limb pair may be the source of truth;
    the other view is built on demand. ``limbs`` is ``None`` when some entry
    does not fit in 128 bits.
    """

    __slots__ = ("_values", "_limbs", "_has_limbs", "_max")

    def __init__(self, values: Iterable[int] | None = None, *, limbs=None):
        self._values = None if values is None else tuple(int(v) for v in values)
        self._limbs = limbs
        self._has_limbs = limbs is not None
        self._max = None
        if self._values is None and limbs is None:
            raise ValueError("WideArray needs values or limbs")

    @classmethod
    def coerce(cls, c) -> "WideArray":
        if isinstance(c, WideArray):
            return c
        if isinstance(c, np.ndarray) and c.dtype.kind in "iu" and c.dtype.itemsize <= 8:
            if c.dtype == np.uint64 and c.size and int(c.max()) > INT64_MAX:
                return cls(c.tolist())
            arr = c.astype(np.int64)
            out = cls(limbs=_int64_to_limbs(arr))
            return out
        return cls(c)

    def __len__(self) -> int:
        if self._values is not None:
            return len(self._values)
        return self._limbs[0].size

    @property
    def values(self) -> tuple[int, ...]:
        if self._values is None:
            hi, lo = self._limbs
            signed = hi.view(np.int64).astype(object)
            self._values = tuple((signed * (1 << 64) + lo.astype(object)).tolist())
        return self._values

    @property
    def limbs(self):
        if not self._has_limbs:
            vals = self._values
            if all(-INT64_MAX - 1 <= v <= INT64_MAX for v in vals):
                self._limbs = _int64_to_limbs(np.array(vals, dtype=np.int64))
            elif all(fits128(v) for v in vals):
                pairs = [split(v) for v in vals]
                self._limbs = (
                    np.array([p[0] for p in pairs], dtype=np.uint64),
                    np.array([p[1] for p in pairs], dtype=np.uint64),
                )
            self._has_limbs = True
        return self._limbs

    def min(self) -> int:
        arr = self.int64() if self._values is None else None
        if arr is not None:
            return int(arr.min()) if arr.size else 0
        return min(self.values, default=0)

    def max(self) -> int:
        if self._max is None:
            if self._values is None:
                hi, lo = self._limbs
                self._max = join(*_max128(hi, lo)) if hi.size else 0
            else:
                self._max = max(self._values, default=0)
        return self._max

    def __getitem__(self, item):
        if isinstance(item, slice):
            if self._values is None:
                hi, lo = self._limbs
                return WideArray(limbs=(hi[item], lo[item]))
            out = WideArray(self._values[item])
            if self._has_limbs and self._limbs is not None:
                out._limbs = (self._limbs[0][item], self._limbs[1][item])
                out._has_limbs = True
            return out
        if self._values is None:
            hi, lo = self._limbs
            return join(hi[item], lo[item])
        return self._values[item]

    def __iter__(self):
        return iter(self.values)

    def __eq__(self, other):
        if isinstance(other, WideArray):
            return self.values == other.values
        try:
            return self.values == tuple(int(v) for v in other)
        except TypeError:
            return NotImplemented

    __hash__ = None

    def int64(self) -> np.ndarray | None:
        """The values as an int64 array, or None when some entry does not fit."""
        limbs = self.limbs
        if limbs is None:
            return None
        hi, lo = limbs
        signed = lo.view(np.int64)
        if np.array_equal(hi, np.where(signed < 0, np.uint64(MASK64), np.uint64(0))):
            return signed
        return None

    def __repr__(self) -> str:
        vals = self.values
        if len(vals) > 8:
            return f"WideArray(d={len(vals)}, max={self.max()})"
        return f"WideArray({list(vals)})"


def as_ints(c: Sequence[int] | WideArray) -> tuple[int, ...]:
    return c.values if isinstance(c, WideArray) else tuple(int(v) for v in c)


@njit(cache=True)
def _max128(hi, lo):
    bh = hi[0]
    bl = lo[0]
    for i in range(1, hi.size):
        if lt128(bh, bl, hi[i], lo[i]):
            bh = hi[i]
            bl = lo[i]
    return bh, bl


@njit(cache=True)
def affine_mask_kernel(ch, cl, windows, inside, shift_h, shift_l, out_h, out_l):
    """out_i = inside on the 0-based windows, else c_i + shift."""
    ovf = False
    for i in range(ch.size):
        h, l, o = add128(ch[i], cl[i], shift_h, shift_l)
        out_h[i] = h
        out_l[i] = l
        ovf = ovf or o
    for w in range(windows.shape[0]):
        for i in range(max(windows[w, 0], 0), min(windows[w, 1] + 1, ch.size)):
            out_h[i] = _ZERO
            out_l[i] = inside
    return ovf


def affine_mask(c: WideArray, shift: int, windows=(), inside: int = 1) -> WideArray:
    """``inside`` on the given 0-based inclusive windows, ``c_i + shift`` elsewhere."""
    limbs = c.limbs if len(c) >= 64 else None
    if limbs is not None and fits128(shift) and 0 <= inside <= INT64_MAX:
        hi, lo = limbs
        out_h = np.empty_like(hi)
        out_l = np.empty_like(lo)
        sh, sl = split(shift)
        win = np.array(list(windows), dtype=np.int64).reshape(-1, 2)
        if not affine_mask_kernel(hi, lo, win, np.uint64(inside), sh, sl, out_h, out_l):
            return WideArray(limbs=(out_h, out_l))
    out = [v + shift for v in c.values]
    for s, e in windows:
        for i in range(max(s, 0), min(e + 1, len(out))):
            out[i] = inside
    return WideArray(out)
