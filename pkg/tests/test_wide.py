import numpy as np
from hypothesis import given, strategies as st
from numba import njit

from sepsparse.wide import (
    INT128_MAX,
    INT128_MIN,
    WideArray,
    add128,
    affine_mask,
    join,
    lt128,
    mul128_u64,
    split,
    sub128,
)

i128 = st.integers(INT128_MIN, INT128_MAX)


@njit
def _ops(ah, al, bh, bl, m):
    sh, sl, so = add128(ah, al, bh, bl)
    dh, dl, do = sub128(ah, al, bh, bl)
    mh, ml, mo = mul128_u64(ah, al, m)
    return sh, sl, so, dh, dl, do, mh, ml, mo, lt128(ah, al, bh, bl)


def _wrap(x):
    return INT128_MIN <= x <= INT128_MAX


@given(i128, i128, st.integers(0, 2**64 - 1))
def test_limb_arithmetic_matches_python_ints(a, b, m):
    sh, sl, so, dh, dl, do, mh, ml, mo, lt = _ops(*split(a), *split(b), np.uint64(m))
    assert so == (not _wrap(a + b))
    if not so:
        assert join(sh, sl) == a + b
    assert do == (not _wrap(a - b))
    if not do:
        assert join(dh, dl) == a - b
    # the product check is conservative only at the most negative value
    if not _wrap(a * m):
        assert mo
    elif a != INT128_MIN:
        assert not mo and join(mh, ml) == a * m
    assert lt == (a < b)


@given(st.lists(st.integers(-(2**70), 2**70), min_size=1, max_size=20))
def test_wide_array_round_trip(vals):
    w = WideArray(vals)
    hi, lo = w.limbs
    back = WideArray(limbs=(hi, lo))
    assert back.values == tuple(vals)
    assert back.max() == max(vals)
    assert back.min() == min(vals)
    assert [back[i] for i in range(len(vals))] == vals


def test_values_beyond_128_bits_have_no_limbs():
    w = WideArray([1, 2**130])
    assert w.limbs is None
    assert w.int64() is None
    assert w.max() == 2**130


def test_int64_view_only_when_it_fits():
    assert WideArray([1, -2, 3]).int64().tolist() == [1, -2, 3]
    assert WideArray([2**63]).int64() is None


def test_slices_share_limbs():
    w = WideArray.coerce(np.arange(100, dtype=np.int64))
    assert w[10:13].values == (10, 11, 12)
    assert w[95:] == [95, 96, 97, 98, 99]


@given(st.lists(st.integers(0, 2**40), min_size=1, max_size=90), st.integers(0, 2**40), st.data())
def test_affine_mask_matches_definition(vals, shift, data):
    d = len(vals)
    s = data.draw(st.integers(0, d - 1))
    e = data.draw(st.integers(s, d - 1))
    got = affine_mask(WideArray(vals), shift, [(s, e)])
    want = [1 if s <= i <= e else v + shift for i, v in enumerate(vals)]
    assert got.values == tuple(want)
