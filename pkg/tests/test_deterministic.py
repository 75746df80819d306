import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sepsparse.core import Infeasible, ProjectionInstance, brute_force_project, enumerate_supports
from sepsparse.deterministic import RecoverStats, delta_recovery, distribute_sparsity, recover

from _helpers import instances

COUNTER = (4, 7, 5, 0, 0, 5, 8, 5)
SMALL = (3, 2, 1, 4, 1, 1, 2, 1)


def _optima(c, delta, k):
    sups = list(enumerate_supports(len(c), k, delta))
    vals = [sum(c[i - 1] for i in s) for s in sups]
    best = max(vals)
    return [s for s, v in zip(sups, vals) if v == best]


def test_delta_recovery_example():
    assert delta_recovery(SMALL, 2, 4, 4) == 4


def test_delta_recovery_reports_avoidable_window():
    # the optimum {1, 4} never touches index 2 or 3
    assert delta_recovery((9, 0, 0, 9), 2, 2, 2) == -1


def test_delta_recovery_zero_cost_index():
    # the only optimum uses a zero-cost index; masking must still see it
    assert delta_recovery((0,), 1, 1, 1) == 1
    assert delta_recovery((5, 0, 5), 1, 3, 2) == 2


def test_delta_recovery_bad_window():
    with pytest.raises(Infeasible):
        delta_recovery(SMALL, 2, 4, 9)


@given(instances(max_d=9, min_k=1), st.data())
def test_delta_recovery_is_sound(inst, data):
    c, delta, k = inst
    d = len(c)
    j_s = data.draw(st.integers(1, d))
    r = delta_recovery(c, delta, k, j_s)
    window = range(j_s, min(j_s + delta - 1, d) + 1)
    opts = _optima(c, delta, k)
    if r == -1:
        assert any(not set(s) & set(window) for s in opts)
    else:
        assert r in window
        assert any(r in s for s in opts)


def test_distribute_sparsity_examples():
    sp = distribute_sparsity(SMALL, 2, 3, 3, 5)
    assert (sp.k_left, sp.k_right) == (1, 2)
    assert sp.active_low == (1, 6, 8)
    sp = distribute_sparsity(SMALL, 2, 3, 3, 5, dual="slope")
    assert (sp.k_left, sp.k_right) == (1, 2)
    assert sp.active_high == (1, 6)
    sp = distribute_sparsity((5, 0, 0, 5), 2, 2, 2, 3)
    assert (sp.k_left, sp.k_right) == (1, 1)


def test_distribute_sparsity_errors():
    with pytest.raises(Infeasible):
        distribute_sparsity(SMALL, 2, 3, 5, 3)
    with pytest.raises(Infeasible):
        distribute_sparsity(SMALL, 3, 1, 3, 4)
    with pytest.raises(Infeasible):
        distribute_sparsity(SMALL, 2, 4, 2, 7)


@given(instances(max_d=10, min_k=1), st.data())
def test_distribute_sparsity_is_achievable(inst, data):
    # some optimum among supports avoiding [s, e] splits as reported
    c, delta, k = inst
    d = len(c)
    s = data.draw(st.integers(1, d))
    e = data.draw(st.integers(s, d))
    if e - s + 1 < delta and e != d:
        return
    left = [t for t in enumerate_supports(d, k, delta) if not any(s <= i <= e for i in t)]
    if not left:
        with pytest.raises(Infeasible):
            distribute_sparsity(c, delta, k, s, e)
        return
    sp = distribute_sparsity(c, delta, k, s, e)
    best = max(sum(c[i - 1] for i in t) for t in left)
    assert any(
        sum(c[i - 1] for i in t) == best and sum(i < s for i in t) == sp.k_left for t in left
    )
    assert sp.k_left + sp.k_right == k


def test_recover_examples():
    assert recover(COUNTER, 2, 3)[1] == 17
    assert recover((0,), 1, 1) == (recover((0,), 1, 1)[0], 0)
    assert recover((0,), 1, 1)[0].indices == (1,)
    assert recover(SMALL, 2, 0)[0].indices == ()


def test_recover_negative_costs_are_shifted():
    sup, val = recover((-5, -1, -3), 1, 2)
    assert sup.indices == (2, 3) and val == -4


@given(instances(min_k=1), st.sampled_from(["slope", "ternary"]))
def test_recover_is_exact(inst, dual):
    c, delta, k = inst
    stats = RecoverStats()
    sup, val = recover(c, delta, k, dual=dual, stats=stats)
    _, opt = brute_force_project(ProjectionInstance(c, k, delta))
    assert val == opt
    assert sup.in_model(len(c), k, delta)
    assert stats.max_depth <= math.ceil(math.log2(len(c))) + 2


def test_recover_depth_is_logarithmic_on_a_large_instance():
    rng = np.random.default_rng(5)
    d = 2000
    c = rng.integers(0, 10**6, size=d)
    stats = RecoverStats()
    sup, val = recover(c, 7, 150, stats=stats)
    assert sup.in_model(d, 150, 7)
    assert stats.max_depth <= math.ceil(math.log2(d)) + 2
    # every split accounts for the whole budget at its node
    for _, _, kk, r, kl, kr in stats.splits:
        assert kl + kr + (r != -1) == kk
