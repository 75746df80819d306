import numpy as np
import pytest
from hypothesis import given, strategies as st

from sepsparse.core import Infeasible, ProjectionInstance, brute_force_project
from sepsparse.dual import (
    _sweep_py,
    active_constraints,
    default_bounds,
    dual_eval,
    dual_greedy,
    dual_optimum,
    is_dual_feasible,
    max_integer_minimizer_lambda,
    opt_value_of_dual,
    slope_search,
)
from sepsparse.selftest import dual_structure_failures
from sepsparse.wide import WideArray

from _helpers import all_separated, instances

TEN = (4, 6, 4, 3, 3, 5, 6, 2, 2, 2)
COUNTER = (4, 7, 5, 0, 0, 5, 8, 5)


def test_greedy_on_ten_index_instance():
    sol = dual_greedy(TEN, 3, 2, k=3)
    assert sol.w0 == 2
    assert sol.w == (2, 2, 0, 0, 1, 2, 1, 0, 0, 0)
    assert active_constraints(TEN, 3, sol) == (1, 5, 10)
    assert is_dual_feasible(TEN, 3, sol)
    assert sol.objective == 3 * 2 + 8


def test_counterexample_dual():
    sol = opt_value_of_dual(COUNTER, 2, 3)
    assert sol.objective == 17
    assert max_integer_minimizer_lambda(COUNTER, 2, 3, "ternary") == 2
    assert max_integer_minimizer_lambda(COUNTER, 2, 3, "slope") == 2
    assert dual_optimum(COUNTER, 2, 3) == 17


def test_dual_rejects_negative_costs():
    with pytest.raises(Infeasible):
        opt_value_of_dual([-1, 2, 3], 1, 1)


def test_unknown_method():
    with pytest.raises(ValueError):
        max_integer_minimizer_lambda(COUNTER, 2, 3, "newton")


def test_empty_interval():
    with pytest.raises(Infeasible):
        opt_value_of_dual(COUNTER, 2, 3, lb=5, ub=4)


@given(instances(min_k=1))
def test_structure_properties(inst):
    c, delta, k = inst
    assert dual_structure_failures(c, delta, k) == []


@given(instances(max_d=9), st.integers(-40, 20))
def test_fixed_multiplier_matches_enumeration(inst, lam):
    # with w0 fixed, the greedy total equals the best relaxed primal value
    c, delta, _ = inst
    obj, _ = dual_eval(c, delta, 0, lam)
    best = max(sum(c[i - 1] - lam for i in s) for s in all_separated(len(c), delta))
    assert obj == max(best, 0)


@given(instances(min_k=1))
def test_both_searches_agree_with_brute_force(inst):
    c, delta, k = inst
    _, opt = brute_force_project(ProjectionInstance(c, k, delta))
    lb, ub = default_bounds(WideArray(c), k)
    lam, val = slope_search(c, delta, k, lb, ub)
    assert val == opt
    assert dual_eval(c, delta, k, lam)[0] == opt
    assert max_integer_minimizer_lambda(c, delta, k, "ternary") == lam
    # lam is the largest minimizer
    if lam < ub:
        assert dual_eval(c, delta, k, lam + 1)[0] > opt


@given(instances(min_k=1), st.integers(-30, 30))
def test_slope_is_active_count_gap(inst, lam):
    c, delta, k = inst
    f0, _ = dual_eval(c, delta, k, lam - 1)
    f1, n1 = dual_eval(c, delta, k, lam)
    assert f1 - f0 == k - n1


def test_kernel_matches_python_path():
    rng = np.random.default_rng(3)
    for _ in range(30):
        d = int(rng.integers(64, 300))
        delta = int(rng.integers(1, 8))
        c = rng.integers(0, 2**40, size=d)
        lam = int(rng.integers(-(2**41), 2**41))
        w_py, total_py, act_py = _sweep_py(c.tolist(), delta, lam)
        sol = dual_greedy(c, delta, lam)
        assert sol.w.values == tuple(w_py)
        assert sol.objective == total_py
        assert active_constraints(c, delta, sol) == tuple(act_py)


def test_huge_costs_use_python_ints():
    c = [2**130, 0, 2**129, 5]
    sol = opt_value_of_dual(c, 2, 2)
    assert sol.objective == 2**130 + 2**129
