import pytest
from hypothesis import given

from sepsparse.approx import block_argmax, head_approx_2
from sepsparse.core import ProjectionInstance, brute_force_project

from _helpers import instances


def test_example():
    sup, val = head_approx_2((1, 100, 1), 2, 2)
    assert sup.indices == (2,) and val == 100


def test_block_argmax_picks_first_maximum():
    assert block_argmax((1, 3, 3, 0, 2), 2) == [2, 3, 5]


@given(instances(min_k=1))
def test_half_approximation(inst):
    c, delta, k = inst
    sup, val = head_approx_2(c, delta, k)
    _, opt = brute_force_project(ProjectionInstance(c, k, delta))
    assert 2 * val >= opt
    assert len(sup) <= k
    assert val == sum(c[i - 1] for i in sup.indices)
    assert all(b - a >= delta for a, b in zip(sup.indices, sup.indices[1:]))
