"""Oracle-equivalence and invariant checks shared by the CLI and the tests.

``ALGORITHMS`` maps a name to a function returning the optimal value of an
instance. It is a plain module-level dict so a test can swap an entry for a
broken implementation and watch the suite fail.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .core import ProjectionInstance, brute_force_project, is_feasible
from .deterministic import recover
from .dp import dp_folklore, dp_improved
from .dual import active_constraints, dual_eval, dual_greedy, is_dual_feasible, opt_value_of_dual
from .lagrangian import lassp


def _lassp_value(c, delta, k, rng):
    res = lassp(ProjectionInstance(c, k, delta), rng)
    assert res.support.in_model(len(c), k, delta)
    return res.value


def _checked(fn):
    def run(c, delta, k, rng):
        sup, val = fn(c, delta, k)
        assert sup.in_model(len(c), k, delta), (fn.__name__, sup)
        return val
    return run


ALGORITHMS = {
    "lassp": _lassp_value,
    "recover": _checked(recover),
    "dp_folklore": _checked(dp_folklore),
    "dp_improved": _checked(dp_improved),
    "opt_value_of_dual": lambda c, delta, k, rng: opt_value_of_dual(c, delta, k).objective,
}


@dataclass
class Report:
    instances: int = 0
    checks: int = 0
    failures: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def first_failure_json(self) -> str:
        return json.dumps(self.failures[0], sort_keys=True) if self.failures else ""


def check_instance(c, delta: int, k: int, rng, report: Report, algorithms=None) -> None:
    algorithms = ALGORITHMS if algorithms is None else algorithms
    _, expect = brute_force_project(ProjectionInstance(c, k, delta))
    report.instances += 1
    for name, fn in algorithms.items():
        report.checks += 1
        report.counts[name] = report.counts.get(name, 0) + 1
        try:
            got = fn(c, delta, k, rng)
        except Exception as exc:  # a crash is a failure like any other
            got = f"{type(exc).__name__}: {exc}"
        if got != expect:
            report.failures.append(
                {"algo": name, "costs": list(c), "delta": delta, "k": k, "expected": expect, "got": got}
            )


def oracle_suite(
    max_d: int = 12,
    max_delta: int = 4,
    trials: int = 200,
    seed: int = 0,
    exhaustive_d: int = 5,
    exhaustive_values: int = 3,
    high: int = 15,
    algorithms=None,
    stop_at_first: bool = False,
) -> Report:
    """Compare every algorithm with brute force.

    Exhaustive part: every cost vector in {0..exhaustive_values-1}^d for
    d <= exhaustive_d. Random part: ``trials`` vectors in [0, high] for every
    (d, delta) with d <= max_d; each vector is checked for all feasible k.
    """
    rng = np.random.default_rng(seed)
    report = Report()

    def shapes(dmax):
        for d in range(1, dmax + 1):
            for delta in range(1, max_delta + 1):
                ks = [k for k in range(0, d + 1) if is_feasible(d, k, delta)]
                yield d, delta, ks

    for d, delta, ks in shapes(min(exhaustive_d, max_d)):
        for c in itertools.product(range(exhaustive_values), repeat=d):
            for k in ks:
                check_instance(c, delta, k, rng, report, algorithms)
                if stop_at_first and report.failures:
                    return report
    for d, delta, ks in shapes(max_d):
        for _ in range(trials):
            c = tuple(int(v) for v in rng.integers(0, high + 1, size=d))
            for k in ks:
                check_instance(c, delta, k, rng, report, algorithms)
                if stop_at_first and report.failures:
                    return report
    return report


def dual_invariants(instances: int = 100, max_d: int = 10, seed: int = 0, high: int = 15) -> Report:
    """Convexity, monotone active sets, feasibility and the optimality certificate."""
    rng = np.random.default_rng(seed)
    report = Report()
    for _ in range(instances):
        d = int(rng.integers(1, max_d + 1))
        delta = int(rng.integers(1, 5))
        kmax = (d - 1) // delta + 1
        k = int(rng.integers(1, kmax + 1))
        c = tuple(int(v) for v in rng.integers(0, high + 1, size=d))
        report.instances += 1
        fails = dual_structure_failures(c, delta, k)
        report.checks += 4
        for f in fails:
            report.failures.append({"check": f, "costs": list(c), "delta": delta, "k": k})
    return report


def dual_structure_failures(c, delta: int, k: int) -> list[str]:
    """Names of the dual structure properties that fail on this instance."""
    cmax = max(c)
    lams = range(-(k - 1) * cmax - 2, cmax + 3)
    vals, sizes = [], []
    fails = []
    for lam in lams:
        sol = dual_greedy(c, delta, lam, k)
        if not is_dual_feasible(c, delta, sol):
            fails.append("feasibility")
            break
        vals.append(sol.objective)
        sizes.append(len(active_constraints(c, delta, sol)))
    diffs = [b - a for a, b in zip(vals, vals[1:])]
    if any(b < a for a, b in zip(diffs, diffs[1:])):
        fails.append("convexity")
    if any(b > a for a, b in zip(sizes, sizes[1:])):
        fails.append("monotone_active")
    sol = opt_value_of_dual(c, delta, k)
    a0 = len(active_constraints(c, delta, sol))
    a1 = dual_eval(c, delta, k, sol.w0 + 1)[1]
    if not (a0 >= k >= a1):
        fails.append("certificate")
    _, opt = brute_force_project(ProjectionInstance(c, k, delta))
    if sol.objective != opt:
        fails.append("strong_duality")
    return fails
