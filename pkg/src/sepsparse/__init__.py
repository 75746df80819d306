"""Exact projection onto separated sparsity models.

A support is delta-separated when any two of its indices differ by at least
delta. Projecting x onto k-sparse delta-separated vectors amounts to picking
the heaviest such k-set of costs c_i = x_i^2.
"""
from .approx import head_approx_2
from .blocks import project_blocks, window_sums
from .core import (
    Infeasible,
    InstanceTooLarge,
    InvalidInput,
    InvalidParams,
    IterationLimitExceeded,
    ProjectionInstance,
    QuantizationConfig,
    Support,
    brute_force_project,
    count_supports,
    quantize_signal,
    sample_support,
)
from .deterministic import delta_recovery, distribute_sparsity, recover
from .dp import dp_folklore, dp_improved
from .dual import (
    ActiveSet,
    DualSolution,
    active_constraints,
    dual_greedy,
    max_integer_minimizer_lambda,
    opt_value_of_dual,
)
from .lagrangian import LagrangianQuery, lassp, lassp_value_only, proj_lagr
from .wide import WideArray

__all__ = [
    "ActiveSet",
    "DualSolution",
    "Infeasible",
    "InstanceTooLarge",
    "InvalidInput",
    "InvalidParams",
    "IterationLimitExceeded",
    "LagrangianQuery",
    "ProjectionInstance",
    "QuantizationConfig",
    "Support",
    "WideArray",
    "active_constraints",
    "brute_force_project",
    "count_supports",
    "delta_recovery",
    "distribute_sparsity",
    "dp_folklore",
    "dp_improved",
    "dual_greedy",
    "head_approx_2",
    "lassp",
    "lassp_value_only",
    "max_integer_minimizer_lambda",
    "opt_value_of_dual",
    "proj_lagr",
    "project_blocks",
    "quantize_signal",
    "recover",
    "sample_support",
    "window_sums",
]
